#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace glyph {

// 8-bit grayscale image, row-major, intensities in [0,255].
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> samples;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 255)
      : width(w), height(h), samples(static_cast<std::size_t>(w) * h, fill) {}

  std::uint8_t at(int row, int col) const {
    return samples[static_cast<std::size_t>(row) * width + col];
  }
  std::uint8_t& at(int row, int col) {
    return samples[static_cast<std::size_t>(row) * width + col];
  }
  bool valid() const {
    return width >= 1 && height >= 1 &&
           samples.size() == static_cast<std::size_t>(width) * height;
  }
};

// Binary image; 1 = black ink, 0 = white background.
struct Bitmap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;  // row-major, each element 0 or 1

  Bitmap() = default;
  Bitmap(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), bits(static_cast<std::size_t>(w) * h, fill) {}

  std::uint8_t at(int row, int col) const {
    return bits[static_cast<std::size_t>(row) * width + col];
  }
  std::uint8_t& at(int row, int col) {
    return bits[static_cast<std::size_t>(row) * width + col];
  }

  long ink_count() const {
    long n = 0;
    for (auto b : bits) n += b;
    return n;
  }

  bool operator==(const Bitmap&) const = default;
};

}  // namespace glyph
