#pragma once

// Image file loading: 8-bit grayscale PNG (any PNG is converted to 8-bit
// gray by libpng), uncompressed BMP, and the plain-text 32x32 matrix format
// used for fixtures. Files are dispatched on content, not extension, except
// for ".txt" matrices.

#include <png.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "glyph/char_matrix.hpp"
#include "glyph/errors.hpp"
#include "glyph/image.hpp"

namespace glyph {

inline GrayImage load_png(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str()))
    throw InvalidInputError("PNG read failed: " + path.string() + ": " +
                            image.message);
  image.format = PNG_FORMAT_GRAY;
  GrayImage out;
  out.width = static_cast<int>(image.width);
  out.height = static_cast<int>(image.height);
  out.samples.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, out.samples.data(), 0, nullptr)) {
    png_image_free(&image);
    throw InvalidInputError("PNG decode failed: " + path.string() + ": " +
                            image.message);
  }
  if (!out.valid())
    throw InvalidInputError("PNG has degenerate dimensions: " + path.string());
  return out;
}

inline void save_png(const GrayImage& img, const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width);
  image.height = static_cast<png_uint_32>(img.height);
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0,
                               img.samples.data(), 0, nullptr))
    throw Error("PNG write failed: " + path.string() + ": " + image.message);
}

namespace detail {

inline std::uint32_t get_u32le(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 |
         std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}
inline std::int32_t get_i32le(const std::uint8_t* p) {
  return static_cast<std::int32_t>(get_u32le(p));
}
inline std::uint16_t get_u16le(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

inline std::uint8_t luminance(int r, int g, int b) {
  return static_cast<std::uint8_t>((299 * r + 587 * g + 114 * b + 500) / 1000);
}

}  // namespace detail

// Uncompressed (BI_RGB) BMP at 1, 4, 8, 24 or 32 bits per pixel; palette
// images map through the palette's luminance.
inline GrayImage load_bmp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot open file: " + path.string());
  std::vector<std::uint8_t> raw((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
  auto fail = [&path](const std::string& why) -> GrayImage {
    throw InvalidInputError("BMP " + path.string() + ": " + why);
  };

  if (raw.size() < 54 || raw[0] != 'B' || raw[1] != 'M')
    return fail("not an uncompressed BMP file");
  const std::uint32_t data_offset = detail::get_u32le(&raw[10]);
  const std::uint32_t header_size = detail::get_u32le(&raw[14]);
  if (header_size < 40) return fail("unsupported DIB header");
  const std::int32_t width = detail::get_i32le(&raw[18]);
  const std::int32_t height_raw = detail::get_i32le(&raw[22]);
  const int bpp = detail::get_u16le(&raw[28]);
  const std::uint32_t compression = detail::get_u32le(&raw[30]);
  if (width < 1 || height_raw == 0) return fail("degenerate dimensions");
  if (compression != 0) return fail("compressed BMP not supported");
  if (bpp != 1 && bpp != 4 && bpp != 8 && bpp != 24 && bpp != 32)
    return fail("unsupported bit depth " + std::to_string(bpp));

  const bool top_down = height_raw < 0;
  const int height = top_down ? -height_raw : height_raw;

  std::vector<std::uint8_t> palette_gray;
  if (bpp <= 8) {
    std::uint32_t colors = detail::get_u32le(&raw[46]);
    if (colors == 0) colors = 1u << bpp;
    const std::size_t pal_off = 14 + header_size;
    if (raw.size() < pal_off + 4 * colors) return fail("truncated palette");
    palette_gray.resize(colors);
    for (std::uint32_t i = 0; i < colors; ++i) {
      const std::uint8_t* q = &raw[pal_off + 4 * i];  // BGRA quads
      palette_gray[i] = detail::luminance(q[2], q[1], q[0]);
    }
  }

  const std::size_t stride = ((static_cast<std::size_t>(bpp) * width + 31) / 32) * 4;
  if (raw.size() < data_offset + stride * height) return fail("truncated pixel data");

  GrayImage out(width, height);
  for (int r = 0; r < height; ++r) {
    const int src_row = top_down ? r : height - 1 - r;
    const std::uint8_t* row = &raw[data_offset + stride * src_row];
    for (int c = 0; c < width; ++c) {
      std::uint8_t v = 0;
      switch (bpp) {
        case 1: {
          const int idx = (row[c >> 3] >> (7 - (c & 7))) & 1;
          v = palette_gray[idx];
          break;
        }
        case 4: {
          const int idx = (c & 1) ? (row[c >> 1] & 0x0f) : (row[c >> 1] >> 4);
          if (idx >= static_cast<int>(palette_gray.size()))
            return fail("palette index out of range");
          v = palette_gray[idx];
          break;
        }
        case 8: {
          const int idx = row[c];
          if (idx >= static_cast<int>(palette_gray.size()))
            return fail("palette index out of range");
          v = palette_gray[idx];
          break;
        }
        case 24:
          v = detail::luminance(row[3 * c + 2], row[3 * c + 1], row[3 * c]);
          break;
        case 32:
          v = detail::luminance(row[4 * c + 2], row[4 * c + 1], row[4 * c]);
          break;
      }
      out.at(r, c) = v;
    }
  }
  return out;
}

// Dispatch on the file's magic bytes.
inline GrayImage load_gray_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot open file: " + path.string());
  std::uint8_t magic[8] = {};
  in.read(reinterpret_cast<char*>(magic), sizeof(magic));
  in.close();

  static const std::uint8_t png_sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (std::memcmp(magic, png_sig, 8) == 0) return load_png(path);
  if (magic[0] == 'B' && magic[1] == 'M') return load_bmp(path);
  throw InvalidInputError("unrecognized image format: " + path.string());
}

inline bool is_text_matrix_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext == ".txt";
}

inline CharMatrix load_text_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open file: " + path.string());
  try {
    return CharMatrix::from_text(in);
  } catch (const InvalidInputError& e) {
    throw InvalidInputError(path.string() + ": " + e.what());
  }
}

}  // namespace glyph
