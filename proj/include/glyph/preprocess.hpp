#pragma once

// Raw grayscale image -> normalized 32x32 binary matrix: threshold, crop to
// the ink bounding box, rescale by exact area coverage.

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>

#include "glyph/char_matrix.hpp"
#include "glyph/errors.hpp"
#include "glyph/image.hpp"

namespace glyph {

struct ThresholdMode {
  enum class Kind { otsu, fixed };
  Kind kind = Kind::otsu;
  int value = 128;  // used when kind == fixed

  static ThresholdMode otsu() { return {Kind::otsu, 0}; }
  static ThresholdMode fixed(int t) { return {Kind::fixed, t}; }
};

// Otsu's threshold t, chosen so that ink = {intensity < t}. Maximizes the
// between-class variance of the split {x < t} vs {x >= t} over t in [1,255];
// ties resolve to the smallest t, so a uniform all-0 image turns fully black
// and a uniform all-255 image fully white.
inline int otsu_threshold(const GrayImage& img) {
  std::array<double, 256> hist{};
  for (auto s : img.samples) hist[s] += 1.0;
  const double total = static_cast<double>(img.samples.size());

  double sum_all = 0;
  for (int v = 0; v < 256; ++v) sum_all += v * hist[v];

  int best_t = 1;
  double best_var = -1.0;
  double w0 = 0, sum0 = 0;
  for (int t = 1; t <= 255; ++t) {
    w0 += hist[t - 1];
    sum0 += (t - 1) * hist[t - 1];
    const double w1 = total - w0;
    double var = 0.0;
    if (w0 > 0 && w1 > 0) {
      const double m0 = sum0 / w0;
      const double m1 = (sum_all - sum0) / w1;
      var = w0 * w1 * (m0 - m1) * (m0 - m1);
    }
    if (var > best_var) {
      best_var = var;
      best_t = t;
    }
  }
  return best_t;
}

// A pixel is ink (1) iff its intensity is strictly below the threshold.
inline Bitmap binarize(const GrayImage& img,
                       const ThresholdMode& mode = ThresholdMode::otsu()) {
  if (!img.valid()) throw InvalidInputError("binarize: empty or malformed image");
  const int t =
      mode.kind == ThresholdMode::Kind::otsu ? otsu_threshold(img) : mode.value;
  Bitmap out(img.width, img.height);
  for (std::size_t i = 0; i < img.samples.size(); ++i)
    out.bits[i] = img.samples[i] < t ? 1 : 0;
  return out;
}

struct CropResult {
  Bitmap bitmap;
  bool empty = false;  // set when the input had no ink; bitmap is the input
};

// Minimal axis-aligned sub-rectangle containing all ink.
inline CropResult crop_to_content(const Bitmap& bmp) {
  int top = bmp.height, bottom = -1, left = bmp.width, right = -1;
  for (int r = 0; r < bmp.height; ++r)
    for (int c = 0; c < bmp.width; ++c)
      if (bmp.at(r, c)) {
        if (r < top) top = r;
        if (r > bottom) bottom = r;
        if (c < left) left = c;
        if (c > right) right = c;
      }
  if (bottom < 0) return {bmp, true};

  Bitmap out(right - left + 1, bottom - top + 1);
  for (int r = top; r <= bottom; ++r)
    for (int c = left; c <= right; ++c)
      out.at(r - top, c - left) = bmp.at(r, c);
  return {out, false};
}

namespace detail {

// Source interval (in coordinates scaled by 32) covered by output index i
// along one axis. Downscaled axes map cell i to [i*src, (i+1)*src); axes
// smaller than 32 replicate the nearest source pixel [32p, 32(p+1)).
struct AxisSpan {
  long lo, hi;  // half-open, scaled by 32
};

inline AxisSpan axis_span(int i, int src) {
  if (src >= CharMatrix::kSize) {
    return {static_cast<long>(i) * src, static_cast<long>(i + 1) * src};
  }
  const long p = static_cast<long>(2 * i + 1) * src / 64;  // nearest pixel
  return {32 * p, 32 * (p + 1)};
}

}  // namespace detail

// Rescale to 32x32. A cell turns black iff ink covers at least half of its
// source rectangle; the overlap arithmetic is integral, so the comparison is
// exact. If thresholding would erase all ink (possible for sparse input),
// the cell with the densest source rectangle is marked instead.
inline CharMatrix normalize_32(const Bitmap& bmp) {
  if (bmp.width < 1 || bmp.height < 1 || bmp.ink_count() == 0)
    throw InvalidInputError("normalize_32: bitmap has no ink");

  CharMatrix out;
  long best_area = -1;
  int best_l = 1, best_m = 1;
  for (int l = 1; l <= CharMatrix::kSize; ++l) {
    const auto ys = detail::axis_span(l - 1, bmp.height);
    for (int m = 1; m <= CharMatrix::kSize; ++m) {
      const auto xs = detail::axis_span(m - 1, bmp.width);
      long ink_area = 0;
      for (long r = ys.lo / 32; r * 32 < ys.hi; ++r) {
        const long oy = std::min<long>(32 * (r + 1), ys.hi) -
                        std::max<long>(32 * r, ys.lo);
        for (long c = xs.lo / 32; c * 32 < xs.hi; ++c) {
          if (!bmp.at(static_cast<int>(r), static_cast<int>(c))) continue;
          const long ox = std::min<long>(32 * (c + 1), xs.hi) -
                          std::max<long>(32 * c, xs.lo);
          ink_area += ox * oy;
        }
      }
      const long cell_area = (ys.hi - ys.lo) * (xs.hi - xs.lo);
      if (2 * ink_area >= cell_area) out.set_ink(l, m);
      if (ink_area > best_area) {
        best_area = ink_area;
        best_l = l;
        best_m = m;
      }
    }
  }
  if (!out.any_ink()) out.set_ink(best_l, best_m);
  return out;
}

}  // namespace glyph
