#pragma once

// Structural features of a 32x32 binary character matrix.
//
// A character is described by 256 integers in 16 segments of 16 values each:
//
//   * half-row and half-column ink counts: even rows of the left half, odd
//     rows of the right half, even columns of the upper half, odd columns of
//     the lower half;
//   * ink counts along lines perpendicular to the main diagonal (upper
//     triangle uses the lines through odd diagonal cells, lower triangle the
//     even ones) and perpendicular to the antidiagonal (upper-left triangle
//     even, lower-right odd);
//   * for each of those diagonal/antidiagonal lines, the offset of the
//     outermost ink pixel (out-in profile, scanning from the matrix edge
//     toward the diagonal) and of the innermost one (in-out profile,
//     scanning from the diagonal outward). Offsets count cells from the
//     (anti)diagonal; a line with no ink yields the sentinel kBlankLine.
//
// Cell (l,m) is 1-based: row l, column m, both in [1,32].

#include <array>
#include <cstdio>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "glyph/char_matrix.hpp"
#include "glyph/errors.hpp"

namespace glyph {

inline constexpr int kFamilySize = 16;    // index n runs 1..16 in every segment
inline constexpr int kFeatureCount = 256;
inline constexpr int kBlankLine = -1;     // profile value for a line without ink

// Bump when the segment layout or any feature definition changes; stored in
// model files so stale models are rejected.
inline constexpr int kFeatureLayoutVersion = 1;

// The four families of feature lines perpendicular to the (anti)diagonal.
enum class LineFamily { diag_upper, diag_lower, adiag_upper, adiag_lower };

// Segments of the feature vector, in storage order.
enum class FeatureSegment {
  hist_horiz_left = 0,
  hist_horiz_right,
  hist_vert_upper,
  hist_vert_lower,
  hist_diag_upper,
  hist_diag_lower,
  hist_adiag_upper,
  hist_adiag_lower,
  prof_outin_diag_upper,
  prof_outin_diag_lower,
  prof_outin_adiag_upper,
  prof_outin_adiag_lower,
  prof_inout_diag_upper,
  prof_inout_diag_lower,
  prof_inout_adiag_upper,
  prof_inout_adiag_lower,
};

inline constexpr int kSegmentCount = 16;

inline const char* segment_name(FeatureSegment s) {
  static constexpr const char* names[kSegmentCount] = {
      "hist_horiz_left",        "hist_horiz_right",
      "hist_vert_upper",        "hist_vert_lower",
      "hist_diag_upper",        "hist_diag_lower",
      "hist_adiag_upper",       "hist_adiag_lower",
      "prof_outin_diag_upper",  "prof_outin_diag_lower",
      "prof_outin_adiag_upper", "prof_outin_adiag_lower",
      "prof_inout_diag_upper",  "prof_inout_diag_lower",
      "prof_inout_adiag_upper", "prof_inout_adiag_lower",
  };
  return names[static_cast<int>(s)];
}

struct FeatureVector {
  std::array<int, kFeatureCount> values{};

  int at(FeatureSegment s, int n) const {
    return values[static_cast<int>(s) * kFamilySize + (n - 1)];
  }
  int& at(FeatureSegment s, int n) {
    return values[static_cast<int>(s) * kFamilySize + (n - 1)];
  }
  std::span<const int, kFamilySize> segment(FeatureSegment s) const {
    return std::span<const int, kFamilySize>(
        values.data() + static_cast<int>(s) * kFamilySize, kFamilySize);
  }

  bool operator==(const FeatureVector&) const = default;
};

// 1-based matrix position.
struct Cell {
  int row = 0;
  int col = 0;
  bool operator==(const Cell&) const = default;
};

namespace detail {

// Cell at offset k on the n-th line of a family. Offset 0 sits on the
// (anti)diagonal; growing k walks toward the matrix edge.
inline Cell line_cell(LineFamily family, int n, int k) {
  switch (family) {
    case LineFamily::diag_upper:
      return {2 * n - 1 - k, 2 * n - 1 + k};
    case LineFamily::diag_lower:
      return {2 * n + k, 2 * n - k};
    case LineFamily::adiag_upper:
      return {2 * n - k, 33 - 2 * n - k};
    case LineFamily::adiag_lower:
      return {2 * n - 1 + k, 34 - 2 * n + k};
  }
  return {};
}

inline bool line_contains(LineFamily family, int n, int k) {
  const Cell c = line_cell(family, n, k);
  return c.row >= 1 && c.row <= CharMatrix::kSize && c.col >= 1 &&
         c.col <= CharMatrix::kSize;
}

inline void check_family_index(int n) {
  if (n < 1 || n > kFamilySize)
    throw InvalidArgumentError("line index must be in [1,16], got " +
                               std::to_string(n));
}

}  // namespace detail

// Cells of the n-th feature line of a family, in ascending offset from the
// (anti)diagonal. The offset of cells[k] is exactly k.
inline std::vector<Cell> line_cells(LineFamily family, int n) {
  detail::check_family_index(n);
  std::vector<Cell> cells;
  for (int k = 0; detail::line_contains(family, n, k); ++k)
    cells.push_back(detail::line_cell(family, n, k));
  return cells;
}

inline int line_length(LineFamily family, int n) {
  detail::check_family_index(n);
  int k = 0;
  while (detail::line_contains(family, n, k)) ++k;
  return k;
}

using FamilyBins = std::array<int, kFamilySize>;

// Per-line ink counts and innermost/outermost ink offsets for one family.
struct LineScan {
  FamilyBins count{};
  FamilyBins innermost{};  // smallest ink offset, kBlankLine if none
  FamilyBins outermost{};  // largest ink offset, kBlankLine if none
};

inline LineScan scan_family(const CharMatrix& mat, LineFamily family) {
  LineScan scan;
  for (int n = 1; n <= kFamilySize; ++n) {
    int count = 0, kmin = kBlankLine, kmax = kBlankLine;
    for (int k = 0; detail::line_contains(family, n, k); ++k) {
      const Cell c = detail::line_cell(family, n, k);
      if (mat.ink(c.row, c.col)) {
        ++count;
        if (kmin == kBlankLine) kmin = k;
        kmax = k;
      }
    }
    scan.count[n - 1] = count;
    scan.innermost[n - 1] = kmin;
    scan.outermost[n - 1] = kmax;
  }
  return scan;
}

// Ink counts over even rows of the left half / odd rows of the right half.
// The right-half sum runs over columns 16..32 (17 cells, overlapping column
// 16 with the left half), which is the definition this layout freezes.
inline std::pair<FamilyBins, FamilyBins> horizontal_histograms(
    const CharMatrix& mat) {
  FamilyBins left{}, right{};
  for (int n = 1; n <= kFamilySize; ++n) {
    for (int m = 1; m <= 16; ++m) left[n - 1] += mat.ink(2 * n, m);
    for (int m = 16; m <= 32; ++m) right[n - 1] += mat.ink(2 * n - 1, m);
  }
  return {left, right};
}

// Ink counts over even columns of the upper half / odd columns of the lower
// half (the lower sum runs over rows 16..32, 17 cells).
inline std::pair<FamilyBins, FamilyBins> vertical_histograms(
    const CharMatrix& mat) {
  FamilyBins upper{}, lower{};
  for (int n = 1; n <= kFamilySize; ++n) {
    for (int m = 1; m <= 16; ++m) upper[n - 1] += mat.ink(m, 2 * n);
    for (int m = 16; m <= 32; ++m) lower[n - 1] += mat.ink(m, 2 * n - 1);
  }
  return {upper, lower};
}

// {upper, lower} ink counts along lines perpendicular to the main diagonal.
inline std::pair<FamilyBins, FamilyBins> diagonal_histograms(
    const CharMatrix& mat) {
  return {scan_family(mat, LineFamily::diag_upper).count,
          scan_family(mat, LineFamily::diag_lower).count};
}

// {upper, lower} ink counts along lines perpendicular to the antidiagonal.
inline std::pair<FamilyBins, FamilyBins> antidiagonal_histograms(
    const CharMatrix& mat) {
  return {scan_family(mat, LineFamily::adiag_upper).count,
          scan_family(mat, LineFamily::adiag_lower).count};
}

struct ProfileBins {
  FamilyBins diag_upper{};
  FamilyBins diag_lower{};
  FamilyBins adiag_upper{};
  FamilyBins adiag_lower{};
};

// Offset of the outermost ink pixel on each feature line (first ink seen
// scanning from the periphery toward the (anti)diagonal).
inline ProfileBins out_in_profiles(const CharMatrix& mat) {
  return {scan_family(mat, LineFamily::diag_upper).outermost,
          scan_family(mat, LineFamily::diag_lower).outermost,
          scan_family(mat, LineFamily::adiag_upper).outermost,
          scan_family(mat, LineFamily::adiag_lower).outermost};
}

// Offset of the innermost ink pixel on each feature line (first ink seen
// scanning from the (anti)diagonal toward the periphery).
inline ProfileBins in_out_profiles(const CharMatrix& mat) {
  return {scan_family(mat, LineFamily::diag_upper).innermost,
          scan_family(mat, LineFamily::diag_lower).innermost,
          scan_family(mat, LineFamily::adiag_upper).innermost,
          scan_family(mat, LineFamily::adiag_lower).innermost};
}

// The full 256-value feature vector, segments in declaration order.
inline FeatureVector extract(const CharMatrix& mat) {
  FeatureVector fv;
  const auto [hl, hr] = horizontal_histograms(mat);
  const auto [vu, vl] = vertical_histograms(mat);
  const LineScan du = scan_family(mat, LineFamily::diag_upper);
  const LineScan dl = scan_family(mat, LineFamily::diag_lower);
  const LineScan au = scan_family(mat, LineFamily::adiag_upper);
  const LineScan al = scan_family(mat, LineFamily::adiag_lower);

  for (int n = 1; n <= kFamilySize; ++n) {
    fv.at(FeatureSegment::hist_horiz_left, n) = hl[n - 1];
    fv.at(FeatureSegment::hist_horiz_right, n) = hr[n - 1];
    fv.at(FeatureSegment::hist_vert_upper, n) = vu[n - 1];
    fv.at(FeatureSegment::hist_vert_lower, n) = vl[n - 1];
    fv.at(FeatureSegment::hist_diag_upper, n) = du.count[n - 1];
    fv.at(FeatureSegment::hist_diag_lower, n) = dl.count[n - 1];
    fv.at(FeatureSegment::hist_adiag_upper, n) = au.count[n - 1];
    fv.at(FeatureSegment::hist_adiag_lower, n) = al.count[n - 1];
    fv.at(FeatureSegment::prof_outin_diag_upper, n) = du.outermost[n - 1];
    fv.at(FeatureSegment::prof_outin_diag_lower, n) = dl.outermost[n - 1];
    fv.at(FeatureSegment::prof_outin_adiag_upper, n) = au.outermost[n - 1];
    fv.at(FeatureSegment::prof_outin_adiag_lower, n) = al.outermost[n - 1];
    fv.at(FeatureSegment::prof_inout_diag_upper, n) = du.innermost[n - 1];
    fv.at(FeatureSegment::prof_inout_diag_lower, n) = dl.innermost[n - 1];
    fv.at(FeatureSegment::prof_inout_adiag_upper, n) = au.innermost[n - 1];
    fv.at(FeatureSegment::prof_inout_adiag_lower, n) = al.innermost[n - 1];
  }
  return fv;
}

inline std::string to_csv(const FeatureVector& fv) {
  std::string out;
  out.reserve(4 * kFeatureCount);
  for (int i = 0; i < kFeatureCount; ++i) {
    if (i) out.push_back(',');
    out += std::to_string(fv.values[i]);
  }
  out.push_back('\n');
  return out;
}

// One line per segment, for human inspection.
inline std::string to_annotated_text(const FeatureVector& fv) {
  std::string out;
  for (int s = 0; s < kSegmentCount; ++s) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%-24s:", segment_name(FeatureSegment(s)));
    out += buf;
    for (int n = 1; n <= kFamilySize; ++n) {
      std::snprintf(buf, sizeof(buf), " %3d", fv.at(FeatureSegment(s), n));
      out += buf;
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace glyph
