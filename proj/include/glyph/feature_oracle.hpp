#pragma once

// Reference computation of the structural features, used to cross-check
// extract(). It deliberately shares no line geometry with features.hpp:
// instead of walking feature lines, it visits every matrix cell once and
// decides by arithmetic which segments that cell belongs to.
//
// For a cell (l,m):
//   * l+m is constant along lines perpendicular to the main diagonal. When
//     l+m is even the line passes through the diagonal cell (d,d) with
//     d = (l+m)/2; the cell's offset from the diagonal is |l-d|. Odd d lines
//     feed the upper-triangle family (cells with l <= d), even d lines the
//     lower-triangle family (l >= d).
//   * l-m is constant along lines perpendicular to the antidiagonal. When
//     l-m is odd the line passes through the antidiagonal cell (a, 33-a)
//     with a = (l-m+33)/2; the offset is |l-a|. Even a lines feed the
//     upper-left family (l <= a), odd a lines the lower-right one (l >= a).

#include "glyph/char_matrix.hpp"
#include "glyph/features.hpp"

namespace glyph {

inline FeatureVector oracle_extract(const CharMatrix& mat) {
  FeatureVector fv;
  for (int s = static_cast<int>(FeatureSegment::prof_outin_diag_upper);
       s < kSegmentCount; ++s)
    for (int n = 1; n <= kFamilySize; ++n)
      fv.at(FeatureSegment(s), n) = kBlankLine;

  auto hit = [&fv](FeatureSegment hist, FeatureSegment outin,
                   FeatureSegment inout, int n, int k) {
    fv.at(hist, n) += 1;
    int& outer = fv.at(outin, n);
    if (outer == kBlankLine || k > outer) outer = k;
    int& inner = fv.at(inout, n);
    if (inner == kBlankLine || k < inner) inner = k;
  };

  for (int l = 1; l <= CharMatrix::kSize; ++l) {
    for (int m = 1; m <= CharMatrix::kSize; ++m) {
      if (!mat.ink(l, m)) continue;

      if (l % 2 == 0 && m <= 16) fv.at(FeatureSegment::hist_horiz_left, l / 2) += 1;
      if (l % 2 == 1 && m >= 16)
        fv.at(FeatureSegment::hist_horiz_right, (l + 1) / 2) += 1;
      if (m % 2 == 0 && l <= 16) fv.at(FeatureSegment::hist_vert_upper, m / 2) += 1;
      if (m % 2 == 1 && l >= 16)
        fv.at(FeatureSegment::hist_vert_lower, (m + 1) / 2) += 1;

      if ((l + m) % 2 == 0) {
        const int d = (l + m) / 2;  // diagonal cell the line passes through
        if (d % 2 == 1 && l <= d)
          hit(FeatureSegment::hist_diag_upper,
              FeatureSegment::prof_outin_diag_upper,
              FeatureSegment::prof_inout_diag_upper, (d + 1) / 2, d - l);
        if (d % 2 == 0 && l >= d)
          hit(FeatureSegment::hist_diag_lower,
              FeatureSegment::prof_outin_diag_lower,
              FeatureSegment::prof_inout_diag_lower, d / 2, l - d);
      }

      if ((l - m + 33) % 2 == 0) {
        const int a = (l - m + 33) / 2;  // antidiagonal cell on the line
        if (a % 2 == 0 && l <= a)
          hit(FeatureSegment::hist_adiag_upper,
              FeatureSegment::prof_outin_adiag_upper,
              FeatureSegment::prof_inout_adiag_upper, a / 2, a - l);
        if (a % 2 == 1 && l >= a)
          hit(FeatureSegment::hist_adiag_lower,
              FeatureSegment::prof_outin_adiag_lower,
              FeatureSegment::prof_inout_adiag_lower, (a + 1) / 2, l - a);
      }
    }
  }
  return fv;
}

}  // namespace glyph
