#pragma once

#include <bitset>
#include <cassert>
#include <istream>
#include <sstream>
#include <string>

#include "glyph/errors.hpp"

namespace glyph {

// Normalized 32x32 binary character image. Cells are addressed 1-based as
// (row l, column m) to match the half-row / diagonal-line feature
// definitions; 1 = black ink, 0 = white background.
class CharMatrix {
 public:
  static constexpr int kSize = 32;

  bool ink(int l, int m) const {
    assert(l >= 1 && l <= kSize && m >= 1 && m <= kSize);
    return bits_[index(l, m)];
  }

  void set_ink(int l, int m, bool on = true) {
    assert(l >= 1 && l <= kSize && m >= 1 && m <= kSize);
    bits_[index(l, m)] = on;
  }

  int ink_count() const { return static_cast<int>(bits_.count()); }
  bool any_ink() const { return bits_.any(); }

  // 32 lines of 32 characters from {'0','1'}, each newline-terminated.
  std::string to_text() const {
    std::string out;
    out.reserve(kSize * (kSize + 1));
    for (int l = 1; l <= kSize; ++l) {
      for (int m = 1; m <= kSize; ++m) out.push_back(ink(l, m) ? '1' : '0');
      out.push_back('\n');
    }
    return out;
  }

  // Strict parse of the to_text() format. Trailing blank lines are accepted;
  // anything else after the 32 rows is an error.
  static CharMatrix from_text(std::istream& in) {
    CharMatrix mat;
    std::string line;
    for (int l = 1; l <= kSize; ++l) {
      if (!std::getline(in, line))
        throw InvalidInputError("character matrix: expected 32 rows, got " +
                                std::to_string(l - 1));
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.size() != kSize)
        throw InvalidInputError("character matrix: row " + std::to_string(l) +
                                " has " + std::to_string(line.size()) +
                                " characters, expected 32");
      for (int m = 1; m <= kSize; ++m) {
        char c = line[m - 1];
        if (c != '0' && c != '1')
          throw InvalidInputError("character matrix: row " + std::to_string(l) +
                                  " contains '" + std::string(1, c) +
                                  "', expected '0' or '1'");
        mat.set_ink(l, m, c == '1');
      }
    }
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty())
        throw InvalidInputError("character matrix: unexpected content after row 32");
    }
    return mat;
  }

  static CharMatrix from_text(const std::string& text) {
    std::istringstream in(text);
    return from_text(in);
  }

  bool operator==(const CharMatrix&) const = default;

 private:
  static std::size_t index(int l, int m) {
    return static_cast<std::size_t>(l - 1) * kSize + (m - 1);
  }

  std::bitset<kSize * kSize> bits_;
};

}  // namespace glyph
