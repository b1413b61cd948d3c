// Binarization, cropping and 32x32 normalization. Expected matrices for the
// scaling cases come from small independent oracles written against the same
// contract (block coverage for integer downscales, nearest neighbor for
// upscales) rather than from the production arithmetic.

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "glyph/preprocess.hpp"
#include "test_util.hpp"

using glyph::binarize;
using glyph::Bitmap;
using glyph::CharMatrix;
using glyph::crop_to_content;
using glyph::GrayImage;
using glyph::normalize_32;
using glyph::otsu_threshold;
using glyph::ThresholdMode;

namespace {

Bitmap to_bitmap(const CharMatrix& m) {
  Bitmap bmp(32, 32);
  for (int l = 1; l <= 32; ++l)
    for (int c = 1; c <= 32; ++c) bmp.at(l - 1, c - 1) = m.ink(l, c) ? 1 : 0;
  return bmp;
}

// Downscale oracle for inputs that are an exact multiple of 32 on both
// axes: a cell is black iff ink covers at least half of its f x f block.
CharMatrix block_coverage_oracle(const Bitmap& bmp) {
  REQUIRE(bmp.height % 32 == 0);
  REQUIRE(bmp.width % 32 == 0);
  const int fy = bmp.height / 32;
  const int fx = bmp.width / 32;
  CharMatrix out;
  for (int l = 1; l <= 32; ++l)
    for (int m = 1; m <= 32; ++m) {
      int ink = 0;
      for (int r = 0; r < fy; ++r)
        for (int c = 0; c < fx; ++c)
          ink += bmp.at((l - 1) * fy + r, (m - 1) * fx + c);
      if (2 * ink >= fy * fx) out.set_ink(l, m);
    }
  return out;
}

}  // namespace

TEST_CASE("binarize splits strictly below the fixed threshold") {
  GrayImage two(2, 1);
  two.samples = {10, 200};
  const Bitmap bits = binarize(two, ThresholdMode::fixed(128));
  CHECK(bits.bits == std::vector<std::uint8_t>{1, 0});

  const GrayImage white(4, 3, 255);
  CHECK(binarize(white, ThresholdMode::fixed(128)).ink_count() == 0);
  const GrayImage black(4, 3, 0);
  CHECK(binarize(black, ThresholdMode::fixed(128)).ink_count() == 12);

  // Boundary: a pixel exactly at the threshold stays white.
  GrayImage edge(1, 1);
  edge.samples = {128};
  CHECK(binarize(edge, ThresholdMode::fixed(128)).ink_count() == 0);
}

TEST_CASE("binarize rejects malformed images") {
  CHECK_THROWS_AS(binarize(GrayImage{}, ThresholdMode::fixed(128)),
                  glyph::InvalidInputError);
  GrayImage bad(3, 3);
  bad.samples.pop_back();
  CHECK_THROWS_AS(binarize(bad, ThresholdMode::otsu()),
                  glyph::InvalidInputError);
}

TEST_CASE("binarize on a 0/255 image is idempotent in effect") {
  std::mt19937_64 rng(11);
  GrayImage img(16, 16);
  for (auto& s : img.samples) s = (rng() % 2) ? 255 : 0;
  const Bitmap once = binarize(img, ThresholdMode::fixed(128));
  GrayImage again(16, 16);
  for (std::size_t i = 0; i < once.bits.size(); ++i)
    again.samples[i] = once.bits[i] ? 0 : 255;
  CHECK(binarize(again, ThresholdMode::fixed(128)) == once);
}

TEST_CASE("otsu splits a bimodal image between the modes") {
  GrayImage img(10, 10);
  for (int i = 0; i < 100; ++i) img.samples[i] = (i < 50) ? 30 : 200;
  const int t = otsu_threshold(img);
  // Any threshold in (30, 200] separates the classes perfectly; ties resolve
  // to the smallest such value.
  CHECK(t == 31);
  const Bitmap bits = binarize(img, ThresholdMode::otsu());
  CHECK(bits.ink_count() == 50);
  CHECK(bits.bits[0] == 1);    // the dark mode is ink
  CHECK(bits.bits[99] == 0);   // the bright mode is background
}

TEST_CASE("otsu handles uniform images at both extremes") {
  // All-black input must stay all black, all-white all white.
  CHECK(binarize(GrayImage(5, 5, 0), ThresholdMode::otsu()).ink_count() == 25);
  CHECK(binarize(GrayImage(5, 5, 255), ThresholdMode::otsu()).ink_count() == 0);
}

TEST_CASE("otsu threshold always lands in [1,255] and matches fixed mode") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    GrayImage img(13, 7);
    for (auto& s : img.samples) s = static_cast<std::uint8_t>(rng() % 256);
    const int t = otsu_threshold(img);
    CHECK(t >= 1);
    CHECK(t <= 255);
    CHECK(binarize(img, ThresholdMode::otsu()) ==
          binarize(img, ThresholdMode::fixed(t)));
  }
}

TEST_CASE("crop finds the minimal ink bounding box") {
  Bitmap all_white(10, 10);
  const auto empty = crop_to_content(all_white);
  CHECK(empty.empty);
  CHECK(empty.bitmap == all_white);

  Bitmap one(10, 10);
  one.at(3, 7) = 1;
  const auto single = crop_to_content(one);
  CHECK_FALSE(single.empty);
  CHECK(single.bitmap.width == 1);
  CHECK(single.bitmap.height == 1);
  CHECK(single.bitmap.at(0, 0) == 1);

  Bitmap corners(10, 10);
  corners.at(0, 0) = 1;
  corners.at(9, 9) = 1;
  const auto full = crop_to_content(corners);
  CHECK_FALSE(full.empty);
  CHECK(full.bitmap == corners);
}

TEST_CASE("crop preserves the ink count") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    Bitmap bmp(20, 15);
    for (auto& b : bmp.bits) b = (rng() % 5 == 0) ? 1 : 0;
    const auto cropped = crop_to_content(bmp);
    CHECK(cropped.bitmap.ink_count() == bmp.ink_count());
  }
}

TEST_CASE("normalize of a 32x32 bitmap is the identity") {
  const CharMatrix m = testutil::random_matrix(99, 0.3);
  CHECK(normalize_32(to_bitmap(m)) == m);
}

TEST_CASE("normalize rejects blank bitmaps") {
  CHECK_THROWS_AS(normalize_32(Bitmap(64, 64)), glyph::InvalidInputError);
}

TEST_CASE("normalize downscales an all-black 64x64 to all black") {
  const CharMatrix out = normalize_32(Bitmap(64, 64, 1));
  CHECK(out.ink_count() == 32 * 32);
}

TEST_CASE("normalize maps a filled quadrant onto the matching block") {
  Bitmap bmp(128, 128);
  for (int r = 0; r < 64; ++r)
    for (int c = 0; c < 64; ++c) bmp.at(r, c) = 1;
  const CharMatrix out = normalize_32(bmp);
  CHECK(out == block_coverage_oracle(bmp));
  CHECK(out.ink_count() == 16 * 16);
  for (int l = 1; l <= 16; ++l)
    for (int m = 1; m <= 16; ++m) CHECK(out.ink(l, m));
}

TEST_CASE("normalize agrees with the block-coverage oracle on random input") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 5; ++trial) {
    Bitmap bmp(96, 64);  // 3x and 2x integer factors
    for (auto& b : bmp.bits) b = (rng() % 3 == 0) ? 1 : 0;
    CHECK(normalize_32(bmp) == block_coverage_oracle(bmp));
  }
}

TEST_CASE("normalize upscales small inputs by nearest neighbor") {
  std::mt19937_64 rng(67);
  Bitmap bmp(5, 3);
  for (auto& b : bmp.bits) b = (rng() % 2) ? 1 : 0;
  if (bmp.ink_count() == 0) bmp.at(1, 2) = 1;
  const CharMatrix out = normalize_32(bmp);
  for (int l = 1; l <= 32; ++l)
    for (int m = 1; m <= 32; ++m) {
      const int pr = (2 * (l - 1) + 1) * bmp.height / 64;
      const int pc = (2 * (m - 1) + 1) * bmp.width / 64;
      CHECK(out.ink(l, m) == (bmp.at(pr, pc) == 1));
    }
}

TEST_CASE("normalize mixes axis rules when only one side is small") {
  // Two source rows, 64 columns: the top row replicates into the upper half
  // of the output, each output column covering two fully inked pixels.
  Bitmap bmp(64, 2);
  for (int c = 0; c < 64; ++c) bmp.at(0, c) = 1;
  const CharMatrix out = normalize_32(bmp);
  for (int l = 1; l <= 32; ++l)
    for (int m = 1; m <= 32; ++m) CHECK(out.ink(l, m) == (l <= 16));
}

TEST_CASE("normalize falls back to the densest cell instead of erasing ink") {
  Bitmap bmp(64, 64);
  bmp.at(10, 20) = 1;  // covers a quarter of its 2x2 cell: below half
  const CharMatrix out = normalize_32(bmp);
  CHECK(out.ink_count() == 1);
  CHECK(out.ink(6, 11));  // cell containing source pixel (10,20)
}

TEST_CASE("normalize output always keeps ink") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    Bitmap bmp(50 + static_cast<int>(rng() % 100),
               50 + static_cast<int>(rng() % 100));
    // Very sparse ink: likely to fall below every cell's coverage threshold.
    for (int i = 0; i < 3; ++i)
      bmp.at(static_cast<int>(rng() % bmp.height),
             static_cast<int>(rng() % bmp.width)) = 1;
    CHECK(normalize_32(bmp).any_ink());
  }
}

TEST_CASE("normalize is idempotent") {
  for (int trial = 0; trial < 10; ++trial) {
    const CharMatrix m = testutil::random_matrix(500 + trial, 0.25);
    const CharMatrix once = normalize_32(to_bitmap(m));
    CHECK(normalize_32(to_bitmap(once)) == once);
  }
}
