#pragma once

// Glue from image files to feature vectors: decode, binarize, crop,
// normalize, extract. Batch extraction runs across threads; per-sample
// results are written into a pre-sized buffer and compacted in input order
// afterwards, so the thread count never changes the output.

#include <filesystem>
#include <string>
#include <vector>

#include "glyph/char_matrix.hpp"
#include "glyph/classifier.hpp"
#include "glyph/dataset.hpp"
#include "glyph/errors.hpp"
#include "glyph/features.hpp"
#include "glyph/image_io.hpp"
#include "glyph/parallel.hpp"
#include "glyph/preprocess.hpp"

namespace glyph {

struct PreprocessOptions {
  ThresholdMode threshold = ThresholdMode::otsu();
  bool invert = false;  // for white-on-black sources
};

// Grayscale image -> normalized 32x32 binary matrix. Blank images (no ink
// after thresholding) are an invalid-input error; batch callers turn that
// into a skip-with-warning.
inline CharMatrix image_to_matrix(GrayImage img, const PreprocessOptions& opts) {
  if (opts.invert)
    for (auto& v : img.samples) v = static_cast<std::uint8_t>(255 - v);
  const Bitmap bmp = binarize(img, opts.threshold);
  const CropResult crop = crop_to_content(bmp);
  if (crop.empty) throw InvalidInputError("image contains no ink");
  return normalize_32(crop.bitmap);
}

// Any supported character file -> matrix. Text matrices are already binary
// and normalized, so preprocessing options do not apply to them.
inline CharMatrix load_matrix_from_file(const std::filesystem::path& path,
                                        const PreprocessOptions& opts) {
  if (is_text_matrix_path(path)) return load_text_matrix(path);
  return image_to_matrix(load_gray_image(path), opts);
}

struct ExtractionResult {
  std::vector<FeatureSample> samples;
  std::vector<std::string> warnings;  // files skipped, one message each
};

// Feature vectors for a batch of dataset samples. Files that fail to decode
// or binarize to blank are skipped with a warning instead of aborting the
// batch.
inline ExtractionResult extract_features(const std::vector<LabeledSample>& batch,
                                         const PreprocessOptions& opts,
                                         int jobs = 1) {
  std::vector<FeatureSample> slots(batch.size());
  std::vector<std::string> failures(batch.size());
  std::vector<char> ok(batch.size(), 0);

  parallel_for(batch.size(), jobs, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        const CharMatrix mat = load_matrix_from_file(batch[i].image_path, opts);
        slots[i].label = batch[i].label;
        slots[i].features = extract(mat);
        ok[i] = 1;
      } catch (const InvalidInputError& e) {
        failures[i] = e.what();
      }
    }
  });

  ExtractionResult result;
  result.samples.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (ok[i])
      result.samples.push_back(std::move(slots[i]));
    else
      result.warnings.push_back("skipped " + batch[i].image_path.string() +
                                ": " + failures[i]);
  }
  return result;
}

}  // namespace glyph
