#pragma once

// Per-class k-means codebooks and nearest-centroid classification. A class
// is scored by the distance from the query vector to its closest centroid;
// ranked choices come back sorted by (distance, label) so equal scores
// resolve the same way on every run.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "glyph/errors.hpp"
#include "glyph/features.hpp"
#include "glyph/kmeans.hpp"

namespace glyph {

struct Codebook {
  std::string label;
  int k_requested = 0;
  std::uint32_t training_count = 0;
  bool reduced = false;  // fewer distinct training vectors than k_requested
  std::size_t centroid_count = 0;
  std::vector<double> centroids;  // centroid_count x kFeatureCount, row-major

  const double* centroid(std::size_t i) const {
    return centroids.data() + i * kFeatureCount;
  }
  bool operator==(const Codebook&) const = default;
};

struct Model {
  std::string category;
  std::uint32_t feature_layout_version = kFeatureLayoutVersion;
  std::uint64_t seed = 0;
  std::vector<Codebook> codebooks;  // sorted by label, labels unique

  const Codebook* find(const std::string& label) const {
    for (const auto& cb : codebooks)
      if (cb.label == label) return &cb;
    return nullptr;
  }
  bool operator==(const Model&) const = default;
};

struct FeatureSample {
  std::string label;
  FeatureVector features;
};

struct TrainOptions {
  int k = 64;
  std::uint64_t seed = 1;
  int max_iter = 300;
  double tol = 1e-6;
  int jobs = 1;
  std::string category = "custom";
  // Labels that must be present; missing ones are an error. Empty means
  // "whatever the samples contain".
  std::vector<std::string> required_labels;
};

struct Choice {
  std::string label;
  double distance = 0.0;
  bool operator==(const Choice&) const = default;
};
using RankedChoices = std::vector<Choice>;

inline Model train(const std::vector<FeatureSample>& samples,
                   const TrainOptions& opts) {
  if (samples.empty()) throw DatasetError("no training samples");

  // Group sample indices per label; std::map keeps labels sorted.
  std::map<std::string, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].label.empty())
      throw DatasetError("training sample with empty label");
    by_label[samples[i].label].push_back(i);
  }
  for (const auto& required : opts.required_labels) {
    if (!by_label.count(required))
      throw DatasetError("class '" + required + "' has no training samples");
  }
  if (!opts.required_labels.empty()) {
    for (const auto& [label, idx] : by_label) {
      if (std::find(opts.required_labels.begin(), opts.required_labels.end(),
                    label) == opts.required_labels.end())
        throw DatasetError("label '" + label +
                           "' is not part of the selected category");
    }
  }

  Model model;
  model.category = opts.category;
  model.feature_layout_version = kFeatureLayoutVersion;
  model.seed = opts.seed;

  KMeansOptions km;
  km.k = opts.k;
  km.seed = opts.seed;
  km.max_iter = opts.max_iter;
  km.tol = opts.tol;
  km.jobs = opts.jobs;

  for (const auto& [label, idx] : by_label) {
    std::vector<double> data;
    data.reserve(idx.size() * kFeatureCount);
    for (std::size_t i : idx)
      for (int v : samples[i].features.values)
        data.push_back(static_cast<double>(v));
    KMeansResult fit = kmeans_fit(data, kFeatureCount, km);

    Codebook cb;
    cb.label = label;
    cb.k_requested = opts.k;
    cb.training_count = static_cast<std::uint32_t>(idx.size());
    cb.reduced = fit.reduced_k;
    cb.centroid_count = fit.centroid_count;
    cb.centroids = std::move(fit.centroids);
    model.codebooks.push_back(std::move(cb));
  }
  return model;
}

namespace detail {

inline double class_score(const Codebook& cb, const double* query) {
  double best = squared_distance(query, cb.centroid(0), kFeatureCount);
  for (std::size_t i = 1; i < cb.centroid_count; ++i)
    best = std::min(best, squared_distance(query, cb.centroid(i), kFeatureCount));
  return best;
}

}  // namespace detail

// Top-t classes by nearest-centroid distance (Euclidean), ascending; ties
// break lexicographically on the label.
inline RankedChoices classify(const Model& model, const FeatureVector& v,
                              int t) {
  if (t < 1) throw InvalidArgumentError("classify: t must be >= 1");
  if (model.codebooks.empty())
    throw InvalidArgumentError("classify: model has no codebooks");

  std::array<double, kFeatureCount> query;
  for (int i = 0; i < kFeatureCount; ++i)
    query[i] = static_cast<double>(v.values[i]);

  RankedChoices all;
  all.reserve(model.codebooks.size());
  for (const auto& cb : model.codebooks)
    all.push_back({cb.label, detail::class_score(cb, query.data())});
  std::sort(all.begin(), all.end(), [](const Choice& a, const Choice& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.label < b.label;
  });
  if (all.size() > static_cast<std::size_t>(t)) all.resize(t);
  for (auto& c : all) c.distance = std::sqrt(c.distance);
  return all;
}

}  // namespace glyph
