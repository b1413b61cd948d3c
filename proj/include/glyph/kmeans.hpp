#pragma once

// Lloyd's k-means with k-means++ seeding. Everything here is deterministic
// for a fixed seed: sampling is hand-rolled on top of mt19937_64 (no
// std::uniform_*_distribution, whose output is implementation-defined),
// reductions accumulate in ascending sample order, and ties always resolve
// to the smallest index. The assignment step may run on several threads --
// each point's nearest centroid is computed independently, so the thread
// count never changes any result bit.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "glyph/errors.hpp"
#include "glyph/parallel.hpp"

namespace glyph {

struct KMeansOptions {
  int k = 64;
  std::uint64_t seed = 1;
  int max_iter = 300;
  double tol = 1e-6;  // max Euclidean centroid shift that counts as converged
  int jobs = 1;
};

struct KMeansResult {
  std::size_t dim = 0;
  std::size_t centroid_count = 0;
  std::vector<double> centroids;        // centroid_count x dim, row-major
  std::vector<int> assignments;         // cluster index per input point
  std::vector<double> inertia_history;  // objective after each assignment step
  int iterations = 0;
  bool reduced_k = false;  // fewer distinct points than requested clusters
};

namespace detail {

inline double squared_distance(const double* a, const double* b,
                               std::size_t dim) {
  double acc = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

// Uniform double in [0, 1) with 53-bit resolution, same on every platform.
inline double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

// Partitions `points` (n x dim, row-major) into opts.k clusters. If the
// input has at most opts.k distinct rows, those rows become the centroids
// directly (reduced_k set when there are fewer than opts.k of them).
inline KMeansResult kmeans_fit(const std::vector<double>& points,
                               std::size_t dim, const KMeansOptions& opts) {
  if (dim == 0) throw InvalidArgumentError("kmeans: dimension must be >= 1");
  if (points.empty()) throw InvalidArgumentError("kmeans: no input points");
  if (points.size() % dim != 0)
    throw InvalidArgumentError("kmeans: point buffer not a multiple of dim");
  if (opts.k < 1) throw InvalidArgumentError("kmeans: k must be >= 1");
  if (opts.max_iter < 1)
    throw InvalidArgumentError("kmeans: max_iter must be >= 1");
  if (!(opts.tol >= 0.0))
    throw InvalidArgumentError("kmeans: tol must be >= 0");

  const std::size_t n = points.size() / dim;
  const auto row = [&](std::size_t i) { return points.data() + i * dim; };

  KMeansResult res;
  res.dim = dim;

  // Degenerate inputs: with <= k distinct rows the optimal solution is one
  // centroid per distinct row (inertia 0), so skip Lloyd entirely. Distinct
  // rows are found by sorting indices lexicographically; each run of equal
  // rows is represented by its smallest original index, and representatives
  // are emitted in first-appearance order.
  {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double* pa = row(a);
      const double* pb = row(b);
      for (std::size_t i = 0; i < dim; ++i) {
        if (pa[i] != pb[i]) return pa[i] < pb[i];
      }
      return a < b;
    });
    std::vector<std::size_t> rep_of(n);  // point -> representative index
    std::vector<std::size_t> reps;
    for (std::size_t pos = 0; pos < n;) {
      std::size_t end = pos + 1;
      while (end < n &&
             std::equal(row(order[pos]), row(order[pos]) + dim, row(order[end])))
        ++end;
      std::size_t rep = order[pos];
      for (std::size_t j = pos; j < end; ++j) rep = std::min(rep, order[j]);
      for (std::size_t j = pos; j < end; ++j) rep_of[order[j]] = rep;
      reps.push_back(rep);
      pos = end;
    }
    if (reps.size() <= static_cast<std::size_t>(opts.k)) {
      std::sort(reps.begin(), reps.end());
      res.centroid_count = reps.size();
      res.centroids.reserve(reps.size() * dim);
      std::vector<int> centroid_of(n, -1);
      for (std::size_t c = 0; c < reps.size(); ++c) {
        res.centroids.insert(res.centroids.end(), row(reps[c]),
                             row(reps[c]) + dim);
        centroid_of[reps[c]] = static_cast<int>(c);
      }
      res.assignments.resize(n);
      for (std::size_t i = 0; i < n; ++i)
        res.assignments[i] = centroid_of[rep_of[i]];
      res.inertia_history.push_back(0.0);
      res.iterations = 0;
      res.reduced_k = reps.size() < static_cast<std::size_t>(opts.k);
      return res;
    }
  }

  const std::size_t k = static_cast<std::size_t>(opts.k);
  std::mt19937_64 rng(opts.seed);

  // k-means++ seeding: first centroid uniform, the rest weighted by squared
  // distance to the nearest centroid chosen so far.
  std::vector<double> centroids;
  centroids.reserve(k * dim);
  std::vector<double> d2(n);
  {
    const std::size_t first = static_cast<std::size_t>(rng() % n);
    centroids.insert(centroids.end(), row(first), row(first) + dim);
    for (std::size_t i = 0; i < n; ++i)
      d2[i] = detail::squared_distance(row(i), row(first), dim);
    for (std::size_t c = 1; c < k; ++c) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) total += d2[i];
      std::size_t pick = n;
      if (total > 0.0) {
        const double u = detail::unit_double(rng) * total;
        double acc = 0.0;
        std::size_t last_positive = n;
        for (std::size_t i = 0; i < n; ++i) {
          if (d2[i] > 0.0) last_positive = i;
          acc += d2[i];
          if (acc > u) {
            pick = i;
            break;
          }
        }
        if (pick == n) pick = last_positive;  // u landed on the rounding edge
      }
      if (pick == n) pick = static_cast<std::size_t>(rng() % n);
      const double* p = row(pick);
      centroids.insert(centroids.end(), p, p + dim);
      for (std::size_t i = 0; i < n; ++i)
        d2[i] = std::min(d2[i], detail::squared_distance(row(i), p, dim));
    }
  }

  std::vector<int> assign(n, 0);
  std::vector<std::size_t> counts(k);
  std::vector<double> next(k * dim);

  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    // Assignment: independent per point, hence safely parallel.
    parallel_for(n, opts.jobs, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const double* p = row(i);
        int best = 0;
        double best_d2 = detail::squared_distance(p, centroids.data(), dim);
        for (std::size_t c = 1; c < k; ++c) {
          const double d = detail::squared_distance(p, &centroids[c * dim], dim);
          if (d < best_d2) {
            best_d2 = d;
            best = static_cast<int>(c);
          }
        }
        assign[i] = best;
        d2[i] = best_d2;
      }
    });

    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) inertia += d2[i];
    res.inertia_history.push_back(inertia);

    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) ++counts[assign[i]];

    // Re-home empty clusters before the update: give each one the point
    // currently farthest from its centroid, drawn from a cluster that can
    // spare a member. With more distinct points than clusters such a donor
    // with positive distance always exists.
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      std::size_t donor = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[assign[i]] < 2) continue;
        if (donor == n || d2[i] > d2[donor]) donor = i;
      }
      if (donor == n)
        throw Error("kmeans internal: no donor point for empty cluster");
      --counts[assign[donor]];
      assign[donor] = static_cast<int>(c);
      counts[c] = 1;
      d2[donor] = 0.0;
    }

    // Update: accumulate in ascending point order so the floating-point sums
    // are reproducible bit for bit.
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double* p = row(i);
      double* t = &next[static_cast<std::size_t>(assign[i]) * dim];
      for (std::size_t j = 0; j < dim; ++j) t[j] += p[j];
    }
    double max_shift2 = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      double* t = &next[c * dim];
      const double inv = 1.0 / static_cast<double>(counts[c]);
      double shift2 = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        t[j] *= inv;
        const double d = t[j] - centroids[c * dim + j];
        shift2 += d * d;
      }
      max_shift2 = std::max(max_shift2, shift2);
    }
    centroids.swap(next);
    res.iterations = iter;
    if (max_shift2 <= opts.tol * opts.tol) break;
  }

  res.centroid_count = k;
  res.centroids = std::move(centroids);
  res.assignments = std::move(assign);
  res.reduced_k = false;
  return res;
}

}  // namespace glyph
