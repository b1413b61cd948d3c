#pragma once

// Small fork/join helper for the embarrassingly parallel steps (feature
// extraction, k-means assignment). Work is split into contiguous index
// ranges so results land in pre-sized buffers without locking; the split is
// purely a scheduling detail and never changes computed values.

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace glyph {

// jobs <= 0 means "use the hardware concurrency" (at least 1).
inline int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Calls fn(begin, end) for disjoint ranges covering [0, count). The first
// exception thrown by any worker is rethrown on the calling thread.
template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
  const int workers = std::min<std::size_t>(resolve_jobs(jobs), count ? count : 1);
  if (workers <= 1) {
    fn(std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&, w, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace glyph
