#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace magflow {

/// Worker count: hardware concurrency, capped by the MAGFLOW_THREADS environment variable.
std::size_t worker_count();

/// Splits [0, n) into contiguous chunks, one per worker, and runs
/// fn(begin, end, worker) on each. Chunk boundaries depend only on n and the
/// worker count.
template <typename Fn>
void parallel_chunks(std::size_t n, Fn&& fn) {
  const std::size_t workers = std::max<std::size_t>(1, std::min(worker_count(), n));
  if (workers == 1) {
    fn(std::size_t{0}, n, std::size_t{0});
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = n * w / workers;
    const std::size_t end = n * (w + 1) / workers;
    pool.emplace_back([&fn, begin, end, w] { fn(begin, end, w); });
  }
}

}  // namespace magflow
