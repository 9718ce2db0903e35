#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace mirror {

// Process-wide worker count for grid evaluation. 0 means hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

// Calls fn(i) for i in [0, n). Iterations are split into contiguous blocks,
// one per worker; fn must not touch shared mutable state.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t block = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * block;
    const std::size_t hi = std::min(n, lo + block);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
}

}  // namespace mirror
