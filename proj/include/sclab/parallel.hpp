#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace sclab {

/// Resolves a thread-count request: explicit value wins, then SCLAB_THREADS,
/// then 1 (single-threaded keeps results trivially deterministic).
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SCLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

/// Runs fn(begin, end) over disjoint contiguous chunks of [0, n).
/// Chunk boundaries are independent of thread count only in the sense that
/// each index is processed exactly once; callers must write disjoint outputs.
inline void parallel_for(std::ptrdiff_t n, int threads,
                         const std::function<void(std::ptrdiff_t, std::ptrdiff_t)>& fn) {
  threads = std::max(1, threads);
  if (threads == 1 || n <= 1) {
    if (n > 0) fn(0, n);
    return;
  }
  const int workers = static_cast<int>(std::min<std::ptrdiff_t>(threads, n));
  const std::ptrdiff_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const std::ptrdiff_t begin = w * chunk;
    const std::ptrdiff_t end = std::min<std::ptrdiff_t>(begin + chunk, n);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace sclab
