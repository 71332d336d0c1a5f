#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace ctd {

// Runs fn(0..count-1) across `workers` threads. Work items are pulled from
// a shared counter, so results must be written to per-index slots; outputs
// are then independent of the worker count. workers <= 1 runs inline.
inline void parallel_for(int count, int workers,
                         const std::function<void(int)>& fn) {
  if (workers <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int n_threads = std::min(workers, count);
  pool.reserve(static_cast<std::size_t>(n_threads));
  for (int t = 0; t < n_threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& worker : pool) worker.join();
}

// Default worker count for CLI runs; 0 or negative requests auto.
inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace ctd
