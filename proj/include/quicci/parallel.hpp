#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace quicci {

/// Worker count: explicit request > QUICCI_THREADS env var > hardware.
inline unsigned resolve_thread_count(unsigned requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("QUICCI_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

/// Run fn(begin, end) over a static partition of [0, n). Output must be
/// written to disjoint, index-addressed slots so results are independent of
/// scheduling.
template <typename Fn>
void parallel_for(size_t n, unsigned threads, Fn&& fn) {
  threads = resolve_thread_count(threads);
  if (n == 0) return;
  if (threads <= 1 || n == 1) {
    fn(size_t{0}, n);
    return;
  }
  const size_t worker_count = std::min<size_t>(threads, n);
  std::vector<std::thread> workers;
  workers.reserve(worker_count);
  const size_t chunk = (n + worker_count - 1) / worker_count;
  for (size_t w = 0; w < worker_count; ++w) {
    const size_t begin = w * chunk;
    const size_t end = std::min(begin + chunk, n);
    if (begin >= end) break;
    workers.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& worker : workers) worker.join();
}

}  // namespace quicci
