#pragma once
// Tiny work-sharing helper: parallel_for over an index range with an atomic
// cursor. Degenerates to a serial loop on single-core hosts.

#include <atomic>
#include <thread>
#include <vector>

namespace isingzero {

template <class F>
void parallel_for(size_t n, F &&body, unsigned threads = 0) {
  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads <= 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<size_t> cursor{0};
  auto worker = [&] {
    for (size_t i = cursor.fetch_add(1); i < n; i = cursor.fetch_add(1))
      body(i);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto &th : pool) th.join();
}

} // namespace isingzero
