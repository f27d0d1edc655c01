#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace carlo {

/// Run body(i) for i in [0, n) across up to n_threads workers.
/// Tasks pull indices from a shared counter; anything order-dependent must be
/// keyed by i (per-task streams, preallocated result slots), which is what
/// keeps results identical across thread counts.
template <typename Body>
void parallel_for(std::size_t n, std::size_t n_threads, Body&& body) {
  if (n_threads == 0) n_threads = std::thread::hardware_concurrency();
  if (n_threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  n_threads = std::min(n_threads, n);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  workers.reserve(n_threads);
  for (std::size_t w = 0; w < n_threads; ++w) {
    workers.emplace_back([&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        body(i);
      }
    });
  }
  for (auto& t : workers) t.join();
}

}  // namespace carlo
