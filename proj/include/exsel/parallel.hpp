#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace exsel {

// Runs fn(i) for i in [0, n). Work items must be independent and write only
// to their own output slots; results are then identical for any thread
// count, including 0/1 (serial).
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
  }
  std::size_t nt = static_cast<std::size_t>(threads);
  if (nt <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  nt = std::min(nt, n);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += nt) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace exsel
