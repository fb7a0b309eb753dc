#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace lemm {

/// Applies `work` to every index in [0, count) using up to `jobs` threads,
/// then feeds results to `merge` strictly in index order. `merge` returning
/// false stops the scan after the current block. `work` must be pure; the
/// merge order makes the overall result independent of thread scheduling.
template <typename R>
void blockwise_scan(uint64_t count, int jobs, std::function<R(uint64_t)> work,
                    std::function<bool(uint64_t, R&)> merge) {
  if (jobs < 1) jobs = 1;
  const uint64_t block = jobs == 1 ? count : static_cast<uint64_t>(jobs) * 64;
  for (uint64_t start = 0; start < count; start += std::max<uint64_t>(block, 1)) {
    uint64_t end = std::min(count, start + std::max<uint64_t>(block, 1));
    std::vector<R> results(end - start);
    if (jobs == 1) {
      bool stop = false;
      for (uint64_t i = start; i < end; ++i) {
        results[i - start] = work(i);
        if (!merge(i, results[i - start])) {
          stop = true;
          break;
        }
      }
      if (stop) return;
    } else {
      std::vector<std::thread> threads;
      uint64_t span = end - start;
      uint64_t per = (span + jobs - 1) / jobs;
      for (int t = 0; t < jobs; ++t) {
        uint64_t lo = start + per * t, hi = std::min(end, lo + per);
        if (lo >= hi) break;
        threads.emplace_back([&, lo, hi]() {
          for (uint64_t i = lo; i < hi; ++i) results[i - start] = work(i);
        });
      }
      for (auto& th : threads) th.join();
      for (uint64_t i = start; i < end; ++i)
        if (!merge(i, results[i - start])) return;
    }
  }
}

}  // namespace lemm
