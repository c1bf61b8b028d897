#pragma once

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace cmaplab {

// Runs f(i) for i in [0, n) across hardware threads. Each call must write only
// to its own slot; results merge in index order, so the outcome is
// deterministic regardless of scheduling.
template <class F>
void parallel_for(int n, F&& f) {
  unsigned hw = std::thread::hardware_concurrency();
  int nthreads = static_cast<int>(hw ? hw : 1);
  if (nthreads > n) nthreads = n;
  if (nthreads < 2) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<size_t>(nthreads));
  std::vector<std::thread> pool;
  for (int t = 0; t < nthreads; ++t) {
    pool.emplace_back([&, t] {
      try {
        int i;
        while ((i = next.fetch_add(1)) < n) f(i);
      } catch (...) {
        errors[static_cast<size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace cmaplab
