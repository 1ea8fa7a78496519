#pragma once

#include "fracmim/types.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace fracmim {

// Runs body(i) for i in [0, n) across worker threads. Each index writes only
// its own output slot, so results do not depend on the thread count.
template <class F>
void parallel_for(Index n, F&& body) {
  if (n <= 0) return;
  const Index hw = static_cast<Index>(std::max(1u, std::thread::hardware_concurrency()));
  const Index workers = std::min<Index>(hw, n);
  if (workers == 1) {
    for (Index i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (Index w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (Index i = w; i < n; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace fracmim
