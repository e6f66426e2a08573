//
// revpref - Copyright 2026 The revpref Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace revpref {

inline int resolve_threads(int requested) {
  if (requested > 0)
    return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(i) for i in [0, n) on up to `threads` workers. Work items must
// write only to their own slot; the first failing index (lowest i) decides
// which exception is rethrown, so errors are independent of scheduling.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn &&fn) {
  const auto workers =
      std::min<std::size_t>(static_cast<std::size_t>(resolve_threads(threads)),
                            n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      fn(i);
    return;
  }

  std::vector<std::exception_ptr> errors(n);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto &e: errors) {
    if (e)
      std::rethrow_exception(e);
  }
}

}  // namespace revpref
