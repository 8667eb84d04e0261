// Copyright 2026 The xlmimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace xlmimo {

/// Runs body(i) for i in [0, n).  Each index is processed exactly once and
/// writes only its own slot, so results do not depend on the thread count.
template <typename Fn>
void parallel_for(int n, int threads, Fn&& body) {
  threads = std::max(1, std::min(threads, n));
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Pairwise tree sum; the reduction order is a pure function of n, making
/// accumulated results identical for any thread count.
inline double tree_sum(const double* v, int n) {
  if (n <= 8) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const int half = n / 2;
  return tree_sum(v, half) + tree_sum(v + half, n - half);
}

inline double tree_sum(const std::vector<double>& v) {
  return tree_sum(v.data(), static_cast<int>(v.size()));
}

}  // namespace xlmimo
