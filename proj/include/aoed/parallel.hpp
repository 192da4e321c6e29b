// Copyright 2026 The aoed Authors
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

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace aoed {

/// Thread cap for internal parallelism: the AOED_THREADS environment
/// variable when set to a positive integer, hardware concurrency otherwise.
inline int thread_cap() {
  if (const char* env = std::getenv("AOED_THREADS")) {
    const int requested = std::atoi(env);
    if (requested >= 1) return requested;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs body(i) for i in [0, count) on up to thread_cap() threads. Each index
/// is evaluated exactly once by exactly one thread, so outputs written to
/// per-index slots do not depend on the thread count.
template <typename Body>
void parallel_for(long count, const Body& body) {
  if (count <= 0) return;
  const int threads = std::min<long>(thread_cap(), count);
  if (threads <= 1 || count < 4) {
    for (long i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      for (long i = t; i < count; i += threads) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace aoed
