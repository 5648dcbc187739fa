// Copyright 2026 The Hybridscope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HYBRIDSCOPE_SRC_PARALLEL_HPP_
#define HYBRIDSCOPE_SRC_PARALLEL_HPP_

#include <algorithm>
#include <thread>
#include <vector>

namespace hybridscope::detail {

inline unsigned effective_threads(unsigned requested) {
  if (requested == 0) {
    requested = std::max(1u, std::thread::hardware_concurrency());
  }
  return requested;
}

/// Runs fn(begin, end) over contiguous chunks of [0, count). Chunks never
/// share an output row, so the split does not affect results.
template <class Fn>
void parallel_rows(int count, unsigned threads, Fn&& fn) {
  const unsigned workers =
      std::min<unsigned>(effective_threads(threads), std::max(count, 1));
  if (workers <= 1) {
    fn(0, count);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const int chunk = (count + static_cast<int>(workers) - 1) /
                    static_cast<int>(workers);
  for (int begin = 0; begin < count; begin += chunk) {
    const int end = std::min(count, begin + chunk);
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
}

}  // namespace hybridscope::detail

#endif  // HYBRIDSCOPE_SRC_PARALLEL_HPP_
