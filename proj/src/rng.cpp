// Copyright 2026 The ecgfuse Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ecgfuse/rng.hpp"

#include <algorithm>
#include <numeric>

namespace ecgfuse {

std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t n,
                                                    std::size_t k) {
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  k = std::min(k, n);
  rng.shuffle_prefix(std::span<std::size_t>(pool), k);
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::size_t rounded_count(std::size_t n, double fraction, std::size_t lo,
                          std::size_t hi) {
  const double raw = std::floor(static_cast<double>(n) * fraction + 0.5);
  auto count = static_cast<std::size_t>(std::max(raw, 0.0));
  return std::clamp(count, lo, hi);
}

}  // namespace ecgfuse
