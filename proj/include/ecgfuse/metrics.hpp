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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace ecgfuse {

struct EvalResult {
  double auroc = 0.0;
  double aucpr = 0.0;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;

  friend bool operator==(const EvalResult&, const EvalResult&) = default;
};

struct SummaryStats {
  double mean = 0.0;
  double std = 0.0;
  std::size_t n = 0;
  /// False when n == 1; std is then reported as 0.
  bool std_defined = false;
};

/// Mann-Whitney AUROC: fraction of (positive, negative) pairs ranked
/// correctly, ties counting one half. Computed from average ranks.
double auroc(std::span<const double> scores, std::span<const std::uint8_t> labels);

/// Average precision with tied scores grouped into one threshold block:
/// sum over blocks of (recall gain) * (precision after the block).
double aucpr(std::span<const double> scores, std::span<const std::uint8_t> labels);

EvalResult evaluate(std::span<const double> scores,
                    std::span<const std::uint8_t> labels);

/// Mean and standard deviation; sample (n - 1) divisor unless `population`.
SummaryStats summarize(std::span<const double> values, bool population = false);

inline constexpr const char* kAucprMethod = "average_precision_steps";

}  // namespace ecgfuse
