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

#include "ecgfuse/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "ecgfuse/errors.hpp"

namespace ecgfuse {

namespace {

struct ClassCounts {
  std::size_t pos = 0;
  std::size_t neg = 0;
};

ClassCounts check_metric_input(std::span<const double> scores,
                               std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) {
    throw ValidationError("scores and labels differ in length");
  }
  ClassCounts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] > 1) throw ValidationError("labels must be 0 or 1");
    if (!std::isfinite(scores[i])) {
      throw ValidationError("non-finite score at index " + std::to_string(i));
    }
    (labels[i] ? c.pos : c.neg) += 1;
  }
  if (c.pos == 0 || c.neg == 0) {
    throw UndefinedMetricError("metric undefined: need both classes (positives=" +
                               std::to_string(c.pos) +
                               ", negatives=" + std::to_string(c.neg) + ")");
  }
  return c;
}

std::vector<std::size_t> order_by_score(std::span<const double> scores, bool descending) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return descending ? scores[a] > scores[b] : scores[a] < scores[b];
  });
  return order;
}

}  // namespace

double auroc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  const auto counts = check_metric_input(scores, labels);
  const auto order = order_by_score(scores, /*descending=*/false);

  // Twice the positive rank sum keeps tied average ranks integral.
  double twice_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    std::size_t pos_in_block = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      pos_in_block += labels[order[j]];
      ++j;
    }
    // Ranks i+1..j share the average (i + 1 + j) / 2.
    twice_rank_sum += static_cast<double>(pos_in_block) * static_cast<double>(i + 1 + j);
    i = j;
  }
  const double np = static_cast<double>(counts.pos);
  const double nn = static_cast<double>(counts.neg);
  const double twice_u = twice_rank_sum - np * (np + 1.0);
  return twice_u / (2.0 * np * nn);
}

double aucpr(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  const auto counts = check_metric_input(scores, labels);
  const auto order = order_by_score(scores, /*descending=*/true);

  const double total_pos = static_cast<double>(counts.pos);
  double ap = 0.0;
  std::size_t tp = 0;
  std::size_t seen = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t block_pos = 0;
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      block_pos += labels[order[j]];
      ++j;
    }
    tp += block_pos;
    seen = j;
    if (block_pos > 0) {
      const double precision = static_cast<double>(tp) / static_cast<double>(seen);
      ap += (static_cast<double>(block_pos) / total_pos) * precision;
    }
    i = j;
  }
  return ap;
}

EvalResult evaluate(std::span<const double> scores,
                    std::span<const std::uint8_t> labels) {
  EvalResult r;
  r.auroc = auroc(scores, labels);
  r.aucpr = aucpr(scores, labels);
  for (auto l : labels) (l ? r.n_pos : r.n_neg) += 1;
  return r;
}

SummaryStats summarize(std::span<const double> values, bool population) {
  if (values.empty()) throw ValidationError("cannot summarize an empty list");
  for (double v : values) {
    if (!std::isfinite(v)) throw ValidationError("cannot summarize non-finite values");
  }
  SummaryStats s;
  s.n = values.size();
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.n);
  if (s.n == 1 && !population) return s;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  const double divisor = population ? static_cast<double>(s.n) : static_cast<double>(s.n - 1);
  s.std = std::sqrt(ss / divisor);
  s.std_defined = true;
  return s;
}

}  // namespace ecgfuse
