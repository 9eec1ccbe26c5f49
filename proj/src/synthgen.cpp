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

#include "ecgfuse/synthgen.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "ecgfuse/rng.hpp"

namespace ecgfuse {

void SynthConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("synth: " + what); };
  if (n_records < 2) fail("n_records must be at least 2");
  if (n_pos >= n_records) fail("n_pos must be smaller than n_records");
  if (n_pos == 0) fail("n_pos must be positive");
  if (dim_a < 1 || dim_b < 1) fail("dimensions must be at least 1");
  if (!(dprime_a >= 0.0) || !(dprime_b >= 0.0) || !std::isfinite(dprime_a) ||
      !std::isfinite(dprime_b)) {
    fail("dprime values must be finite and non-negative");
  }
  if (!(noise_scale > 0.0) || !std::isfinite(noise_scale)) fail("noise_scale must be positive");
}

namespace {

std::string record_id(std::size_t i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "rec_%0*zu", width, i);
  return buf;
}

FeatureMatrix draw_view(Rng& rng, const std::vector<std::uint8_t>& labels, std::size_t dim,
                        double dprime, double noise) {
  FeatureMatrix x(labels.size(), dim);
  const double half_shift = 0.5 * dprime * noise;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto row = x.row(i);
    for (std::size_t j = 0; j < dim; ++j) {
      double v = noise * rng.normal();
      if (j == 0) v += labels[i] ? half_shift : -half_shift;
      row[j] = static_cast<float>(v);
    }
  }
  return x;
}

}  // namespace

std::pair<EmbeddingSet, EmbeddingSet> generate(const SynthConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const std::size_t n = config.n_records;

  std::vector<std::uint8_t> labels(n, 0);
  std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(config.n_pos), 1);
  rng.shuffle_prefix(std::span<std::uint8_t>(labels), n);

  int width = 6;
  for (std::size_t cap = 1000000; n > cap && width < 19; cap *= 10) ++width;
  std::vector<std::string> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = record_id(i, width);

  auto a = draw_view(rng, labels, config.dim_a, config.dprime_a, config.noise_scale);
  auto b = draw_view(rng, labels, config.dim_b, config.dprime_b, config.noise_scale);
  return {EmbeddingSet::make(ids, labels, std::move(a), "synth-a"),
          EmbeddingSet::make(std::move(ids), std::move(labels), std::move(b), "synth-b")};
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double bayes_auroc(double dprime) {
  if (!(dprime >= 0.0)) throw ValidationError("dprime must be non-negative");
  return normal_cdf(dprime / std::numbers::sqrt2);
}

double combined_dprime(double dprime_a, double dprime_b) {
  return std::hypot(dprime_a, dprime_b);
}

}  // namespace ecgfuse
