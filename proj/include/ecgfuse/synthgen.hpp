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

#include <cstdint>
#include <utility>

#include "ecgfuse/embedding_store.hpp"

namespace ecgfuse {

/// Paired class-conditional Gaussian embeddings. Each view carries its class
/// signal on its own axis 0 (orthogonal once the views are concatenated) with
/// separation expressed as d' in units of the noise standard deviation.
/// Default counts match a cohort of 5,813 records with 1,207 positives.
struct SynthConfig {
  std::size_t n_records = 5813;
  std::size_t n_pos = 1207;
  std::size_t dim_a = 64;
  std::size_t dim_b = 64;
  double dprime_a = 1.0;
  double dprime_b = 1.0;
  double noise_scale = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Views A ("synth-a") and B ("synth-b") sharing ids "rec_000000"... and
/// labels. Positives are shifted by +d'/2 on axis 0, negatives by -d'/2 (both
/// scaled by noise_scale).
std::pair<EmbeddingSet, EmbeddingSet> generate(const SynthConfig& config);

/// Standard normal CDF.
double normal_cdf(double x);

/// AUROC of the Bayes-optimal scorer for two equal-variance Gaussians whose
/// means are `dprime` standard deviations apart: Phi(dprime / sqrt 2).
double bayes_auroc(double dprime);

/// Effective d' of two orthogonal views: sqrt(a^2 + b^2).
double combined_dprime(double dprime_a, double dprime_b);

}  // namespace ecgfuse
