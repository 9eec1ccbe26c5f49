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

#include <gtest/gtest.h>

#include <cmath>

#include "ecgfuse/errors.hpp"
#include "ecgfuse/metrics.hpp"
#include "ecgfuse/synthgen.hpp"

namespace ecgfuse {
namespace {

TEST(NormalCdf, KnownValues) {
  EXPECT_EQ(normal_cdf(0.0), 0.5);
  EXPECT_NEAR(normal_cdf(1.0), 0.8413447460685429, 1e-12);
  EXPECT_NEAR(normal_cdf(-1.96), 0.024997895148220435, 1e-12);
  EXPECT_NEAR(normal_cdf(1.0 / std::sqrt(2.0)), 0.7602499389065233, 1e-12);
}

TEST(BayesAuroc, Examples) {
  EXPECT_EQ(bayes_auroc(0.0), 0.5);
  EXPECT_NEAR(bayes_auroc(std::sqrt(2.0)), 0.8413, 1e-4);
  EXPECT_NEAR(bayes_auroc(combined_dprime(1.0, 1.0)), 0.8413, 1e-4);
  EXPECT_NEAR(bayes_auroc(1.0), 0.7602, 1e-4);
  EXPECT_NEAR(bayes_auroc(combined_dprime(1.2, 1.6)), 0.9214, 1e-4);
}

TEST(Generate, DefaultShapeAndCounts) {
  auto [a, b] = generate(SynthConfig{});
  EXPECT_EQ(a.size(), 5813u);
  EXPECT_EQ(a.dim(), 64u);
  EXPECT_EQ(b.dim(), 64u);
  EXPECT_EQ(a.count_label(1), 1207u);
  EXPECT_EQ(a.ids(), b.ids());
  EXPECT_EQ(a.labels(), b.labels());
  EXPECT_EQ(a.ids().front(), "rec_000000");
  EXPECT_EQ(a.source_tag(), "synth-a");
  EXPECT_EQ(b.source_tag(), "synth-b");
}

TEST(Generate, Deterministic) {
  SynthConfig c;
  c.n_records = 200;
  c.n_pos = 50;
  c.seed = 4;
  EXPECT_EQ(encode_ebf(generate(c).first), encode_ebf(generate(c).first));
  auto other = c;
  other.seed = 5;
  EXPECT_NE(generate(c).first, generate(other).first);
}

TEST(Generate, ConfigErrors) {
  SynthConfig c;
  c.n_pos = c.n_records;
  EXPECT_THROW(generate(c), ConfigError);
  c = SynthConfig{};
  c.dim_a = 0;
  EXPECT_THROW(generate(c), ConfigError);
  c = SynthConfig{};
  c.noise_scale = 0.0;
  EXPECT_THROW(generate(c), ConfigError);
  c = SynthConfig{};
  c.dprime_b = -1.0;
  EXPECT_THROW(generate(c), ConfigError);
}

double axis0_auroc(const EmbeddingSet& s) {
  std::vector<double> score(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) score[i] = s.features()(i, 0);
  return auroc(score, s.labels());
}

// The optimal scorer for one view is its signal axis; for the pair it is the
// d'-weighted sum of both signal axes.
TEST(Generate, OptimalScorerMatchesBayesAuroc) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SynthConfig c;
    c.dim_a = 4;
    c.dim_b = 4;
    c.dprime_a = 1.2;
    c.dprime_b = 1.6;
    c.seed = seed;
    auto [a, b] = generate(c);
    EXPECT_NEAR(axis0_auroc(a), bayes_auroc(1.2), 0.02);
    EXPECT_NEAR(axis0_auroc(b), bayes_auroc(1.6), 0.02);
    std::vector<double> fused(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      fused[i] = 1.2 * a.features()(i, 0) + 1.6 * b.features()(i, 0);
    }
    const double f = auroc(fused, a.labels());
    EXPECT_NEAR(f, bayes_auroc(2.0), 0.02);
    EXPECT_GT(f, axis0_auroc(b));
  }
}

TEST(Generate, NoSignalNearChance) {
  SynthConfig c;
  c.dim_a = c.dim_b = 2;
  c.dprime_a = c.dprime_b = 0.0;
  auto [a, b] = generate(c);
  EXPECT_NEAR(axis0_auroc(a), 0.5, 0.03);
  EXPECT_NEAR(axis0_auroc(b), 0.5, 0.03);
}

TEST(Generate, NoiseScaleScalesShift) {
  SynthConfig c;
  c.dim_a = c.dim_b = 1;
  c.noise_scale = 5.0;
  c.dprime_a = 1.2;
  auto [a, b] = generate(c);
  EXPECT_NEAR(axis0_auroc(a), bayes_auroc(1.2), 0.02);
}

}  // namespace
}  // namespace ecgfuse
