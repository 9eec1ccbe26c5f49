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

#include <algorithm>

#include "ecgfuse/fusion.hpp"
#include "ecgfuse/resampling.hpp"
#include "support.hpp"

namespace ecgfuse {
namespace {

FeatureMatrix column(std::vector<float> v) {
  const std::size_t n = v.size();
  return FeatureMatrix(n, 1, std::move(v));
}

TEST(MinMax, FitExamples) {
  auto s = fit_minmax(column({2, 4, 6}));
  EXPECT_EQ(s.mins[0], 2.0);
  EXPECT_EQ(s.maxs[0], 6.0);
  s = fit_minmax(column({5, 5}));
  EXPECT_EQ(s.mins[0], 5.0);
  EXPECT_EQ(s.maxs[0], 5.0);
  s = fit_minmax(column({1.5}));
  EXPECT_EQ(s.mins[0], 1.5);
  EXPECT_EQ(s.maxs[0], 1.5);
  EXPECT_THROW(fit_minmax(FeatureMatrix(0, 1)), ValidationError);
}

TEST(MinMax, ApplyExamples) {
  const MinMaxScaler s{{2.0}, {6.0}};
  auto out = apply_minmax(s, column({4, 8, 0}));
  EXPECT_EQ(out(0, 0), 0.5f);
  EXPECT_EQ(out(1, 0), 1.5f);  // no clamping
  EXPECT_EQ(out(2, 0), -0.5f);
  const MinMaxScaler flat{{5.0}, {5.0}};
  EXPECT_EQ(apply_minmax(flat, column({123}))(0, 0), 0.0f);
  EXPECT_THROW(apply_minmax(s, FeatureMatrix(1, 2)), ValidationError);
}

TEST(MinMax, FittedRowsSpanZeroToOne) {
  Rng rng(8);
  for (int k = 0; k < 50; ++k) {
    auto x = testing::random_features(rng, 2 + rng.below(30), 1 + rng.below(5));
    auto y = apply_minmax(fit_minmax(x), x);
    for (std::size_t j = 0; j < x.cols(); ++j) {
      float lo = 1e9f, hi = -1e9f;
      for (std::size_t i = 0; i < x.rows(); ++i) {
        lo = std::min(lo, y(i, j));
        hi = std::max(hi, y(i, j));
      }
      EXPECT_EQ(lo, 0.0f);
      EXPECT_EQ(hi, 1.0f);
    }
  }
}

TEST(MinMax, PreservesOrderWithinColumn) {
  Rng rng(9);
  auto x = testing::random_features(rng, 40, 3);
  auto y = apply_minmax(fit_minmax(x), x);
  for (std::size_t j = 0; j < 3; ++j) {
    for (std::size_t a = 0; a < 40; ++a) {
      for (std::size_t b = 0; b < 40; ++b) {
        if (x(a, j) < x(b, j)) EXPECT_LE(y(a, j), y(b, j));
      }
    }
  }
}

EmbeddingSet set_of(std::vector<std::string> ids, std::vector<std::uint8_t> labels,
                    std::size_t d, std::vector<float> v) {
  const std::size_t n = ids.size();
  return EmbeddingSet::make(std::move(ids), std::move(labels), FeatureMatrix(n, d, std::move(v)),
                            "x");
}

TEST(Fuse, ConcatenatesRows) {
  auto a = set_of({"p", "q"}, {0, 1}, 2, {0.1f, 0.2f, 0.3f, 0.4f});
  auto b = set_of({"p", "q"}, {0, 1}, 1, {0.9f, 0.8f});
  auto f = fuse(a, b);
  EXPECT_EQ(f.dim(), 3u);
  EXPECT_EQ(f.source_tag(), "fused");
  EXPECT_EQ(f.features()(0, 0), 0.1f);
  EXPECT_EQ(f.features()(0, 1), 0.2f);
  EXPECT_EQ(f.features()(0, 2), 0.9f);
  EXPECT_EQ(f.ids(), a.ids());
}

TEST(Fuse, DimensionArithmetic) {
  auto a = set_of({"p"}, {0}, 2, {0, 0});
  auto b = set_of({"p"}, {0}, 3, {0, 0, 0});
  EXPECT_EQ(fuse(a, b).dim(), 5u);
}

TEST(Fuse, MismatchedRecords) {
  auto a = set_of({"p", "q"}, {0, 1}, 1, {0, 0});
  EXPECT_THROW(fuse(a, set_of({"q", "p"}, {1, 0}, 1, {0, 0})), AlignmentError);
  EXPECT_THROW(fuse(a, set_of({"p", "q"}, {1, 1}, 1, {0, 0})), AlignmentError);
}

TEST(Fuse, SlicingRecoversInputs) {
  Rng rng(4);
  auto a = testing::random_set(rng, 12, 3);
  auto b = EmbeddingSet::make(a.ids(), a.labels(), testing::random_features(rng, 12, 2), "b");
  auto f = fuse(a, b);
  for (std::size_t i = 0; i < 12; ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(f.features()(i, j), a.features()(i, j));
    for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(f.features()(i, 3 + j), b.features()(i, j));
  }
}

TEST(FuseForSplit, ScalerIgnoresTestRows) {
  Rng rng(6);
  const std::size_t n = 20;
  auto x = testing::random_features(rng, n, 2);
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("r" + std::to_string(i));
  std::vector<std::uint8_t> y(n, 0);
  auto a = EmbeddingSet::make(ids, y, x, "a");
  auto b = EmbeddingSet::make(ids, y, x, "b");
  const std::vector<std::size_t> train = {0, 2, 4, 6, 8, 10};
  auto first = fuse_for_split(a, b, train);

  auto x2 = x;
  for (std::size_t i = 1; i < n; i += 2) x2(i, 0) = 1000.0f;
  auto second = fuse_for_split(a.with_features(x2), b.with_features(x2), train);
  EXPECT_EQ(first.left_scaler, second.left_scaler);
  EXPECT_EQ(first.right_scaler, second.right_scaler);
  EXPECT_EQ(first.left_scaler, fit_minmax(select_rows(x, train)));
}

}  // namespace
}  // namespace ecgfuse
