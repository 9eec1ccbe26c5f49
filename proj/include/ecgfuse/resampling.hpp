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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ecgfuse/embedding_store.hpp"
#include "ecgfuse/fusion.hpp"
#include "ecgfuse/gbdt.hpp"
#include "ecgfuse/metrics.hpp"

namespace ecgfuse {

/// One stratified train/test partition. Both index lists are ascending.
struct SplitPlan {
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
  std::uint64_t seed = 0;

  /// FNV-1a 64 over the seed and both index lists, as 16 hex digits.
  std::string digest() const;
  friend bool operator==(const SplitPlan&, const SplitPlan&) = default;
};

struct ReshuffleSpec {
  int n_repeats = 10;
  double test_fraction = 0.2;
  std::uint64_t base_seed = 0;

  void validate() const;
};

/// Per class: test count = round-half-up(n_class * test_fraction) clamped to
/// [1, n_class - 1], members picked by a seeded Fisher-Yates prefix (class 0
/// drawn first, then class 1, from one generator).
SplitPlan stratified_split(std::span<const std::uint8_t> labels, double test_fraction,
                           std::uint64_t seed);

struct NamedSet {
  std::string name;
  EmbeddingSet set;
};

/// Declares a fused arm built from two single arms.
struct FusePair {
  std::string name;
  std::string left;
  std::string right;
};

struct ArmReport {
  std::string name;
  std::vector<EvalResult> results;  // one per repeat
  std::vector<std::string> plan_digests;
  SummaryStats auroc;
  SummaryStats aucpr;
  // Fused arms only: per-repeat scalers fitted on the training rows.
  std::string left;
  std::string right;
  std::vector<MinMaxScaler> left_scalers;
  std::vector<MinMaxScaler> right_scalers;

  bool fused() const noexcept { return !left.empty(); }
};

struct BenchmarkReport {
  ReshuffleSpec spec;
  GbdtConfig classifier;
  std::vector<SplitPlan> plans;
  std::vector<ArmReport> arms;

  const ArmReport& arm(const std::string& name) const;
};

/// Everything produced for one (repeat, arm) cell, handed to an optional
/// observer so callers can persist models and test sets.
struct CellOutput {
  int repeat = 0;
  const std::string& arm;
  const GbdtModel& model;
  const EmbeddingSet& test_set;
  const EvalResult& result;
};
using CellObserver = std::function<void(const CellOutput&)>;

/// Trains on `train`, scores `test` with predict_proba.
EvalResult fit_and_score(const EmbeddingSet& train, const EmbeddingSet& test,
                         const GbdtConfig& config, GbdtModel* model_out = nullptr);

/// Min-max scalers fitted on the training rows of each source, applied to all
/// rows, then concatenated.
struct FusedSplit {
  EmbeddingSet fused;
  MinMaxScaler left_scaler;
  MinMaxScaler right_scaler;
};
FusedSplit fuse_for_split(const EmbeddingSet& left, const EmbeddingSet& right,
                          std::span<const std::size_t> train_indices);

/// Repeats stratified reshuffles; every arm (and every fused pair) is trained
/// and scored on the same split in each repeat, with the same classifier
/// settings. Arms must share ids and labels.
BenchmarkReport run_benchmark(const std::vector<NamedSet>& arms,
                              const ReshuffleSpec& spec, const GbdtConfig& classifier,
                              const std::vector<FusePair>& fuse_pairs = {},
                              const CellObserver& observer = {});

}  // namespace ecgfuse
