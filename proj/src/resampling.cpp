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

#include "ecgfuse/resampling.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "ecgfuse/rng.hpp"

namespace ecgfuse {

namespace {

struct Fnv1a {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  void add(std::uint64_t v) {
    for (int k = 0; k < 8; ++k) {
      h ^= (v >> (8 * k)) & 0xFF;
      h *= 0x100000001b3ULL;
    }
  }
};

}  // namespace

std::string SplitPlan::digest() const {
  Fnv1a f;
  f.add(seed);
  f.add(train_indices.size());
  for (auto i : train_indices) f.add(i);
  f.add(test_indices.size());
  for (auto i : test_indices) f.add(i);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(f.h));
  return buf;
}

void ReshuffleSpec::validate() const {
  if (n_repeats < 1) throw ConfigError("reshuffle: n_repeats must be >= 1");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("reshuffle: test_fraction must be in (0, 1)");
  }
}

SplitPlan stratified_split(std::span<const std::uint8_t> labels, double test_fraction,
                           std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("test_fraction must be in (0, 1)");
  }
  if (labels.size() < 4) {
    throw StratificationError("stratified split needs at least 4 rows, got " +
                              std::to_string(labels.size()));
  }
  std::vector<std::size_t> strata[2];
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] > 1) throw ValidationError("labels must be 0 or 1");
    strata[labels[i]].push_back(i);
  }
  for (int c = 0; c < 2; ++c) {
    if (strata[c].size() < 2) {
      throw StratificationError("class " + std::to_string(c) + " has " +
                                std::to_string(strata[c].size()) +
                                " member(s); stratification needs at least 2");
    }
  }

  SplitPlan plan;
  plan.seed = seed;
  Rng rng(seed);
  std::vector<char> is_test(labels.size(), 0);
  for (auto& members : strata) {
    const std::size_t k = rounded_count(members.size(), test_fraction, 1, members.size() - 1);
    rng.shuffle_prefix(std::span<std::size_t>(members), k);
    for (std::size_t t = 0; t < k; ++t) is_test[members[t]] = 1;
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (is_test[i] ? plan.test_indices : plan.train_indices).push_back(i);
  }
  return plan;
}

const ArmReport& BenchmarkReport::arm(const std::string& name) const {
  for (const auto& a : arms) {
    if (a.name == name) return a;
  }
  throw ConfigError("no arm named \"" + name + "\" in report");
}

EvalResult fit_and_score(const EmbeddingSet& train_set, const EmbeddingSet& test,
                         const GbdtConfig& config, GbdtModel* model_out) {
  GbdtModel model = train(train_set.features(), train_set.labels(), config);
  const auto scores = predict_proba(model, test.features());
  const EvalResult result = evaluate(scores, test.labels());
  if (model_out) *model_out = std::move(model);
  return result;
}

FusedSplit fuse_for_split(const EmbeddingSet& left, const EmbeddingSet& right,
                          std::span<const std::size_t> train_indices) {
  FusedSplit out;
  out.left_scaler = fit_minmax(select_rows(left.features(), train_indices));
  out.right_scaler = fit_minmax(select_rows(right.features(), train_indices));
  const auto l = left.with_features(apply_minmax(out.left_scaler, left.features()));
  const auto r = right.with_features(apply_minmax(out.right_scaler, right.features()));
  out.fused = fuse(l, r);
  return out;
}

BenchmarkReport run_benchmark(const std::vector<NamedSet>& arms,
                              const ReshuffleSpec& spec, const GbdtConfig& classifier,
                              const std::vector<FusePair>& fuse_pairs,
                              const CellObserver& observer) {
  spec.validate();
  classifier.validate();
  if (arms.empty()) throw ConfigError("benchmark needs at least one arm");

  std::set<std::string> names;
  auto find_arm = [&](const std::string& name) -> const EmbeddingSet& {
    for (const auto& a : arms) {
      if (a.name == name) return a.set;
    }
    throw ConfigError("fuse pair references unknown arm \"" + name + "\"");
  };
  for (const auto& a : arms) {
    if (!names.insert(a.name).second) throw ConfigError("duplicate arm name \"" + a.name + "\"");
    if (!same_records(a.set, arms.front().set)) {
      throw AlignmentError("arm \"" + a.name + "\" is not aligned with arm \"" +
                           arms.front().name + "\" (ids or labels differ)");
    }
  }
  for (const auto& p : fuse_pairs) {
    if (!names.insert(p.name).second) throw ConfigError("duplicate arm name \"" + p.name + "\"");
    find_arm(p.left);
    find_arm(p.right);
  }

  BenchmarkReport report;
  report.spec = spec;
  report.classifier = classifier;
  for (const auto& a : arms) {
    report.arms.emplace_back();
    report.arms.back().name = a.name;
  }
  for (const auto& p : fuse_pairs) {
    ArmReport& arm = report.arms.emplace_back();
    arm.name = p.name;
    arm.left = p.left;
    arm.right = p.right;
  }

  const auto& labels = arms.front().set.labels();
  for (int rep = 0; rep < spec.n_repeats; ++rep) {
    const std::uint64_t seed = spec.base_seed + static_cast<std::uint64_t>(rep);
    SplitPlan plan = stratified_split(labels, spec.test_fraction, seed);

    auto run_cell = [&](ArmReport& arm, const EmbeddingSet& data) {
      const auto train_set = data.subset(plan.train_indices);
      const auto test_set = data.subset(plan.test_indices);
      GbdtModel model;
      EvalResult result;
      try {
        result = fit_and_score(train_set, test_set, classifier, &model);
      } catch (const UndefinedMetricError& e) {
        throw UndefinedMetricError("repeat " + std::to_string(rep) + ", arm \"" +
                                   arm.name + "\": " + e.what());
      }
      arm.results.push_back(result);
      arm.plan_digests.push_back(plan.digest());
      if (observer) observer(CellOutput{rep, arm.name, model, test_set, arm.results.back()});
    };

    std::size_t slot = 0;
    for (const auto& a : arms) run_cell(report.arms[slot++], a.set);
    for (const auto& p : fuse_pairs) {
      ArmReport& arm = report.arms[slot++];
      FusedSplit fs = fuse_for_split(find_arm(p.left), find_arm(p.right), plan.train_indices);
      arm.left_scalers.push_back(std::move(fs.left_scaler));
      arm.right_scalers.push_back(std::move(fs.right_scaler));
      run_cell(arm, fs.fused);
    }
    report.plans.push_back(std::move(plan));
  }

  for (auto& arm : report.arms) {
    std::vector<double> au, ap;
    for (const auto& r : arm.results) {
      au.push_back(r.auroc);
      ap.push_back(r.aucpr);
    }
    arm.auroc = summarize(au);
    arm.aucpr = summarize(ap);
  }
  return report;
}

}  // namespace ecgfuse
