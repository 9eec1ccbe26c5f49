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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ecgfuse/embedding_store.hpp"
#include "ecgfuse/gbdt.hpp"
#include "ecgfuse/rng.hpp"

namespace ecgfuse::testing {

// ---- random inputs --------------------------------------------------------

/// Scores drawn from a small grid half the time so ties are common.
inline std::vector<double> random_scores(Rng& rng, std::size_t m) {
  std::vector<double> s(m);
  const bool coarse = rng.below(2) == 0;
  for (auto& v : s) {
    v = coarse ? static_cast<double>(rng.below(7)) / 6.0 : rng.uniform();
  }
  if (m > 2) {
    for (int k = 0; k < 3; ++k) s[rng.below(m)] = s[rng.below(m)];  // forced ties
  }
  return s;
}

/// Binary labels with at least one of each class (m >= 2).
inline std::vector<std::uint8_t> random_labels(Rng& rng, std::size_t m) {
  std::vector<std::uint8_t> y(m);
  for (auto& v : y) v = static_cast<std::uint8_t>(rng.below(2));
  y[0] = 0;
  y[1] = 1;
  rng.shuffle_prefix(std::span<std::uint8_t>(y), m);
  return y;
}

inline std::string random_id(Rng& rng) {
  static const char kChars[] = "abcdefghijklmnopqrstuvwxyz0123456789_-.";
  std::string s(1 + rng.below(12), ' ');
  for (auto& c : s) c = kChars[rng.below(sizeof kChars - 1)];
  return s;
}

inline EmbeddingSet random_set(Rng& rng, std::size_t n, std::size_t d) {
  std::vector<std::string> ids;
  std::map<std::string, bool> seen;
  while (ids.size() < n) {
    auto id = random_id(rng) + std::to_string(ids.size());
    if (seen.emplace(id, true).second) ids.push_back(id);
  }
  std::vector<std::uint8_t> labels(n);
  for (auto& l : labels) l = static_cast<std::uint8_t>(rng.below(2));
  FeatureMatrix x(n, d);
  for (auto& v : x.data()) {
    // Mix of ordinary values, signed zeros, subnormals and extremes.
    switch (rng.below(8)) {
      case 0: v = -0.0f; break;
      case 1: v = 1e-40f; break;
      case 2: v = static_cast<float>(rng.uniform() * 3.4e38); break;
      default: v = static_cast<float>(rng.normal());
    }
  }
  return EmbeddingSet::make(std::move(ids), std::move(labels), std::move(x),
                            rng.below(3) == 0 ? "" : "tag-" + random_id(rng));
}

/// Features on a coarse grid so split candidates include ties.
inline FeatureMatrix random_features(Rng& rng, std::size_t n, std::size_t d,
                                     bool coarse = false) {
  FeatureMatrix x(n, d);
  for (auto& v : x.data()) {
    v = coarse ? static_cast<float>(rng.below(9)) : static_cast<float>(rng.normal());
  }
  return x;
}

/// Labels loosely tied to the first feature.
inline std::vector<std::uint8_t> noisy_labels(Rng& rng, const FeatureMatrix& x) {
  std::vector<std::uint8_t> y(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    y[i] = static_cast<std::uint8_t>(x(i, 0) + rng.normal() > 0.0);
  }
  y[0] = 0;
  y[1] = 1;
  return y;
}

// ---- oracles --------------------------------------------------------------

/// Pairwise Mann-Whitney count over every (positive, negative) pair.
inline double auroc_pairwise(const std::vector<double>& s, const std::vector<std::uint8_t>& y) {
  double wins = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (y[i] != 1) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j] != 0) continue;
      ++pairs;
      if (s[i] > s[j]) wins += 1.0;
      else if (s[i] == s[j]) wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

/// Threshold sweep: for every distinct score t (descending), precision and
/// recall of "score >= t" are recomputed from scratch.
inline double aucpr_sweep(const std::vector<double>& s, const std::vector<std::uint8_t>& y) {
  std::vector<double> thresholds(s);
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  const double total_pos = static_cast<double>(std::count(y.begin(), y.end(), 1));
  double ap = 0.0;
  double prev_recall = 0.0;
  for (double t : thresholds) {
    double tp = 0.0, fp = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] >= t) (y[i] ? tp : fp) += 1.0;
    }
    const double recall = tp / total_pos;
    ap += (recall - prev_recall) * (tp / (tp + fp));
    prev_recall = recall;
  }
  return ap;
}

struct OracleSplit {
  bool split = false;
  int feature = -1;
  double threshold = 0.0;
};

/// Enumerates every (feature, midpoint threshold) for the rows of one node and
/// returns the gain argmax with ties to the lowest feature then threshold.
/// `rows` are in the trainer's summation order; G and H are the node totals
/// summed in that order, G_L/H_L sum the rows below the threshold in ascending
/// (value, position) order.
inline OracleSplit brute_force_split(const FeatureMatrix& x, const std::vector<std::size_t>& rows,
                                     const std::vector<double>& g, const std::vector<double>& h,
                                     const GbdtConfig& cfg) {
  double G = 0.0, H = 0.0;
  for (auto r : rows) {
    G += g[r];
    H += h[r];
  }
  OracleSplit best;
  double best_gain = 0.0;
  for (std::size_t j = 0; j < x.cols(); ++j) {
    std::vector<std::size_t> by_value(rows);
    std::stable_sort(by_value.begin(), by_value.end(),
                     [&](auto a, auto b) { return x(a, j) < x(b, j); });
    std::vector<float> values;
    for (auto r : by_value) values.push_back(x(r, j));
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
      const double thr = (static_cast<double>(values[k]) + static_cast<double>(values[k + 1])) / 2.0;
      double gl = 0.0, hl = 0.0;
      for (auto r : by_value) {
        if (static_cast<double>(x(r, j)) < thr) {
          gl += g[r];
          hl += h[r];
        }
      }
      const double gr = G - gl, hr = H - hl;
      if (hl < cfg.min_child_weight || hr < cfg.min_child_weight) continue;
      const double gain = 0.5 * (gl * gl / (hl + cfg.reg_lambda) + gr * gr / (hr + cfg.reg_lambda) -
                                 G * G / (H + cfg.reg_lambda)) -
                          cfg.gamma;
      if (gain > 0.0 && (!best.split || gain > best_gain)) {
        best = {true, static_cast<int>(j), thr};
        best_gain = gain;
      }
    }
  }
  return best;
}

/// Replays every tree of a model trained with subsample = colsample = 1 and
/// compares each node with the brute-force oracle; also checks leaf weights
/// and the depth bound. Returns the number of mismatching nodes.
inline int count_split_mismatches(const FeatureMatrix& features, const std::vector<std::uint8_t>& labels,
                                  const GbdtModel& model) {
  const auto order = canonical_row_order(features, labels);
  const FeatureMatrix x = select_rows(features, order);
  std::vector<double> y(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) y[i] = labels[order[i]];

  int mismatches = 0;
  for (std::size_t t = 0; t < model.trees.size(); ++t) {
    const auto margin = predict_margin(model, x, t);
    std::vector<double> g(x.rows()), h(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
      const double p = sigmoid(margin[i]);
      g[i] = p - y[i];
      h[i] = p * (1.0 - p);
    }
    const auto& nodes = model.trees[t].nodes();
    // (node, depth, rows) worklist
    struct Item {
      int node;
      int depth;
      std::vector<std::size_t> rows;
    };
    std::vector<Item> work;
    std::vector<std::size_t> all(x.rows());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    work.push_back({0, 0, all});
    while (!work.empty()) {
      Item it = std::move(work.back());
      work.pop_back();
      const TreeNode& n = nodes[static_cast<std::size_t>(it.node)];
      OracleSplit want;
      if (it.depth < model.config.max_depth) want = brute_force_split(x, it.rows, g, h, model.config);
      if (!want.split) {
        double G = 0.0, H = 0.0;
        for (auto r : it.rows) {
          G += g[r];
          H += h[r];
        }
        if (!n.is_leaf() || n.weight != leaf_weight(G, H, model.config.reg_lambda)) ++mismatches;
        continue;
      }
      if (n.is_leaf() || n.feature != want.feature || n.threshold != want.threshold) {
        ++mismatches;
        continue;
      }
      std::vector<std::size_t> l, r;
      for (auto row : it.rows) {
        (static_cast<double>(x(row, static_cast<std::size_t>(n.feature))) < n.threshold ? l : r)
            .push_back(row);
      }
      work.push_back({n.left, it.depth + 1, std::move(l)});
      work.push_back({n.right, it.depth + 1, std::move(r)});
    }
  }
  return mismatches;
}

/// Mean log-loss of the model after its first `n_trees` trees.
inline double log_loss(const GbdtModel& model, const FeatureMatrix& x,
                       const std::vector<std::uint8_t>& y, std::size_t n_trees) {
  const auto m = predict_margin(model, x, n_trees);
  double loss = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    // log(1 + e^-z) for the signed margin, stable form
    const double z = y[i] ? m[i] : -m[i];
    loss += z > 0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
  }
  return loss / static_cast<double>(m.size());
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("ecgfuse_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace ecgfuse::testing
