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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ecgfuse/matrix.hpp"

namespace ecgfuse {

/// Boosting hyperparameters. Depth 6, learning rate 0.1 and 0.8 row/column
/// subsampling are the published setup; the remaining defaults are the usual
/// ones for second-order boosted trees.
struct GbdtConfig {
  int n_rounds = 100;
  int max_depth = 6;
  double learning_rate = 0.1;
  double subsample = 0.8;
  double colsample_bytree = 0.8;
  double reg_lambda = 1.0;
  double gamma = 0.0;
  double min_child_weight = 1.0;
  double base_score = 0.5;
  std::uint64_t seed = 0;

  /// Throws ConfigError on any out-of-domain field.
  void validate() const;

  friend bool operator==(const GbdtConfig&, const GbdtConfig&) = default;
};

/// One node of a regression tree stored in a flat array. Internal nodes send
/// x to `left` when x[feature] < threshold, otherwise to `right`.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double weight = 0.0;

  bool is_leaf() const noexcept { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

class Tree {
 public:
  Tree() = default;
  explicit Tree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  const TreeNode& root() const { return nodes_.front(); }

  /// Index of the leaf reached by `x`.
  int leaf_index(std::span<const float> x) const;
  double predict(std::span<const float> x) const {
    return nodes_[static_cast<std::size_t>(leaf_index(x))].weight;
  }

  /// Number of edges on the longest root-to-leaf path.
  int depth() const;

  friend bool operator==(const Tree&, const Tree&) = default;

 private:
  std::vector<TreeNode> nodes_;
};

struct GbdtModel {
  GbdtConfig config;
  std::size_t n_features = 0;
  std::vector<Tree> trees;

  double base_margin() const;
  friend bool operator==(const GbdtModel&, const GbdtModel&) = default;
};

/// Newton-boosted trees on the logistic loss with exact greedy split search.
/// The result depends only on (features, labels, config): rows are processed
/// in a canonical content order, so permuting input rows together with their
/// labels leaves the model unchanged.
GbdtModel train(const FeatureMatrix& features,
                std::span<const std::uint8_t> labels, const GbdtConfig& config);

/// logit(base_score) + learning_rate * sum of tree outputs. `n_trees` limits
/// the sum to the first trees (staged prediction).
std::vector<double> predict_margin(const GbdtModel& model,
                                   const FeatureMatrix& features,
                                   std::optional<std::size_t> n_trees = {});

std::vector<double> predict_proba(const GbdtModel& model,
                                  const FeatureMatrix& features,
                                  std::optional<std::size_t> n_trees = {});

double sigmoid(double margin);

/// Split objective for a parent divided into (left, right) gradient/hessian
/// sums: half the reduction in regularized loss, minus gamma.
double split_gain(double g_left, double h_left, double g_right, double h_right,
                  double lambda, double gamma);

/// -G / (H + lambda), 0 when the denominator vanishes.
double leaf_weight(double g, double h, double lambda);

/// Order in which training sums rows: by label, then lexicographically by
/// feature values, ties by original index.
std::vector<std::size_t> canonical_row_order(
    const FeatureMatrix& features, std::span<const std::uint8_t> labels);

/// Model persistence: {"format", "n_features", "config", "trees"} with each
/// tree a nested {feature, threshold, left, right} / {weight} object.
std::string model_to_json(const GbdtModel& model);
GbdtModel model_from_json(const std::string& text);

void save_model(const GbdtModel& model, const std::string& path);
GbdtModel load_model(const std::string& path);

}  // namespace ecgfuse
