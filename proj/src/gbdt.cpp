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

#include "ecgfuse/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ecgfuse/rng.hpp"

namespace ecgfuse {

void GbdtConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("gbdt: " + what); };
  if (n_rounds < 0) fail("n_rounds must be >= 0");
  if (max_depth < 1) fail("max_depth must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    fail("learning_rate must be positive");
  }
  if (!(subsample > 0.0 && subsample <= 1.0)) fail("subsample must be in (0, 1]");
  if (!(colsample_bytree > 0.0 && colsample_bytree <= 1.0)) {
    fail("colsample_bytree must be in (0, 1]");
  }
  if (!(reg_lambda >= 0.0) || !std::isfinite(reg_lambda)) fail("reg_lambda must be >= 0");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) fail("gamma must be >= 0");
  if (!(min_child_weight >= 0.0) || !std::isfinite(min_child_weight)) {
    fail("min_child_weight must be >= 0");
  }
  if (!(base_score > 0.0 && base_score < 1.0)) fail("base_score must be in (0, 1)");
}

int Tree::leaf_index(std::span<const float> x) const {
  int i = 0;
  while (!nodes_[static_cast<std::size_t>(i)].is_leaf()) {
    const TreeNode& n = nodes_[static_cast<std::size_t>(i)];
    i = static_cast<double>(x[static_cast<std::size_t>(n.feature)]) < n.threshold
            ? n.left
            : n.right;
  }
  return i;
}

int Tree::depth() const {
  if (nodes_.empty()) return 0;
  std::vector<int> depth(nodes_.size(), 0);
  int deepest = 0;
  // Children always come after their parent in the flat array.
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const TreeNode& n = nodes_[i];
    deepest = std::max(deepest, depth[i]);
    if (!n.is_leaf()) {
      depth[static_cast<std::size_t>(n.left)] = depth[i] + 1;
      depth[static_cast<std::size_t>(n.right)] = depth[i] + 1;
    }
  }
  return deepest;
}

double GbdtModel::base_margin() const {
  return std::log(config.base_score / (1.0 - config.base_score));
}

double sigmoid(double margin) {
  if (margin >= 0.0) return 1.0 / (1.0 + std::exp(-margin));
  const double e = std::exp(margin);
  return e / (1.0 + e);
}

double split_gain(double g_left, double h_left, double g_right, double h_right,
                  double lambda, double gamma) {
  const double g = g_left + g_right;
  const double h = h_left + h_right;
  return 0.5 * (g_left * g_left / (h_left + lambda) +
                g_right * g_right / (h_right + lambda) - g * g / (h + lambda)) -
         gamma;
}

double leaf_weight(double g, double h, double lambda) {
  const double denom = h + lambda;
  return denom > 0.0 ? -g / denom : 0.0;
}

std::vector<std::size_t> canonical_row_order(
    const FeatureMatrix& features, std::span<const std::uint8_t> labels) {
  std::vector<std::size_t> order(features.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (labels[a] != labels[b]) return labels[a] < labels[b];
    auto ra = features.row(a);
    auto rb = features.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });
  return order;
}

namespace {

void check_training_input(const FeatureMatrix& features,
                          std::span<const std::uint8_t> labels) {
  if (features.rows() < 2) throw ValidationError("training needs at least 2 rows");
  if (features.cols() == 0) throw ValidationError("training needs at least 1 feature");
  if (labels.size() != features.rows()) {
    throw ValidationError("label count " + std::to_string(labels.size()) +
                          " does not match row count " +
                          std::to_string(features.rows()));
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] > 1) {
      throw ValidationError("label at row " + std::to_string(i) + " is not binary");
    }
  }
  for (float v : features.data()) {
    if (!std::isfinite(v)) throw ValidationError("training features must be finite");
  }
}

// Every feature column sorted by (value, row), built once per training run.
struct SortedEntry {
  float value;
  std::uint32_t row;
};

struct ColumnIndex {
  std::vector<std::vector<SortedEntry>> columns;

  explicit ColumnIndex(const FeatureMatrix& x) : columns(x.cols()) {
    const std::size_t n = x.rows();
    for (std::size_t j = 0; j < x.cols(); ++j) {
      auto& col = columns[j];
      col.resize(n);
      for (std::size_t r = 0; r < n; ++r) {
        col[r] = {x(r, j), static_cast<std::uint32_t>(r)};
      }
      std::stable_sort(col.begin(), col.end(), [](const SortedEntry& a, const SortedEntry& b) {
        return a.value < b.value;
      });
    }
  }
};

struct GradSum {
  double g = 0.0;
  double h = 0.0;
};

struct BestSplit {
  bool valid = false;
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
};

struct Segment {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Grows one tree level by level. Each sampled column keeps its sampled rows
// in sorted order, partitioned so that every frontier node owns one
// contiguous segment; splitting a node stably partitions that segment.
class TreeGrower {
 public:
  TreeGrower(const FeatureMatrix& x, const ColumnIndex& index, const GbdtConfig& cfg)
      : x_(x), index_(index), cfg_(cfg), node_of_(x.rows(), -1), gh_(x.rows()) {}

  Tree grow(std::span<const double> grad, std::span<const double> hess,
            std::span<const std::size_t> rows, std::span<const std::size_t> cols) {
    std::fill(node_of_.begin(), node_of_.end(), -1);
    for (std::size_t r = 0; r < gh_.size(); ++r) gh_[r] = {grad[r], hess[r]};

    std::vector<TreeNode> nodes(1);
    std::vector<GradSum> stats(1);
    for (std::size_t r : rows) {
      node_of_[r] = 0;
      stats[0].g += grad[r];
      stats[0].h += hess[r];
    }
    lists_.resize(cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
      auto& list = lists_[c];
      list.clear();
      for (const SortedEntry& e : index_.columns[cols[c]]) {
        if (node_of_[e.row] == 0) list.push_back(e);
      }
    }
    std::vector<Segment> segments{{0, rows.size()}};

    std::vector<int> frontier{0};
    for (int depth = 0; !frontier.empty(); ++depth) {
      if (depth == cfg_.max_depth) {
        for (int id : frontier) set_leaf(nodes, stats, id);
        break;
      }

      std::vector<int> next;
      std::vector<int> left_child(nodes.size(), -1);
      for (int id : frontier) {
        const auto best = best_split(cols, segments[static_cast<std::size_t>(id)],
                                     stats[static_cast<std::size_t>(id)]);
        if (!best.valid) {
          set_leaf(nodes, stats, id);
          continue;
        }
        const int left = static_cast<int>(nodes.size());
        TreeNode& n = nodes[static_cast<std::size_t>(id)];
        n.feature = best.feature;
        n.threshold = best.threshold;
        n.left = left;
        n.right = left + 1;
        nodes.resize(nodes.size() + 2);
        stats.resize(stats.size() + 2);
        segments.resize(segments.size() + 2);
        left_child[static_cast<std::size_t>(id)] = left;
        next.push_back(left);
        next.push_back(left + 1);
      }
      if (next.empty()) break;

      // Route rows to children; child sums accumulate in row order.
      std::vector<std::size_t> left_count(nodes.size(), 0);
      for (std::size_t r = 0; r < node_of_.size(); ++r) {
        const int id = node_of_[r];
        if (id < 0) continue;
        const int left = left_child[static_cast<std::size_t>(id)];
        if (left < 0) {
          node_of_[r] = -1;
          continue;
        }
        const TreeNode& n = nodes[static_cast<std::size_t>(id)];
        const bool go_left =
            static_cast<double>(x_(r, static_cast<std::size_t>(n.feature))) < n.threshold;
        const int child = go_left ? left : left + 1;
        node_of_[r] = child;
        left_count[static_cast<std::size_t>(id)] += go_left;
        stats[static_cast<std::size_t>(child)].g += grad[r];
        stats[static_cast<std::size_t>(child)].h += hess[r];
      }
      for (std::size_t id = 0; id < left_child.size(); ++id) {
        const int left = left_child[id];
        if (left < 0) continue;
        const Segment seg = segments[id];
        const std::size_t mid = seg.begin + left_count[id];
        segments[static_cast<std::size_t>(left)] = {seg.begin, mid};
        segments[static_cast<std::size_t>(left) + 1] = {mid, seg.end};
        for (auto& list : lists_) partition(list, seg, left, mid);
      }
      frontier = std::move(next);
    }
    return Tree(std::move(nodes));
  }

 private:
  void set_leaf(std::vector<TreeNode>& nodes, const std::vector<GradSum>& stats,
                int id) const {
    TreeNode& n = nodes[static_cast<std::size_t>(id)];
    n.feature = -1;
    n.weight = leaf_weight(stats[static_cast<std::size_t>(id)].g,
                           stats[static_cast<std::size_t>(id)].h, cfg_.reg_lambda);
  }

  // Stable partition of one segment: rows routed to `left` first.
  void partition(std::vector<SortedEntry>& list, Segment seg, int left, std::size_t mid) {
    std::size_t l = seg.begin;
    std::size_t r = mid;
    scratch_.resize(seg.end - seg.begin);
    for (std::size_t k = seg.begin; k < seg.end; ++k) {
      const SortedEntry e = list[k];
      if (node_of_[e.row] == left) {
        scratch_[l++ - seg.begin] = e;
      } else {
        scratch_[r++ - seg.begin] = e;
      }
    }
    std::copy(scratch_.begin(), scratch_.end(), list.begin() + static_cast<std::ptrdiff_t>(seg.begin));
  }

  // Features are visited in ascending order and thresholds ascend within a
  // feature, so keeping only strictly larger gains resolves ties to the lowest
  // (feature, threshold).
  BestSplit best_split(std::span<const std::size_t> cols, Segment seg,
                       const GradSum& total) const {
    BestSplit best;
    const double lambda = cfg_.reg_lambda;
    const double mcw = cfg_.min_child_weight;
    const double gamma = cfg_.gamma;
    const double parent_score = total.g * total.g / (total.h + lambda);
    if (seg.end - seg.begin < 2) return best;

    for (std::size_t c = 0; c < cols.size(); ++c) {
      const SortedEntry* entries = lists_[c].data();
      double gl = 0.0;
      double hl = 0.0;
      float last = entries[seg.begin].value;
      for (std::size_t k = seg.begin; k < seg.end; ++k) {
        const SortedEntry e = entries[k];
        if (e.value != last) {
          const double gr = total.g - gl;
          const double hr = total.h - hl;
          if (hl >= mcw && hr >= mcw) {
            const double gain =
                0.5 * (gl * gl / (hl + lambda) + gr * gr / (hr + lambda) - parent_score) -
                gamma;
            if (gain > 0.0 && (!best.valid || gain > best.gain)) {
              best.valid = true;
              best.gain = gain;
              best.feature = static_cast<int>(cols[c]);
              best.threshold = (static_cast<double>(last) + static_cast<double>(e.value)) / 2.0;
            }
          }
          last = e.value;
        }
        gl += gh_[e.row].g;
        hl += gh_[e.row].h;
      }
    }
    return best;
  }

  const FeatureMatrix& x_;
  const ColumnIndex& index_;
  const GbdtConfig& cfg_;
  std::vector<int> node_of_;
  std::vector<GradSum> gh_;
  std::vector<std::vector<SortedEntry>> lists_;
  std::vector<SortedEntry> scratch_;
};

}  // namespace

GbdtModel train(const FeatureMatrix& features, std::span<const std::uint8_t> labels,
                const GbdtConfig& config) {
  config.validate();
  check_training_input(features, labels);

  const auto canon = canonical_row_order(features, labels);
  const FeatureMatrix x = select_rows(features, canon);
  std::vector<double> y(canon.size());
  for (std::size_t i = 0; i < canon.size(); ++i) y[i] = labels[canon[i]];

  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  GbdtModel model{config, d, {}};
  model.trees.reserve(static_cast<std::size_t>(config.n_rounds));
  if (config.n_rounds == 0) return model;

  const ColumnIndex index(x);
  TreeGrower grower(x, index, config);
  Rng rng(config.seed);

  std::vector<double> margin(n, model.base_margin());
  std::vector<double> grad(n), hess(n);
  std::vector<std::size_t> all_rows(n), all_cols(d);
  std::iota(all_rows.begin(), all_rows.end(), std::size_t{0});
  std::iota(all_cols.begin(), all_cols.end(), std::size_t{0});

  for (int round = 0; round < config.n_rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(margin[i]);
      grad[i] = p - y[i];
      hess[i] = p * (1.0 - p);
    }
    const auto rows = config.subsample < 1.0
                          ? sample_without_replacement(
                                rng, n, rounded_count(n, config.subsample, 1, n))
                          : all_rows;
    const auto cols = config.colsample_bytree < 1.0
                          ? sample_without_replacement(
                                rng, d, rounded_count(d, config.colsample_bytree, 1, d))
                          : all_cols;
    Tree tree = grower.grow(grad, hess, rows, cols);
    for (std::size_t i = 0; i < n; ++i) {
      margin[i] += config.learning_rate * tree.predict(x.row(i));
    }
    model.trees.push_back(std::move(tree));
  }
  return model;
}

std::vector<double> predict_margin(const GbdtModel& model,
                                   const FeatureMatrix& features,
                                   std::optional<std::size_t> n_trees) {
  if (features.cols() != model.n_features) {
    throw ValidationError("model expects " + std::to_string(model.n_features) +
                          " features, got " + std::to_string(features.cols()));
  }
  const std::size_t used =
      std::min(n_trees.value_or(model.trees.size()), model.trees.size());
  const double lr = model.config.learning_rate;
  std::vector<double> out(features.rows(), model.base_margin());
  for (std::size_t i = 0; i < features.rows(); ++i) {
    auto row = features.row(i);
    for (std::size_t t = 0; t < used; ++t) out[i] += lr * model.trees[t].predict(row);
  }
  return out;
}

std::vector<double> predict_proba(const GbdtModel& model,
                                  const FeatureMatrix& features,
                                  std::optional<std::size_t> n_trees) {
  auto out = predict_margin(model, features, n_trees);
  for (double& v : out) v = sigmoid(v);
  return out;
}

}  // namespace ecgfuse
