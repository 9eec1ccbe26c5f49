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
#include <ostream>
#include <string>
#include <vector>

#include "ecgfuse/embedding_store.hpp"
#include "ecgfuse/matrix.hpp"

namespace ecgfuse {

/// Exact t-SNE settings. Defaults are the customary ones for the algorithm.
struct TsneConfig {
  double perplexity = 30.0;
  int n_iter = 1000;
  double learning_rate = 200.0;
  double early_exaggeration_factor = 12.0;
  int early_exaggeration_iters = 250;
  double momentum_initial = 0.5;
  double momentum_final = 0.8;
  int momentum_switch_iter = 250;
  std::uint64_t seed = 0;

  /// Throws ConfigError; `n` is the number of points to embed.
  void validate(std::size_t n) const;
};

struct Embedding2D {
  Matrix<double> coords;  // n x 2
  std::vector<std::uint8_t> labels;
  std::vector<std::string> ids;
};

/// Exactly `per_class` rows of each label, chosen by a seeded Fisher-Yates
/// prefix per class; selected rows keep their original relative order.
EmbeddingSet subsample_balanced(const EmbeddingSet& set, std::size_t per_class,
                                std::uint64_t seed);

/// Row-conditional Gaussian affinities p_{j|i} after the bandwidth search,
/// with the achieved entropy (bits) and precision beta_i = 1 / (2 sigma_i^2)
/// of every row.
struct ConditionalAffinities {
  Matrix<double> p;
  std::vector<double> entropy_bits;
  std::vector<double> beta;
};

inline constexpr double kAffinityFloor = 1e-12;
inline constexpr double kEntropyTolerance = 1e-5;

ConditionalAffinities conditional_affinities(const FeatureMatrix& x, double perplexity);

/// Symmetrized joint affinities (P_cond + P_cond^T) / 2n, off-diagonal entries
/// floored at 1e-12 and renormalized to sum to one. Diagonal is zero.
Matrix<double> pairwise_affinities(const FeatureMatrix& x, double perplexity);

/// KL(P || Q) for low-dimensional coordinates `y` (n x 2).
double kl_divergence(const Matrix<double>& p, const Matrix<double>& y);

struct KlCheckpoint {
  int iteration = 0;
  double kl = 0.0;
};

struct TsneResult {
  Matrix<double> coords;
  /// KL against the un-exaggerated P at iteration 0, every 50 iterations and
  /// after the last one.
  std::vector<KlCheckpoint> kl_trace;
};

TsneResult tsne_embed(const FeatureMatrix& x, const TsneConfig& config);

/// Standalone SVG scatter: one circle per point, class colors, 5% margin
/// around the data bounding box, two-entry legend.
void export_scatter_svg(const Embedding2D& embedding, std::ostream& sink,
                        const std::string& title = "");
std::string scatter_svg(const Embedding2D& embedding, const std::string& title = "");

/// "id,label,x,y" with shortest round-trip decimal coordinates.
std::string coords_csv(const Embedding2D& embedding);

}  // namespace ecgfuse
