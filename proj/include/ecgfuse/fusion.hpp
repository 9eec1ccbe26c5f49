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

#include <vector>

#include "ecgfuse/embedding_store.hpp"
#include "ecgfuse/matrix.hpp"

namespace ecgfuse {

/// Per-feature min/max taken from training rows only.
struct MinMaxScaler {
  std::vector<double> mins;
  std::vector<double> maxs;

  std::size_t dim() const noexcept { return mins.size(); }
  friend bool operator==(const MinMaxScaler&, const MinMaxScaler&) = default;
};

MinMaxScaler fit_minmax(const FeatureMatrix& train_features);

/// (x - min) / (max - min) per column; zero-range columns map to 0. Values
/// outside the fitted range are not clamped.
FeatureMatrix apply_minmax(const MinMaxScaler& scaler,
                           const FeatureMatrix& features);

/// Row-wise concatenation [a | b]. Both sets must describe the same records in
/// the same order; the result is tagged "fused".
EmbeddingSet fuse(const EmbeddingSet& a, const EmbeddingSet& b);

}  // namespace ecgfuse
