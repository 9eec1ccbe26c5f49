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

#include "ecgfuse/fusion.hpp"

#include <algorithm>
#include <cmath>

namespace ecgfuse {

MinMaxScaler fit_minmax(const FeatureMatrix& train_features) {
  if (train_features.rows() == 0 || train_features.cols() == 0) {
    throw ValidationError("cannot fit a min-max scaler on an empty matrix");
  }
  const std::size_t d = train_features.cols();
  MinMaxScaler s{std::vector<double>(d), std::vector<double>(d)};
  auto first = train_features.row(0);
  std::copy(first.begin(), first.end(), s.mins.begin());
  std::copy(first.begin(), first.end(), s.maxs.begin());
  for (std::size_t i = 0; i < train_features.rows(); ++i) {
    auto row = train_features.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      if (!std::isfinite(row[j])) {
        throw ValidationError("non-finite training value at row " +
                              std::to_string(i) + ", column " + std::to_string(j));
      }
      s.mins[j] = std::min<double>(s.mins[j], row[j]);
      s.maxs[j] = std::max<double>(s.maxs[j], row[j]);
    }
  }
  return s;
}

FeatureMatrix apply_minmax(const MinMaxScaler& scaler,
                           const FeatureMatrix& features) {
  if (scaler.mins.size() != scaler.maxs.size()) {
    throw ValidationError("scaler mins/maxs differ in length");
  }
  if (features.cols() != scaler.dim()) {
    throw ValidationError("scaler dimension " + std::to_string(scaler.dim()) +
                          " does not match feature dimension " +
                          std::to_string(features.cols()));
  }
  FeatureMatrix out(features.rows(), features.cols());
  for (std::size_t i = 0; i < features.rows(); ++i) {
    auto src = features.row(i);
    auto dst = out.row(i);
    for (std::size_t j = 0; j < src.size(); ++j) {
      const double range = scaler.maxs[j] - scaler.mins[j];
      dst[j] = range > 0.0
                   ? static_cast<float>((src[j] - scaler.mins[j]) / range)
                   : 0.0f;
    }
  }
  return out;
}

EmbeddingSet fuse(const EmbeddingSet& a, const EmbeddingSet& b) {
  if (a.ids() != b.ids()) {
    throw AlignmentError("cannot fuse: record ids differ (align the sets first)");
  }
  if (a.labels() != b.labels()) {
    throw AlignmentError("cannot fuse: labels differ");
  }
  const std::size_t da = a.dim();
  const std::size_t db = b.dim();
  FeatureMatrix out(a.size(), da + db);
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto dst = out.row(i);
    std::ranges::copy(a.features().row(i), dst.begin());
    std::ranges::copy(b.features().row(i), dst.begin() + static_cast<std::ptrdiff_t>(da));
  }
  return EmbeddingSet::make(a.ids(), a.labels(), std::move(out), "fused");
}

}  // namespace ecgfuse
