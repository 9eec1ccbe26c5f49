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
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ecgfuse/matrix.hpp"

namespace ecgfuse {

/// Record ids, binary labels (1 = ACS) and the n x d embedding matrix produced
/// by one model, or by fusing two models.
///
/// Construct through `EmbeddingSet::make` (validating) or the readers; a
/// successfully constructed set always satisfies:
///   * ids.size() == labels.size() == features.rows() >= 1
///   * features.cols() >= 1
///   * labels in {0, 1}, features finite, ids unique.
class EmbeddingSet {
 public:
  EmbeddingSet() = default;

  static EmbeddingSet make(std::vector<std::string> ids,
                           std::vector<std::uint8_t> labels,
                           FeatureMatrix features, std::string source_tag);

  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::vector<std::uint8_t>& labels() const noexcept { return labels_; }
  const FeatureMatrix& features() const noexcept { return features_; }
  const std::string& source_tag() const noexcept { return source_tag_; }

  std::size_t size() const noexcept { return ids_.size(); }
  std::size_t dim() const noexcept { return features_.cols(); }

  std::size_t count_label(std::uint8_t label) const;

  /// Rows at `indices` in that order, same tag.
  EmbeddingSet subset(std::span<const std::size_t> indices) const;

  /// Same ids/labels/tag with replaced features (validated).
  EmbeddingSet with_features(FeatureMatrix features) const;

  friend bool operator==(const EmbeddingSet&, const EmbeddingSet&) = default;

 private:
  std::vector<std::string> ids_;
  std::vector<std::uint8_t> labels_;
  FeatureMatrix features_;
  std::string source_tag_;
};

/// Throws ValidationError describing the first violated invariant.
void validate(const std::vector<std::string>& ids,
              const std::vector<std::uint8_t>& labels,
              const FeatureMatrix& features);

// EBF v1: little-endian binary interchange.
//   "ECGE" | u8 version=1 | u32 n | u32 d | u16 len + tag
//   | n x (u16 len + id) | n label bytes | n*d binary32 row-major
inline constexpr std::uint8_t kEbfMagic[4] = {0x45, 0x43, 0x47, 0x45};
inline constexpr std::uint8_t kEbfVersion = 1;

std::vector<std::uint8_t> encode_ebf(const EmbeddingSet& set);
EmbeddingSet decode_ebf(std::span<const std::uint8_t> bytes);

void write_ebf(const EmbeddingSet& set, std::ostream& sink);
EmbeddingSet read_ebf(std::istream& source);

void write_ebf_file(const EmbeddingSet& set, const std::string& path);
EmbeddingSet read_ebf_file(const std::string& path);

/// Fixture format: header "id,label,f0,...,f{d-1}", then one row per record.
/// No quoting or escaping.
EmbeddingSet read_csv(std::istream& source, std::string source_tag = "csv");
EmbeddingSet read_csv_file(const std::string& path);

/// Restricts both sets to their shared ids, sorted lexicographically.
/// Throws AlignmentError on an empty intersection, LabelConflictError when a
/// shared id carries different labels.
std::pair<EmbeddingSet, EmbeddingSet> align(const EmbeddingSet& a,
                                            const EmbeddingSet& b);

/// Same ids in the same order and the same labels.
bool same_records(const EmbeddingSet& a, const EmbeddingSet& b);

}  // namespace ecgfuse
