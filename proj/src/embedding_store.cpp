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

#include "ecgfuse/embedding_store.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "ecgfuse/io_util.hpp"

namespace ecgfuse {

void validate(const std::vector<std::string>& ids,
              const std::vector<std::uint8_t>& labels,
              const FeatureMatrix& features) {
  const std::size_t n = ids.size();
  if (n == 0) throw ValidationError("embedding set must have at least one row");
  if (labels.size() != n || features.rows() != n) {
    throw ValidationError("ids, labels and feature rows differ in length (" +
                          std::to_string(n) + ", " +
                          std::to_string(labels.size()) + ", " +
                          std::to_string(features.rows()) + ")");
  }
  if (features.cols() == 0) {
    throw ValidationError("embedding dimension must be at least 1");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] > 1) {
      throw ValidationError("row " + std::to_string(i) + ": label " +
                            std::to_string(labels[i]) + " is not 0 or 1");
    }
    auto row = features.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!std::isfinite(row[j])) {
        throw ValidationError("non-finite feature at row " +
                              std::to_string(i) + ", column " +
                              std::to_string(j));
      }
    }
  }
  std::unordered_set<std::string_view> seen;
  seen.reserve(n);
  for (const auto& id : ids) {
    if (!seen.insert(id).second) {
      throw ValidationError("duplicate id \"" + id + "\"");
    }
  }
}

EmbeddingSet EmbeddingSet::make(std::vector<std::string> ids,
                                std::vector<std::uint8_t> labels,
                                FeatureMatrix features,
                                std::string source_tag) {
  validate(ids, labels, features);
  EmbeddingSet s;
  s.ids_ = std::move(ids);
  s.labels_ = std::move(labels);
  s.features_ = std::move(features);
  s.source_tag_ = std::move(source_tag);
  return s;
}

std::size_t EmbeddingSet::count_label(std::uint8_t label) const {
  return static_cast<std::size_t>(
      std::count(labels_.begin(), labels_.end(), label));
}

EmbeddingSet EmbeddingSet::subset(std::span<const std::size_t> indices) const {
  std::vector<std::string> ids;
  std::vector<std::uint8_t> labels;
  ids.reserve(indices.size());
  labels.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= size()) throw ValidationError("subset index out of range");
    ids.push_back(ids_[i]);
    labels.push_back(labels_[i]);
  }
  return make(std::move(ids), std::move(labels),
              select_rows(features_, indices), source_tag_);
}

EmbeddingSet EmbeddingSet::with_features(FeatureMatrix features) const {
  return make(ids_, labels_, std::move(features), source_tag_);
}

// ---------------------------------------------------------------------------
// EBF encoding

namespace {

class ByteWriter {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) {
    for (int k = 0; k < 2; ++k) out_.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  }
  void u32(std::uint32_t v) {
    for (int k = 0; k < 4; ++k) out_.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void bytes(std::string_view s) { out_.insert(out_.end(), s.begin(), s.end()); }

  void short_string(std::string_view s, const char* what) {
    if (s.size() > 0xFFFF) {
      throw ValidationError(std::string(what) + " exceeds 65535 bytes");
    }
    u16(static_cast<std::uint16_t>(s.size()));
    bytes(s);
  }

  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  void require(unsigned __int128 count) const {
    if (count > remaining()) {
      const unsigned __int128 expected = count + pos_;
      const auto capped =
          expected > UINT64_MAX ? UINT64_MAX : static_cast<std::uint64_t>(expected);
      throw TruncationError(capped, bytes_.size());
    }
  }

  std::uint8_t u8() {
    require(1);
    return bytes_[pos_++];
  }
  std::uint16_t u16() {
    require(2);
    std::uint16_t v = 0;
    for (int k = 0; k < 2; ++k) v |= static_cast<std::uint16_t>(bytes_[pos_++]) << (8 * k);
    return v;
  }
  std::uint32_t u32() {
    require(4);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * k);
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  std::string short_string() {
    const std::uint16_t len = u16();
    require(len);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), len);
    pos_ += len;
    return s;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_ebf(const EmbeddingSet& set) {
  validate(set.ids(), set.labels(), set.features());
  if (set.size() > UINT32_MAX || set.dim() > UINT32_MAX) {
    throw ValidationError("embedding set too large for EBF v1");
  }
  ByteWriter w;
  for (auto b : kEbfMagic) w.u8(b);
  w.u8(kEbfVersion);
  w.u32(static_cast<std::uint32_t>(set.size()));
  w.u32(static_cast<std::uint32_t>(set.dim()));
  w.short_string(set.source_tag(), "source tag");
  for (const auto& id : set.ids()) w.short_string(id, "record id");
  for (auto label : set.labels()) w.u8(label);
  for (float v : set.features().data()) w.f32(v);
  return w.take();
}

EmbeddingSet decode_ebf(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.require(4);
  for (auto expected : kEbfMagic) {
    if (r.u8() != expected) throw FormatError("bad EBF magic (expected \"ECGE\")");
  }
  const std::uint8_t version = r.u8();
  if (version != kEbfVersion) throw UnsupportedVersionError(version);
  const std::uint32_t n = r.u32();
  const std::uint32_t d = r.u32();
  if (n == 0) throw ValidationError("EBF header declares zero rows");
  if (d == 0) throw ValidationError("EBF header declares zero columns");
  std::string tag = r.short_string();

  // Lower bound on what is left: n id prefixes, n labels, n*d floats.
  const unsigned __int128 payload =
      static_cast<unsigned __int128>(n) * d * 4 + static_cast<unsigned __int128>(n);
  r.require(payload + static_cast<unsigned __int128>(n) * 2);

  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) ids.push_back(r.short_string());
  r.require(payload);

  std::vector<std::uint8_t> labels(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    labels[i] = r.u8();
    if (labels[i] > 1) {
      throw ValidationError("EBF row " + std::to_string(i) + ": label byte " +
                            std::to_string(labels[i]) + " is not 0 or 1");
    }
  }
  FeatureMatrix features(n, d);
  for (float& v : features.data()) v = r.f32();
  if (r.remaining() != 0) {
    throw FormatError("EBF payload has " + std::to_string(r.remaining()) +
                      " trailing bytes at offset " + std::to_string(r.offset()));
  }
  return EmbeddingSet::make(std::move(ids), std::move(labels),
                            std::move(features), std::move(tag));
}

void write_ebf(const EmbeddingSet& set, std::ostream& sink) {
  write_all(sink, encode_ebf(set));
}

EmbeddingSet read_ebf(std::istream& source) {
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(source)),
                                  std::istreambuf_iterator<char>());
  if (source.bad()) throw IoError("failed reading EBF source");
  return decode_ebf(bytes);
}

void write_ebf_file(const EmbeddingSet& set, const std::string& path) {
  write_file_atomic(path, encode_ebf(set));
}

EmbeddingSet read_ebf_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return read_ebf(in);
}

// ---------------------------------------------------------------------------
// CSV fixtures

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

[[noreturn]] void csv_error(std::size_t line_no, const std::string& what) {
  throw ValidationError("line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

EmbeddingSet read_csv(std::istream& source, std::string source_tag) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(source, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!next_line()) throw ValidationError("line 1: missing header");
  const auto header = split_commas(line);
  if (header.size() < 3 || header[0] != "id" || header[1] != "label") {
    csv_error(1, "header must be id,label,f0,...,f{d-1}");
  }
  const std::size_t d = header.size() - 2;
  for (std::size_t j = 0; j < d; ++j) {
    if (header[j + 2] != "f" + std::to_string(j)) {
      csv_error(1, "expected column name f" + std::to_string(j) + ", got \"" +
                       std::string(header[j + 2]) + "\"");
    }
  }

  std::vector<std::string> ids;
  std::vector<std::uint8_t> labels;
  std::vector<float> values;
  std::unordered_set<std::string> seen;
  while (next_line()) {
    if (line.empty()) continue;
    const auto cells = split_commas(line);
    if (cells.size() != d + 2) {
      csv_error(line_no, "expected " + std::to_string(d + 2) + " columns, got " +
                             std::to_string(cells.size()));
    }
    if (cells[1] != "0" && cells[1] != "1") {
      csv_error(line_no, "label \"" + std::string(cells[1]) + "\" is not 0 or 1");
    }
    std::string id(cells[0]);
    if (!seen.insert(id).second) csv_error(line_no, "duplicate id \"" + id + "\"");
    ids.push_back(std::move(id));
    labels.push_back(cells[1] == "1" ? 1 : 0);
    for (std::size_t j = 0; j < d; ++j) {
      const auto cell = cells[j + 2];
      float v = 0.0f;
      const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || end != cell.data() + cell.size() || cell.empty()) {
        csv_error(line_no, "cannot parse \"" + std::string(cell) + "\" as a number");
      }
      if (!std::isfinite(v)) {
        csv_error(line_no, "non-finite value in column f" + std::to_string(j));
      }
      values.push_back(v);
    }
  }
  if (ids.empty()) throw ValidationError("CSV contains no data rows");
  const std::size_t n = ids.size();
  return EmbeddingSet::make(std::move(ids), std::move(labels),
                            FeatureMatrix(n, d, std::move(values)),
                            std::move(source_tag));
}

EmbeddingSet read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_csv(in);
}

// ---------------------------------------------------------------------------

std::pair<EmbeddingSet, EmbeddingSet> align(const EmbeddingSet& a,
                                            const EmbeddingSet& b) {
  std::unordered_map<std::string_view, std::size_t> in_b;
  in_b.reserve(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) in_b.emplace(b.ids()[i], i);

  std::vector<std::pair<std::size_t, std::size_t>> shared;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (auto it = in_b.find(a.ids()[i]); it != in_b.end()) {
      shared.emplace_back(i, it->second);
    }
  }
  if (shared.empty()) throw AlignmentError("embedding sets share no ids");
  std::sort(shared.begin(), shared.end(), [&](const auto& x, const auto& y) {
    return a.ids()[x.first] < a.ids()[y.first];
  });

  std::vector<std::size_t> rows_a, rows_b;
  rows_a.reserve(shared.size());
  rows_b.reserve(shared.size());
  for (const auto& [ia, ib] : shared) {
    if (a.labels()[ia] != b.labels()[ib]) throw LabelConflictError(a.ids()[ia]);
    rows_a.push_back(ia);
    rows_b.push_back(ib);
  }
  return {a.subset(rows_a), b.subset(rows_b)};
}

bool same_records(const EmbeddingSet& a, const EmbeddingSet& b) {
  return a.ids() == b.ids() && a.labels() == b.labels();
}

}  // namespace ecgfuse
