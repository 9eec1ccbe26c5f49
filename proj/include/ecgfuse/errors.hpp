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

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ecgfuse {

/// Base of every error raised by the library. Each subclass corresponds to one
/// failure category so callers (and the CLI exit-code mapping) can dispatch on
/// type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data violates a documented invariant (bad label, NaN, ragged row...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// EBF magic bytes do not match.
class FormatError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class UnsupportedVersionError : public ValidationError {
 public:
  explicit UnsupportedVersionError(unsigned version)
      : ValidationError("unsupported EBF version " + std::to_string(version) +
                        " (expected 1)"),
        version_(version) {}
  unsigned version() const noexcept { return version_; }

 private:
  unsigned version_;
};

/// Payload ended before the header-declared length.
class TruncationError : public ValidationError {
 public:
  TruncationError(std::uint64_t expected, std::uint64_t actual)
      : ValidationError("truncated input: expected at least " +
                        std::to_string(expected) + " bytes, got " +
                        std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}
  std::uint64_t expected() const noexcept { return expected_; }
  std::uint64_t actual() const noexcept { return actual_; }

 private:
  std::uint64_t expected_;
  std::uint64_t actual_;
};

/// Two sets that must describe the same records do not.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

class LabelConflictError : public AlignmentError {
 public:
  explicit LabelConflictError(std::string id)
      : AlignmentError("conflicting labels for id \"" + id + "\""),
        id_(std::move(id)) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

/// A configuration value is outside its documented domain.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// AUROC/AUCPR requested on single-class input.
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

class StratificationError : public Error {
 public:
  using Error::Error;
};

/// Bandwidth search for one row of the t-SNE affinities failed to bracket the
/// target perplexity.
class DegenerateAffinityError : public Error {
 public:
  DegenerateAffinityError(std::size_t row, const std::string& detail)
      : Error("degenerate affinities at row " + std::to_string(row) + ": " +
              detail),
        row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class IoError : public Error {
 public:
  IoError(const std::string& what, std::uint64_t offset)
      : Error(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  explicit IoError(const std::string& what) : Error(what), offset_(0) {}
  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

}  // namespace ecgfuse
