// Copyright 2026 The repscope Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace repscope {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violates a documented precondition or type invariant.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Tensor or layer shapes do not compose.
class ShapeError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Experiment configuration is malformed or inconsistent (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Dataset or file I/O problem (CLI exit code 3).
class DataError : public Error {
 public:
  using Error::Error;
};

enum class ParseErrorKind {
  io,
  bad_magic,
  bad_version,
  unsupported_dtype,
  truncated,
  length_mismatch,
  bad_size,
  empty,
  bad_value,
};

inline const char* to_string(ParseErrorKind kind) noexcept;

/// Malformed on-disk file. Each kind is distinguishable by `kind()`.
class ParseError : public DataError {
 public:
  ParseError(ParseErrorKind kind, const std::string& what)
      : DataError(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ParseErrorKind kind() const noexcept { return kind_; }

 private:
  ParseErrorKind kind_;
};

/// Training produced a non-finite loss (CLI exit code 4).
class DivergenceError : public Error {
 public:
  DivergenceError(std::size_t epoch, const std::string& what)
      : Error(what), epoch_(epoch) {}

  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

/// A metric is undefined on the given input (all-zero rows, coincident
/// centroids, fewer than two clusters, ...).
class AnalysisError : public Error {
 public:
  using Error::Error;
};

inline const char* to_string(ParseErrorKind kind) noexcept {
  switch (kind) {
    case ParseErrorKind::io: return "io error";
    case ParseErrorKind::bad_magic: return "bad magic";
    case ParseErrorKind::bad_version: return "bad version";
    case ParseErrorKind::unsupported_dtype: return "unsupported dtype";
    case ParseErrorKind::truncated: return "truncated payload";
    case ParseErrorKind::length_mismatch: return "length mismatch";
    case ParseErrorKind::bad_size: return "bad size";
    case ParseErrorKind::empty: return "empty file";
    case ParseErrorKind::bad_value: return "bad value";
  }
  return "unknown";
}

}  // namespace repscope
