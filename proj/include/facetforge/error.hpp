// Copyright 2026 The FacetForge Authors
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

#include <stdexcept>
#include <string>
#include <string_view>

namespace facetforge {

// Machine-readable failure categories shared by every module. The gateway
// maps these onto HTTP status codes and `error.code` strings.
enum class ErrorCode {
  kMalformedTerm,
  kEmptyQuery,
  kIoFailure,
  kParseError,
  kEmptyLabel,
  kDuplicatePortlet,
  kCycle,
  kUnknownPortlet,
  kDimensionMismatch,
  kDegenerateTraining,
  kInvalidConfig,
  kUnmatchedTag,
  kAlreadyZoomed,
  kEmptyZoomStack,
  kUnreachable,
  kUnknownNode,
  kBadWeights,
  kEmptyMatrix,
  kBadScore,
  kNotFound,
  kBadRequest,
  kPortInUse,
  kStorageUnavailable,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the N-Triples reader; carries the 1-based offending line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(ErrorCode::kParseError,
              "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace facetforge
