// Copyright 2026 The flminer Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
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

namespace flminer {

/// Error codes shared across modules. The CLI prints the code name verbatim
/// in its machine-parsable error line.
enum class ErrorCode {
  kUnknownFeature,
  kAllMissing,
  kMalformedHeader,
  kBadValue,
  kInvalidSchema,
  kInvalidTree,
  kInconsistentEvaluation,
  kMismatchedTree,
  kProviderFailure,
  kParseError,
  kUnboundVariable,
  kUnknownVariable,
  kTooManyVariables,
  kInvalidConfig,
  kDegenerateDataset,
  kIndexOutOfRange,
  kEmptyCompletion,
  kAuthFailure,
  kRateLimited,
  kMalformedResponse,
  kCorruptEntry,
  kInvalidTransition,
  kIoError,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Formula / CSV parse failure with the byte offset (or row) it happened at.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, std::string expected)
      : Error(ErrorCode::kParseError, "parse error at " + std::to_string(position) +
                                          ": expected " + expected),
        position_(position),
        expected_(std::move(expected)) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

}  // namespace flminer
