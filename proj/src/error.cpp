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

#include "flminer/error.hpp"

namespace flminer {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kUnknownFeature: return "UnknownFeature";
    case ErrorCode::kAllMissing: return "AllMissing";
    case ErrorCode::kMalformedHeader: return "MalformedHeader";
    case ErrorCode::kBadValue: return "BadValue";
    case ErrorCode::kInvalidSchema: return "InvalidSchema";
    case ErrorCode::kInvalidTree: return "InvalidTree";
    case ErrorCode::kInconsistentEvaluation: return "InconsistentEvaluation";
    case ErrorCode::kMismatchedTree: return "MismatchedTree";
    case ErrorCode::kProviderFailure: return "ProviderFailure";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kUnboundVariable: return "UnboundVariable";
    case ErrorCode::kUnknownVariable: return "UnknownVariable";
    case ErrorCode::kTooManyVariables: return "TooManyVariables";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kDegenerateDataset: return "DegenerateDataset";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kEmptyCompletion: return "EmptyCompletion";
    case ErrorCode::kAuthFailure: return "AuthFailure";
    case ErrorCode::kRateLimited: return "RateLimited";
    case ErrorCode::kMalformedResponse: return "MalformedResponse";
    case ErrorCode::kCorruptEntry: return "CorruptEntry";
    case ErrorCode::kInvalidTransition: return "InvalidTransition";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace flminer
