// Copyright 2026 The Novelscope Authors.
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

#include "novelscope/common/error.hpp"

namespace novelscope {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBadRequest: return "BadRequest";
    case ErrorCode::kEmptyQuery: return "EmptyQuery";
    case ErrorCode::kBadId: return "BadId";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kUpstreamUnavailable: return "UpstreamUnavailable";
    case ErrorCode::kRateLimited: return "RateLimited";
    case ErrorCode::kSourceUnavailable: return "SourceUnavailable";
    case ErrorCode::kCorruptEntry: return "CorruptEntry";
    case ErrorCode::kNoBibliography: return "NoBibliography";
    case ErrorCode::kExtractionFailed: return "ExtractionFailed";
    case ErrorCode::kCyclicGraph: return "CyclicGraph";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::kSchemaFailure: return "SchemaFailure";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kUnknownModel: return "UnknownModel";
    case ErrorCode::kEmptyLabels: return "EmptyLabels";
    case ErrorCode::kScoringFailed: return "ScoringFailed";
    case ErrorCode::kReportFailed: return "ReportFailed";
    case ErrorCode::kEmptyScores: return "EmptyScores";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kDisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::kNoJudgments: return "NoJudgments";
    case ErrorCode::kCancelled: return "Cancelled";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

bool is_transient(ErrorCode code) {
  return code == ErrorCode::kUpstreamUnavailable ||
         code == ErrorCode::kRateLimited ||
         code == ErrorCode::kProviderUnavailable ||
         code == ErrorCode::kTimeout;
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

}  // namespace novelscope
