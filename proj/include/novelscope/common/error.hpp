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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace novelscope {

// Every failure raised by the library carries one of these codes. The HTTP
// layer maps them to status codes; the pipeline maps them to terminal events.
enum class ErrorCode {
  kBadRequest,
  kEmptyQuery,
  kBadId,
  kNotFound,
  kUpstreamUnavailable,
  kRateLimited,
  kSourceUnavailable,
  kCorruptEntry,
  kNoBibliography,
  kExtractionFailed,
  kCyclicGraph,
  kDimensionMismatch,
  kProviderUnavailable,
  kSchemaFailure,
  kTimeout,
  kUnknownModel,
  kEmptyLabels,
  kScoringFailed,
  kReportFailed,
  kEmptyScores,
  kOutOfRange,
  kLengthMismatch,
  kDisconnectedGraph,
  kNoJudgments,
  kCancelled,
  kInternal,
};

std::string_view to_string(ErrorCode code);

// Transient errors may be retried by transport-level retry loops.
bool is_transient(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace novelscope
