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

#include "novelscope/common/cancel.hpp"

#include "novelscope/common/error.hpp"

namespace novelscope {

void CancellationToken::throw_if_cancelled() const {
  if (cancelled()) throw Error(ErrorCode::kCancelled, "operation cancelled");
}

}  // namespace novelscope
