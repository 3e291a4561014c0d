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

#include <string>

namespace novelscope {

// Root of the prompts/, schemas/ and config/ asset tree. Resolved from the
// NOVELSCOPE_ASSETS environment variable, falling back to the source-tree
// directory baked in at build time.
std::string asset_dir();
std::string asset_path(const std::string& relative);

}  // namespace novelscope
