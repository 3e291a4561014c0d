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

#include "novelscope/common/assets.hpp"

#include <cstdlib>

#ifndef NOVELSCOPE_ASSET_DIR
#define NOVELSCOPE_ASSET_DIR "assets"
#endif

namespace novelscope {

std::string asset_dir() {
  if (const char* env = std::getenv("NOVELSCOPE_ASSETS"); env != nullptr && *env) {
    return env;
  }
  return NOVELSCOPE_ASSET_DIR;
}

std::string asset_path(const std::string& relative) {
  return asset_dir() + "/" + relative;
}

}  // namespace novelscope
