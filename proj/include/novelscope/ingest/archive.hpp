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

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace novelscope::ingest {

// Inflates a gzip stream. Throws Error(kSourceUnavailable) on corrupt input.
std::string gunzip(std::string_view data);

bool is_gzip(std::string_view data);
bool is_tar(std::string_view data);

// Regular files of a ustar/GNU tar archive, keyed by normalized path.
std::map<std::string, std::string> untar(std::string_view data);

// Picks the main .tex file: the one containing an uncommented
// \begin{document}; ties go to the largest file, then the smaller path.
// Returns an empty string when no file qualifies.
std::string resolve_main_file(const std::map<std::string, std::string>& files);

struct FlattenResult {
  std::string source;
  std::vector<std::string> warnings;
};

// Inlines \input{...}, \include{...} and \subfile{...} recursively. Paths are
// resolved against the archive root; a missing ".tex" suffix is added.
// Directives inside comments are left alone.
FlattenResult flatten_includes(const std::string& main_path,
                               const std::map<std::string, std::string>& files);

}  // namespace novelscope::ingest
