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

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "novelscope/server/pipeline.hpp"

namespace novelscope::server {

// SHA-256 over the canonical JSON of every request field, the ablation flags
// and the pipeline version.
std::string evaluation_cache_key(const EvaluateRequest& r, const std::string& pipeline_version,
                                 const Ablation& ablation = {});
std::string abstract_cache_key(const AbstractRequest& r, const std::string& pipeline_version);

// Directory of immutable "<key>.json" result files. The first write for a
// key wins; later writes are ignored. Unreadable files read as misses.
class ResultStore {
 public:
  explicit ResultStore(std::filesystem::path dir);

  std::optional<nlohmann::json> get(const std::string& key) const;
  // Returns false when the key already existed.
  bool put(const std::string& key, const nlohmann::json& value);
  bool contains(const std::string& key) const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::mutex write_mu_;
};

struct LibraryEntry {
  std::string id;  // file stem
  std::string title;
  std::string abstract;
  std::string venue;
  std::optional<int> year;
  double score = 0.0;
  std::string label;
};

nlohmann::json to_json(const LibraryEntry& e);

// Summaries of every readable result file in `dir`, sorted by title then id.
// Files that do not parse are skipped and named in `warnings`. A missing
// directory is an empty library.
std::vector<LibraryEntry> list_library(const std::filesystem::path& dir,
                                       std::vector<std::string>* warnings = nullptr);

// Full stored result for a library id; nullopt when absent or unreadable.
std::optional<nlohmann::json> load_library_item(const std::filesystem::path& dir, const std::string& id);

}  // namespace novelscope::server
