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

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "novelscope/common/clock.hpp"

namespace novelscope::ingest {

struct PaperRecord {
  std::string id;
  std::optional<std::string> arxiv_id;
  std::string title;
  std::string abstract;
  std::vector<std::string> authors;
  std::optional<int> year;
  std::optional<std::string> venue;
  std::optional<std::string> url;
  std::optional<long long> citation_count;

  bool operator==(const PaperRecord&) const = default;
};

// Throws Error(kBadRequest) naming the first violated invariant.
void check_invariants(const PaperRecord& record);

struct LatexBundle {
  std::string arxiv_id;
  std::string main_file;
  std::string main_source;
  std::vector<std::string> bib_sources;
  TimePoint fetched_at;
  std::vector<std::string> warnings;
};

struct RecommendationBatch {
  std::string seed_id;
  std::vector<PaperRecord> papers;
  int requested = 0;
};

void to_json(nlohmann::json& j, const PaperRecord& r);
void from_json(const nlohmann::json& j, PaperRecord& r);

}  // namespace novelscope::ingest
