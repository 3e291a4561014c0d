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

#include "novelscope/ingest/types.hpp"

#include "novelscope/common/error.hpp"

namespace novelscope::ingest {

namespace {

template <typename T>
nlohmann::json opt(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <typename T>
void read_opt(const nlohmann::json& j, const char* key, std::optional<T>& out) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    out.reset();
  } else {
    out = it->get<T>();
  }
}

}  // namespace

void check_invariants(const PaperRecord& record) {
  if (record.title.empty()) {
    throw Error(ErrorCode::kBadRequest, "paper " + record.id + " has an empty title");
  }
  if (record.year && (*record.year < 1900 || *record.year > 2100)) {
    throw Error(ErrorCode::kBadRequest,
                "paper " + record.id + " has year out of range: " +
                    std::to_string(*record.year));
  }
}

void to_json(nlohmann::json& j, const PaperRecord& r) {
  j = nlohmann::json{{"id", r.id},
                     {"arxiv_id", opt(r.arxiv_id)},
                     {"title", r.title},
                     {"abstract", r.abstract},
                     {"authors", r.authors},
                     {"year", opt(r.year)},
                     {"venue", opt(r.venue)},
                     {"url", opt(r.url)},
                     {"citation_count", opt(r.citation_count)}};
}

void from_json(const nlohmann::json& j, PaperRecord& r) {
  r.id = j.at("id").get<std::string>();
  read_opt(j, "arxiv_id", r.arxiv_id);
  r.title = j.at("title").get<std::string>();
  r.abstract = j.value("abstract", std::string{});
  r.authors = j.value("authors", std::vector<std::string>{});
  read_opt(j, "year", r.year);
  read_opt(j, "venue", r.venue);
  read_opt(j, "url", r.url);
  read_opt(j, "citation_count", r.citation_count);
}

}  // namespace novelscope::ingest
