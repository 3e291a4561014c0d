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

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "novelscope/ingest/types.hpp"
#include "novelscope/ingest/upstream.hpp"

namespace novelscope::ingest {

struct ScholarEndpoints {
  std::string graph = "https://api.semanticscholar.org/graph/v1";
  std::string recommendations = "https://api.semanticscholar.org/recommendations/v1";
  // Sent as x-api-key when non-empty (read from S2_API_KEY by the server).
  std::string api_key;
};

struct PaperWithReferences {
  PaperRecord paper;
  std::vector<PaperRecord> cited;
};

// Maps a Semantic Scholar paper object to a record; returns nullopt when the
// object lacks a paperId or a title.
std::optional<PaperRecord> record_from_scholar(const nlohmann::json& paper);

// Identifier as understood by the graph API: arXiv ids get an "arXiv:" prefix,
// everything else passes through.
std::string scholar_identifier(std::string_view id);

class ScholarClient {
 public:
  explicit ScholarClient(std::shared_ptr<UpstreamClient> upstream, ScholarEndpoints endpoints = {});

  PaperWithReferences fetch_metadata(std::string_view id) const;

  // At most n (1..100) unique records; the seed is never included.
  RecommendationBatch fetch_recommendations(std::string_view seed_paper_id, int n) const;

  // Keyword search; used to gather candidates for drafts without an id.
  RecommendationBatch search(std::string_view query, int n, std::string_view seed_id) const;

  static const char* fields();

 private:
  HttpRequest request(std::string url) const;

  std::shared_ptr<UpstreamClient> upstream_;
  ScholarEndpoints endpoints_;
};

}  // namespace novelscope::ingest
