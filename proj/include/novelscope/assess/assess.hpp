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
#include <string_view>
#include <vector>

#include "json.hpp"
#include "novelscope/graph/graph.hpp"
#include "novelscope/ingest/types.hpp"
#include "novelscope/llm/handle.hpp"
#include "novelscope/retrieval/related.hpp"

namespace novelscope::assess {

enum class Label { kNovel, kNotNovel };
enum class EvidencePolarity { kSupports, kContradicts };

std::string_view to_string(Label l);
std::string_view to_string(EvidencePolarity p);
Label parse_label(std::string_view s);
EvidencePolarity parse_evidence_polarity(std::string_view s);

// novel iff score >= 0.5
Label label_for(double score);

struct EvidenceItem {
  std::string related_id;
  std::string explanation;
  EvidencePolarity polarity = EvidencePolarity::kSupports;
};

struct NoveltyReport {
  std::string paper_id;
  double score = 0.0;
  std::vector<int> samples;  // 1 = novel, 0 = not novel
  Label label = Label::kNotNovel;
  std::string summary;
  std::vector<EvidenceItem> supporting;
  std::vector<EvidenceItem> contradictory;
  std::vector<std::string> keywords;
  bool abstract_only = false;
  nlohmann::json cost = nlohmann::json::object();
  std::vector<std::string> warnings;
};

inline constexpr const char* kNoRelatedMarker = "No related papers were found.";

// Related papers sorted for presentation: citations first, then by raw
// similarity descending, then id.
std::vector<retrieval::RelatedPaper> evidence_order(std::vector<retrieval::RelatedPaper> related);

// One "[id] title (source, class): summary" paragraph per paper in
// evidence_order, separated by blank lines; the no-related marker when empty.
std::string build_evidence_text(const std::vector<retrieval::RelatedPaper>& related);

struct ScoreResult {
  double score = 0.0;
  std::vector<int> samples;
  std::vector<std::string> warnings;
};

// Exact mean of 0/1 votes. kEmptyScores when `votes` is empty.
double mean_vote(const std::vector<int>& votes);

struct ScoringOptions {
  std::size_t k_samples = 5;
  double temperature = 1.0;
  std::string rubric;  // loaded from the assets when empty
  std::size_t parallelism = 5;
};

// k independent votes, sample i seeded with i. Samples whose output fails
// validation are dropped; kScoringFailed if none remain.
ScoreResult score_novelty(const std::string& graph_text, const std::string& evidence_text,
                          const llm::LlmHandle& llm, const ScoringOptions& options = {});

// 3 to 8 lowercase, de-duplicated phrases in model order. Model failures give
// an empty list and a warning.
std::vector<std::string> extract_keywords(const ingest::PaperRecord& paper, const llm::LlmHandle& llm,
                                          std::vector<std::string>* warnings = nullptr);

// Without a graph the report is flagged abstract-only and the model sees an
// empty structure section. Evidence naming ids outside `related` is dropped.
// Throws kScoringFailed or kReportFailed.
NoveltyReport generate_report(const ingest::PaperRecord& paper, const std::optional<graph::PaperGraph>& graph,
                              const std::vector<retrieval::RelatedPaper>& related,
                              const llm::LlmHandle& llm, const ScoringOptions& options = {});

std::string default_rubric();

void to_json(nlohmann::json& j, const EvidenceItem& e);
void from_json(const nlohmann::json& j, EvidenceItem& e);
void to_json(nlohmann::json& j, const NoveltyReport& r);
void from_json(const nlohmann::json& j, NoveltyReport& r);

}  // namespace novelscope::assess
