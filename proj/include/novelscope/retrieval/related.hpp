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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "novelscope/ingest/types.hpp"
#include "novelscope/llm/handle.hpp"
#include "novelscope/retrieval/embedding.hpp"
#include "novelscope/texparse/texparse.hpp"

namespace novelscope::retrieval {

enum class Source { kCitation, kSemantic };
enum class RelationClass { kSupporting, kContrasting, kBackground, kTarget };
enum class Polarity { kPositive, kNegative };

std::string_view to_string(Source s);
std::string_view to_string(RelationClass c);
std::string_view to_string(Polarity p);
Source parse_source(std::string_view s);
RelationClass parse_relation_class(std::string_view s);
Polarity parse_polarity(std::string_view s);

struct ContextPolarity {
  texparse::CitationContext context;
  Polarity polarity = Polarity::kPositive;
};

struct RelatedPaper {
  ingest::PaperRecord record;
  Source source = Source::kCitation;
  RelationClass relation = RelationClass::kSupporting;
  double similarity = 0.0;      // clamped to [0, 1]
  double raw_similarity = 0.0;  // cosine before clamping
  std::string summary;
  std::vector<ContextPolarity> contexts;  // citation source only
  std::string matched_text;               // semantic source only
};

// Throws kBadRequest naming the first broken source/class/contexts rule.
void check_invariants(const RelatedPaper& p);

struct TermDecomposition {
  std::string background;
  std::string target;
};

struct ScoredPaper {
  ingest::PaperRecord record;
  double similarity = 0.0;  // raw cosine
};

// Text embedded for a paper when comparing whole papers: "title\n\nabstract".
std::string paper_text(const ingest::PaperRecord& r);

// Top k of `cited` by cosine similarity to `main`, ties broken by id.
std::vector<ScoredPaper> filter_citations(const ingest::PaperRecord& main,
                                          const std::vector<ingest::PaperRecord>& cited,
                                          std::size_t k, EmbeddingProvider& embedder);

// kExtractionFailed when the model gives no valid label.
Polarity classify_polarity(const texparse::CitationContext& context, const std::string& cited_title,
                           const llm::LlmHandle& llm);

// Strict majority wins; a tie is contrasting. kEmptyLabels on empty input.
RelationClass aggregate_polarity(const std::vector<Polarity>& labels);

TermDecomposition decompose_abstract(const std::string& abstract, const llm::LlmHandle& llm);

struct SemanticOptions {
  std::size_t k = 10;
  std::optional<int> cutoff_year;  // exclude candidates published after it
  std::size_t parallelism = 4;
};

// Decomposes every eligible candidate and scores it by the better of the
// background-background and target-target cosines; the background pairing
// wins ties. Ranked by raw similarity, then id. Candidates without an
// abstract or whose decomposition fails are skipped with a warning.
std::vector<RelatedPaper> match_semantic(const TermDecomposition& main_terms,
                                         const ingest::RecommendationBatch& batch,
                                         const SemanticOptions& options, const llm::LlmHandle& llm,
                                         EmbeddingProvider& embedder,
                                         std::vector<std::string>* warnings = nullptr);

// Same scoring for already-decomposed candidates; used by match_semantic and
// handy when decompositions are cached.
struct DecomposedCandidate {
  ingest::PaperRecord record;
  TermDecomposition terms;
};
std::vector<RelatedPaper> rank_semantic(const TermDecomposition& main_terms,
                                        const std::vector<DecomposedCandidate>& candidates,
                                        std::size_t k, EmbeddingProvider& embedder);

// Never fails for a valid input: model problems fall back to a template that
// names the related paper and its relation class.
std::string summarize_relation(const ingest::PaperRecord& main, const RelatedPaper& related,
                               const llm::LlmHandle& llm);
std::string fallback_summary(const RelatedPaper& related);

// Classifies every context of each cited paper (fanned out over `parallelism`
// workers) and aggregates per paper. Papers whose contexts all fail
// classification are dropped with a warning.
struct CitedWithContexts {
  ScoredPaper paper;
  std::vector<texparse::CitationContext> contexts;
};
std::vector<RelatedPaper> classify_citations(const std::vector<CitedWithContexts>& cited,
                                             const llm::LlmHandle& llm, std::size_t parallelism = 4,
                                             std::vector<std::string>* warnings = nullptr);

// Maps bibliography keys to cited records with the same normalized title.
// Entries without a parsed title match the longest cited title of at least
// four words that occurs in their raw text.
std::map<std::string, std::string> match_bibliography(const texparse::Bibliography& bib,
                                                      const std::vector<ingest::PaperRecord>& cited);

void to_json(nlohmann::json& j, const RelatedPaper& p);
void from_json(const nlohmann::json& j, RelatedPaper& p);
void to_json(nlohmann::json& j, const TermDecomposition& t);
void from_json(const nlohmann::json& j, TermDecomposition& t);

}  // namespace novelscope::retrieval
