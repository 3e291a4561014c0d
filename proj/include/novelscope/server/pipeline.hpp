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

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "novelscope/assess/assess.hpp"
#include "novelscope/common/cancel.hpp"
#include "novelscope/common/clock.hpp"
#include "novelscope/graph/graph.hpp"
#include "novelscope/ingest/arxiv.hpp"
#include "novelscope/ingest/scholar.hpp"
#include "novelscope/llm/gateway.hpp"
#include "novelscope/llm/prompts.hpp"
#include "novelscope/retrieval/embedding.hpp"
#include "novelscope/retrieval/related.hpp"

namespace novelscope::server {

enum class Stage { kFetchPaper, kParse, kExtractGraph, kFetchRelated, kClassify, kAssess, kDone, kError, kCancelled };

std::string_view to_string(Stage s);
Stage parse_stage(std::string_view s);
double stage_percent(Stage s);  // start percentage of each running stage; 100 for done
bool is_terminal(Stage s);

struct ProgressEvent {
  Stage stage = Stage::kFetchPaper;
  double percent = 0.0;
  std::string message;
  TimePoint timestamp;
  nlohmann::json data;  // the full result for done; code and failed stage for error
};

nlohmann::json to_json(const ProgressEvent& e);

inline constexpr const char* kDefaultModel = "gemini-2.0-flash";

struct EvaluateRequest {
  std::string arxiv_id;
  std::string title;
  int k_citations = 20;
  int k_recommended = 30;
  int k_related = 10;
  std::string model_id = kDefaultModel;
  bool filter_by_date = false;
  int k_samples = 5;
};

struct AbstractRequest {
  std::string title;
  std::string abstract;
  int k_recommended = 30;
  int k_related = 10;
  std::string model_id = kDefaultModel;
  int k_samples = 5;
};

struct RequestLimits {
  int max_citations = 100;
  int max_recommended = 100;
  int max_related = 50;
  int max_samples = 16;
};

// Missing fields take the defaults above. Throws kBadRequest on wrong types.
EvaluateRequest parse_evaluate_request(const nlohmann::json& j);
AbstractRequest parse_abstract_request(const nlohmann::json& j);
nlohmann::json to_json(const EvaluateRequest& r);
nlohmann::json to_json(const AbstractRequest& r);

// Pipeline variants used by the evaluation harness.
struct Ablation {
  bool no_citation = false;
  bool no_semantic = false;
  bool no_related = false;  // implies both of the above
  bool no_graph = false;

  nlohmann::json to_json() const;
  bool any() const { return no_citation || no_semantic || no_related || no_graph; }
};

struct EvaluationResult {
  ingest::PaperRecord paper;
  std::optional<graph::PaperGraph> graph;
  std::string graph_text;
  std::vector<retrieval::RelatedPaper> related;  // in evidence order
  assess::NoveltyReport report;
  nlohmann::json settings;
  std::string pipeline_version;
  std::vector<std::string> warnings;
};

nlohmann::json to_json(const EvaluationResult& r);
EvaluationResult evaluation_from_json(const nlohmann::json& j);

struct PipelineDeps {
  std::shared_ptr<ingest::ArxivClient> arxiv;
  std::shared_ptr<ingest::ScholarClient> scholar;
  std::shared_ptr<llm::Gateway> gateway;
  std::shared_ptr<llm::PromptLibrary> prompts;
  std::shared_ptr<retrieval::EmbeddingProvider> embedder;
  std::shared_ptr<const llm::PricingTable> pricing;
  std::shared_ptr<Clock> clock;
  std::string pipeline_version = "novelscope-pipeline/1";
  std::size_t parallelism = 4;
  double scoring_temperature = 1.0;
};

// One evaluation end to end. Emits a progress event as each stage starts;
// terminal events are the caller's business.
class Pipeline {
 public:
  using Sink = std::function<void(const ProgressEvent&)>;

  explicit Pipeline(PipelineDeps deps);

  // kBadRequest for invalid requests or unknown models.
  void validate(const EvaluateRequest& r, const RequestLimits& limits = {}) const;
  void validate(const AbstractRequest& r, const RequestLimits& limits = {}) const;

  EvaluationResult evaluate(const EvaluateRequest& request, const Sink& sink, const CancellationToken& cancel,
                            const Ablation& ablation = {}) const;

  // Title and abstract only: candidates come from a keyword search, no graph
  // and no citations.
  EvaluationResult evaluate_abstract(const AbstractRequest& request, const CancellationToken& cancel) const;

  const PipelineDeps& deps() const { return deps_; }

 private:
  llm::LlmHandle handle(const std::string& model_id, const CancellationToken& cancel) const;
  void summarize_all(const ingest::PaperRecord& main, std::vector<retrieval::RelatedPaper>& related,
                     const llm::LlmHandle& llm) const;

  PipelineDeps deps_;
};

}  // namespace novelscope::server
