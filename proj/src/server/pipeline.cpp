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

#include "novelscope/server/pipeline.hpp"

#include <map>
#include <set>

#include "novelscope/common/error.hpp"
#include "novelscope/common/parallel.hpp"
#include "novelscope/common/text.hpp"
#include "novelscope/texparse/texparse.hpp"

namespace novelscope::server {

namespace {

int int_field(const nlohmann::json& j, const char* name, int fallback) {
  if (!j.contains(name) || j[name].is_null()) return fallback;
  if (!j[name].is_number_integer()) throw Error(ErrorCode::kBadRequest, std::string(name) + " must be an integer");
  return j[name].get<int>();
}

std::string string_field(const nlohmann::json& j, const char* name, const std::string& fallback) {
  if (!j.contains(name) || j[name].is_null()) return fallback;
  if (!j[name].is_string()) throw Error(ErrorCode::kBadRequest, std::string(name) + " must be a string");
  return j[name].get<std::string>();
}

void check_range(const char* name, int value, int max) {
  if (value < 1 || value > max) {
    throw Error(ErrorCode::kBadRequest,
                std::string(name) + " must be between 1 and " + std::to_string(max));
  }
}

}  // namespace

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::kFetchPaper: return "fetch_paper";
    case Stage::kParse: return "parse";
    case Stage::kExtractGraph: return "extract_graph";
    case Stage::kFetchRelated: return "fetch_related";
    case Stage::kClassify: return "classify";
    case Stage::kAssess: return "assess";
    case Stage::kDone: return "done";
    case Stage::kError: return "error";
    case Stage::kCancelled: return "cancelled";
  }
  return "";
}

Stage parse_stage(std::string_view s) {
  for (auto st : {Stage::kFetchPaper, Stage::kParse, Stage::kExtractGraph, Stage::kFetchRelated, Stage::kClassify,
                  Stage::kAssess, Stage::kDone, Stage::kError, Stage::kCancelled}) {
    if (to_string(st) == s) return st;
  }
  throw Error(ErrorCode::kBadRequest, "unknown stage '" + std::string(s) + "'");
}

double stage_percent(Stage s) {
  switch (s) {
    case Stage::kFetchPaper: return 0;
    case Stage::kParse: return 15;
    case Stage::kExtractGraph: return 25;
    case Stage::kFetchRelated: return 45;
    case Stage::kClassify: return 60;
    case Stage::kAssess: return 80;
    case Stage::kDone: return 100;
    default: return 0;
  }
}

bool is_terminal(Stage s) { return s == Stage::kDone || s == Stage::kError || s == Stage::kCancelled; }

nlohmann::json to_json(const ProgressEvent& e) {
  nlohmann::json j = {{"stage", to_string(e.stage)},
                      {"percent", e.percent},
                      {"message", e.message},
                      {"timestamp", format_iso8601(e.timestamp)}};
  if (!e.data.is_null()) j["data"] = e.data;
  return j;
}

EvaluateRequest parse_evaluate_request(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kBadRequest, "request body must be a JSON object");
  EvaluateRequest r;
  r.arxiv_id = string_field(j, "arxiv_id", "");
  r.title = string_field(j, "title", "");
  r.k_citations = int_field(j, "k_citations", r.k_citations);
  r.k_recommended = int_field(j, "k_recommended", r.k_recommended);
  r.k_related = int_field(j, "k_related", r.k_related);
  r.model_id = string_field(j, "model_id", r.model_id);
  if (j.contains("filter_by_date") && !j["filter_by_date"].is_null()) {
    if (!j["filter_by_date"].is_boolean()) throw Error(ErrorCode::kBadRequest, "filter_by_date must be a boolean");
    r.filter_by_date = j["filter_by_date"].get<bool>();
  }
  r.k_samples = int_field(j, "k_samples", r.k_samples);
  return r;
}

AbstractRequest parse_abstract_request(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kBadRequest, "request body must be a JSON object");
  AbstractRequest r;
  r.title = string_field(j, "title", "");
  r.abstract = string_field(j, "abstract", "");
  r.k_recommended = int_field(j, "k_recommended", r.k_recommended);
  r.k_related = int_field(j, "k_related", r.k_related);
  r.model_id = string_field(j, "model_id", r.model_id);
  r.k_samples = int_field(j, "k_samples", r.k_samples);
  return r;
}

nlohmann::json to_json(const EvaluateRequest& r) {
  return {{"arxiv_id", r.arxiv_id},       {"title", r.title},           {"k_citations", r.k_citations},
          {"k_recommended", r.k_recommended}, {"k_related", r.k_related}, {"model_id", r.model_id},
          {"filter_by_date", r.filter_by_date}, {"k_samples", r.k_samples}};
}

nlohmann::json to_json(const AbstractRequest& r) {
  return {{"title", r.title},         {"abstract", r.abstract}, {"k_recommended", r.k_recommended},
          {"k_related", r.k_related}, {"model_id", r.model_id}, {"k_samples", r.k_samples}};
}

nlohmann::json Ablation::to_json() const {
  return {{"no_citation", no_citation}, {"no_semantic", no_semantic}, {"no_related", no_related}, {"no_graph", no_graph}};
}

nlohmann::json to_json(const EvaluationResult& r) {
  return {{"paper", r.paper},
          {"graph", r.graph ? nlohmann::json(*r.graph) : nlohmann::json(nullptr)},
          {"graph_text", r.graph_text},
          {"related", r.related},
          {"report", r.report},
          {"settings", r.settings},
          {"pipeline_version", r.pipeline_version},
          {"warnings", r.warnings}};
}

EvaluationResult evaluation_from_json(const nlohmann::json& j) {
  EvaluationResult r;
  r.paper = j.at("paper").get<ingest::PaperRecord>();
  if (!j.at("graph").is_null()) r.graph = j["graph"].get<graph::PaperGraph>();
  r.graph_text = j.value("graph_text", std::string{});
  r.related = j.at("related").get<std::vector<retrieval::RelatedPaper>>();
  r.report = j.at("report").get<assess::NoveltyReport>();
  r.settings = j.value("settings", nlohmann::json::object());
  r.pipeline_version = j.value("pipeline_version", std::string{});
  r.warnings = j.value("warnings", std::vector<std::string>{});
  return r;
}

Pipeline::Pipeline(PipelineDeps deps) : deps_(std::move(deps)) {}

void Pipeline::validate(const EvaluateRequest& r, const RequestLimits& limits) const {
  if (!ingest::is_valid_arxiv_id(r.arxiv_id)) throw Error(ErrorCode::kBadRequest, "arxiv_id is not a valid arXiv identifier");
  check_range("k_citations", r.k_citations, limits.max_citations);
  check_range("k_recommended", r.k_recommended, limits.max_recommended);
  check_range("k_related", r.k_related, limits.max_related);
  check_range("k_samples", r.k_samples, limits.max_samples);
  if (!deps_.gateway->has_model(r.model_id)) throw Error(ErrorCode::kBadRequest, "model " + r.model_id + " is not configured");
}

void Pipeline::validate(const AbstractRequest& r, const RequestLimits& limits) const {
  if (text::trim(r.title).empty()) throw Error(ErrorCode::kBadRequest, "title is empty");
  if (text::trim(r.abstract).empty()) throw Error(ErrorCode::kBadRequest, "abstract is empty");
  check_range("k_recommended", r.k_recommended, limits.max_recommended);
  check_range("k_related", r.k_related, limits.max_related);
  check_range("k_samples", r.k_samples, limits.max_samples);
  if (!deps_.gateway->has_model(r.model_id)) throw Error(ErrorCode::kBadRequest, "model " + r.model_id + " is not configured");
}

llm::LlmHandle Pipeline::handle(const std::string& model_id, const CancellationToken& cancel) const {
  llm::LlmHandle h;
  h.gateway = deps_.gateway.get();
  h.prompts = deps_.prompts.get();
  h.model_id = model_id;
  h.ctx.ledger = std::make_shared<llm::CostLedger>(*deps_.pricing);
  h.ctx.cancel = cancel;
  return h;
}

void Pipeline::summarize_all(const ingest::PaperRecord& main, std::vector<retrieval::RelatedPaper>& related,
                             const llm::LlmHandle& llm) const {
  parallel_for(related.size(), deps_.parallelism,
               [&](std::size_t i) { related[i].summary = retrieval::summarize_relation(main, related[i], llm); });
}

EvaluationResult Pipeline::evaluate(const EvaluateRequest& request, const Sink& sink, const CancellationToken& cancel,
                                    const Ablation& ablation) const {
  validate(request);
  auto emit = [&](Stage stage, std::string message) {
    cancel.throw_if_cancelled();
    if (sink) sink({stage, stage_percent(stage), std::move(message), deps_.clock->now(), nullptr});
  };
  const llm::LlmHandle llm = handle(request.model_id, cancel);
  const bool use_citations = !ablation.no_citation && !ablation.no_related;
  const bool use_semantic = !ablation.no_semantic && !ablation.no_related;

  EvaluationResult result;
  result.pipeline_version = deps_.pipeline_version;
  result.settings = to_json(request);
  if (ablation.any()) result.settings["ablation"] = ablation.to_json();

  // fetch_paper
  emit(Stage::kFetchPaper, "Fetching paper metadata and source");
  const std::string arxiv_id = ingest::strip_arxiv_version(request.arxiv_id);
  ingest::PaperWithReferences meta = deps_.scholar->fetch_metadata(arxiv_id);
  result.paper = meta.paper;
  if (!result.paper.arxiv_id) result.paper.arxiv_id = arxiv_id;
  if (result.paper.title.empty()) result.paper.title = request.title;
  std::optional<ingest::LatexBundle> bundle;
  try {
    bundle = deps_.arxiv->fetch_latex(arxiv_id);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSourceUnavailable) throw;
    result.warnings.push_back("LaTeX source unavailable; continuing with the abstract only");
  }
  const bool abstract_only = !bundle.has_value();

  // parse
  emit(Stage::kParse, "Converting LaTeX and extracting citation contexts");
  texparse::PlainDocument doc;
  std::vector<texparse::CitationContext> contexts;
  texparse::Bibliography bib;
  if (bundle) {
    for (const auto& w : bundle->warnings) result.warnings.push_back(w);
    doc = texparse::to_plain_text(*bundle);
    doc.source_id = result.paper.id;
    for (const auto& w : doc.warnings) result.warnings.push_back(w);
    try {
      bib = texparse::parse_bibliography(*bundle);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoBibliography) throw;
      result.warnings.push_back("no bibliography found; citations are skipped");
    }
    contexts = texparse::extract_citation_contexts(doc, bib, texparse::default_config(), &result.warnings);
  }

  // extract_graph
  emit(Stage::kExtractGraph, "Extracting the paper structure");
  if (!abstract_only && !ablation.no_graph && !doc.empty()) {
    auto extraction = graph::extract_graph(doc, result.paper.title, llm);
    for (const auto& w : extraction.warnings) result.warnings.push_back(w);
    result.graph_text = graph::linearize(extraction.graph);
    result.graph = std::move(extraction.graph);
  } else if (!abstract_only && doc.empty()) {
    result.warnings.push_back("document body is empty; no structure graph");
  }

  // fetch_related
  emit(Stage::kFetchRelated, "Retrieving cited and recommended papers");
  std::vector<retrieval::CitedWithContexts> cited;
  if (use_citations && !contexts.empty()) {
    auto key_to_id = retrieval::match_bibliography(bib, meta.cited);
    std::map<std::string, std::vector<texparse::CitationContext>> by_id;
    for (const auto& c : contexts) {
      if (auto it = key_to_id.find(c.citation_key); it != key_to_id.end()) by_id[it->second].push_back(c);
    }
    std::vector<ingest::PaperRecord> with_contexts;
    for (const auto& r : meta.cited) {
      if (by_id.contains(r.id)) with_contexts.push_back(r);
    }
    if (!with_contexts.empty()) {
      for (auto& scored : retrieval::filter_citations(result.paper, with_contexts,
                                                      static_cast<std::size_t>(request.k_citations), *deps_.embedder)) {
        auto ctxs = by_id[scored.record.id];
        cited.push_back({std::move(scored), std::move(ctxs)});
      }
    }
  }
  ingest::RecommendationBatch batch;
  if (use_semantic) batch = deps_.scholar->fetch_recommendations(result.paper.id, request.k_recommended);

  // classify
  emit(Stage::kClassify, "Classifying citations and matching related papers");
  std::vector<retrieval::RelatedPaper> related =
      retrieval::classify_citations(cited, llm, deps_.parallelism, &result.warnings);
  if (use_semantic && !batch.papers.empty() && !text::trim(result.paper.abstract).empty()) {
    auto main_terms = retrieval::decompose_abstract(result.paper.abstract, llm);
    retrieval::SemanticOptions opts;
    opts.k = static_cast<std::size_t>(request.k_related);
    if (request.filter_by_date) opts.cutoff_year = result.paper.year;
    opts.parallelism = deps_.parallelism;
    auto semantic = retrieval::match_semantic(main_terms, batch, opts, llm, *deps_.embedder, &result.warnings);
    for (auto& p : semantic) related.push_back(std::move(p));
  }
  summarize_all(result.paper, related, llm);
  result.related = assess::evidence_order(std::move(related));

  // assess
  emit(Stage::kAssess, "Scoring novelty and writing the report");
  assess::ScoringOptions scoring;
  scoring.k_samples = static_cast<std::size_t>(request.k_samples);
  scoring.temperature = deps_.scoring_temperature;
  std::optional<graph::PaperGraph> graph_for_report = result.graph;
  result.report = assess::generate_report(result.paper, graph_for_report, result.related, llm, scoring);
  result.report.abstract_only = abstract_only;
  cancel.throw_if_cancelled();
  return result;
}

EvaluationResult Pipeline::evaluate_abstract(const AbstractRequest& request, const CancellationToken& cancel) const {
  validate(request);
  const llm::LlmHandle llm = handle(request.model_id, cancel);
  EvaluationResult result;
  result.pipeline_version = deps_.pipeline_version;
  result.settings = to_json(request);
  result.paper.id = "abstract:" + text::sha256_hex(request.title + "\n" + request.abstract).substr(0, 16);
  result.paper.title = text::trim(request.title);
  result.paper.abstract = text::trim(request.abstract);

  auto batch = deps_.scholar->search(result.paper.title, request.k_recommended, result.paper.id);
  cancel.throw_if_cancelled();
  std::vector<retrieval::RelatedPaper> related;
  if (!batch.papers.empty()) {
    auto main_terms = retrieval::decompose_abstract(result.paper.abstract, llm);
    retrieval::SemanticOptions opts;
    opts.k = static_cast<std::size_t>(request.k_related);
    opts.parallelism = deps_.parallelism;
    related = retrieval::match_semantic(main_terms, batch, opts, llm, *deps_.embedder, &result.warnings);
  }
  summarize_all(result.paper, related, llm);
  result.related = assess::evidence_order(std::move(related));

  assess::ScoringOptions scoring;
  scoring.k_samples = static_cast<std::size_t>(request.k_samples);
  scoring.temperature = deps_.scoring_temperature;
  result.report = assess::generate_report(result.paper, std::nullopt, result.related, llm, scoring);
  cancel.throw_if_cancelled();
  return result;
}

}  // namespace novelscope::server
