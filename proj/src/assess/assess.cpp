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

#include "novelscope/assess/assess.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "novelscope/common/assets.hpp"
#include "novelscope/common/error.hpp"
#include "novelscope/common/parallel.hpp"
#include "novelscope/common/text.hpp"

namespace novelscope::assess {

namespace {

constexpr std::size_t kMinKeywords = 3;
constexpr std::size_t kMaxKeywords = 8;

std::string format_score(double s) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.2f", s);
  return buf;
}

}  // namespace

std::string_view to_string(Label l) { return l == Label::kNovel ? "novel" : "not_novel"; }

std::string_view to_string(EvidencePolarity p) {
  return p == EvidencePolarity::kSupports ? "supports" : "contradicts";
}

Label parse_label(std::string_view s) {
  if (s == "novel") return Label::kNovel;
  if (s == "not_novel") return Label::kNotNovel;
  throw Error(ErrorCode::kBadRequest, "unknown label '" + std::string(s) + "'");
}

EvidencePolarity parse_evidence_polarity(std::string_view s) {
  if (s == "supports") return EvidencePolarity::kSupports;
  if (s == "contradicts") return EvidencePolarity::kContradicts;
  throw Error(ErrorCode::kBadRequest, "unknown evidence polarity '" + std::string(s) + "'");
}

Label label_for(double score) { return score >= 0.5 ? Label::kNovel : Label::kNotNovel; }

std::string default_rubric() { return text::trim(text::read_file(asset_path("config/novelty_rubric.txt"))); }

std::vector<retrieval::RelatedPaper> evidence_order(std::vector<retrieval::RelatedPaper> related) {
  std::sort(related.begin(), related.end(), [](const auto& a, const auto& b) {
    const bool ca = a.source == retrieval::Source::kCitation;
    const bool cb = b.source == retrieval::Source::kCitation;
    if (ca != cb) return ca;
    if (a.raw_similarity != b.raw_similarity) return a.raw_similarity > b.raw_similarity;
    return a.record.id < b.record.id;
  });
  return related;
}

std::string build_evidence_text(const std::vector<retrieval::RelatedPaper>& related) {
  if (related.empty()) return kNoRelatedMarker;
  std::vector<std::string> paragraphs;
  for (const auto& p : evidence_order(related)) {
    paragraphs.push_back("[" + p.record.id + "] " + p.record.title + " (" +
                         std::string(retrieval::to_string(p.source)) + ", " +
                         std::string(retrieval::to_string(p.relation)) + "): " + p.summary);
  }
  return text::join(paragraphs, "\n\n");
}

double mean_vote(const std::vector<int>& votes) {
  if (votes.empty()) throw Error(ErrorCode::kEmptyScores, "no votes to average");
  const long long sum = std::accumulate(votes.begin(), votes.end(), 0LL);
  return static_cast<double>(sum) / static_cast<double>(votes.size());
}

ScoreResult score_novelty(const std::string& graph_text, const std::string& evidence_text,
                          const llm::LlmHandle& llm, const ScoringOptions& options) {
  if (options.k_samples == 0) throw Error(ErrorCode::kBadRequest, "k_samples must be at least 1");
  const std::string rubric = options.rubric.empty() ? default_rubric() : options.rubric;
  std::vector<std::optional<int>> votes(options.k_samples);
  std::vector<std::string> failures(options.k_samples);
  parallel_for(options.k_samples, options.parallelism, [&](std::size_t i) {
    llm::AskOptions opts;
    opts.stage = "score";
    opts.temperature = options.temperature;
    opts.seed = static_cast<std::int64_t>(i);
    opts.max_output_tokens = 512;
    try {
      auto out = llm.ask("novelty_vote.v1",
                         {{"rubric", rubric}, {"graph_text", graph_text}, {"evidence_text", evidence_text}},
                         opts);
      votes[i] = parse_label(out.content.at("label").get<std::string>()) == Label::kNovel ? 1 : 0;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSchemaFailure) throw;
      failures[i] = e.what();
    }
  });
  ScoreResult result;
  for (std::size_t i = 0; i < votes.size(); ++i) {
    if (votes[i]) {
      result.samples.push_back(*votes[i]);
    } else {
      result.warnings.push_back("novelty sample " + std::to_string(i) + " dropped: " + failures[i]);
    }
  }
  if (result.samples.empty()) throw Error(ErrorCode::kScoringFailed, "every novelty sample failed");
  result.score = mean_vote(result.samples);
  return result;
}

std::vector<std::string> extract_keywords(const ingest::PaperRecord& paper, const llm::LlmHandle& llm,
                                          std::vector<std::string>* warnings) {
  if (text::trim(paper.abstract).empty()) throw Error(ErrorCode::kBadRequest, "abstract is empty");
  llm::AskOptions opts;
  opts.stage = "keywords";
  opts.max_output_tokens = 256;
  nlohmann::json out;
  try {
    out = llm.ask("keywords.v1", {{"title", paper.title}, {"abstract", paper.abstract}}, opts).content;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSchemaFailure) throw;
    if (warnings) warnings->push_back(std::string("keyword extraction failed: ") + e.what());
    return {};
  }
  std::vector<std::string> keywords;
  std::set<std::string> seen;
  for (const auto& k : out.at("keywords")) {
    std::string kw = text::collapse_whitespace(text::to_lower(k.get<std::string>()));
    if (kw.empty() || !seen.insert(kw).second) continue;
    keywords.push_back(std::move(kw));
  }
  if (keywords.size() > kMaxKeywords) keywords.resize(kMaxKeywords);
  if (keywords.size() < kMinKeywords) {
    if (warnings) warnings->push_back("keyword extraction returned fewer than 3 distinct keywords");
    return {};
  }
  return keywords;
}

NoveltyReport generate_report(const ingest::PaperRecord& paper, const std::optional<graph::PaperGraph>& graph,
                              const std::vector<retrieval::RelatedPaper>& related,
                              const llm::LlmHandle& llm, const ScoringOptions& options) {
  NoveltyReport report;
  report.paper_id = paper.id;
  report.abstract_only = !graph.has_value();
  const std::string graph_text = graph ? graph::linearize(*graph) : "";
  const std::string evidence_text = build_evidence_text(related);

  ScoringOptions scoring = options;
  if (scoring.rubric.empty()) scoring.rubric = default_rubric();
  ScoreResult votes = score_novelty(graph_text, evidence_text, llm, scoring);
  report.score = votes.score;
  report.samples = votes.samples;
  report.label = label_for(votes.score);
  report.warnings = votes.warnings;

  llm::AskOptions opts;
  opts.stage = "report";
  opts.max_output_tokens = 4096;
  nlohmann::json out;
  try {
    out = llm.ask("novelty_report.v1",
                  {{"rubric", scoring.rubric},
                   {"title", paper.title},
                   {"abstract", paper.abstract},
                   {"graph_text", graph_text},
                   {"evidence_text", evidence_text},
                   {"label", std::string(to_string(report.label))},
                   {"score", format_score(report.score)}},
                  opts)
              .content;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSchemaFailure) throw;
    throw Error(ErrorCode::kReportFailed, std::string("report generation failed: ") + e.what());
  }
  report.summary = text::trim(out.at("summary").get<std::string>());

  std::set<std::string> known;
  for (const auto& p : related) known.insert(p.record.id);
  auto collect = [&](const char* field, EvidencePolarity polarity, std::vector<EvidenceItem>& into) {
    for (const auto& item : out.at(field)) {
      EvidenceItem e{item.at("related_id").get<std::string>(),
                     text::trim(item.at("explanation").get<std::string>()), polarity};
      if (!known.contains(e.related_id)) {
        report.warnings.push_back("evidence cites unknown related id '" + e.related_id + "'; dropped");
        continue;
      }
      if (e.explanation.empty()) continue;
      into.push_back(std::move(e));
    }
  };
  collect("supporting", EvidencePolarity::kSupports, report.supporting);
  collect("contradictory", EvidencePolarity::kContradicts, report.contradictory);

  if (!text::trim(paper.abstract).empty()) report.keywords = extract_keywords(paper, llm, &report.warnings);
  if (llm.ctx.ledger) report.cost = llm.ctx.ledger->snapshot();
  return report;
}

void to_json(nlohmann::json& j, const EvidenceItem& e) {
  j = {{"related_id", e.related_id}, {"explanation", e.explanation}, {"polarity", to_string(e.polarity)}};
}

void from_json(const nlohmann::json& j, EvidenceItem& e) {
  e.related_id = j.at("related_id").get<std::string>();
  e.explanation = j.at("explanation").get<std::string>();
  e.polarity = parse_evidence_polarity(j.at("polarity").get<std::string>());
}

void to_json(nlohmann::json& j, const NoveltyReport& r) {
  j = {{"paper_id", r.paper_id},
       {"score", r.score},
       {"samples", r.samples},
       {"label", to_string(r.label)},
       {"summary", r.summary},
       {"supporting", r.supporting},
       {"contradictory", r.contradictory},
       {"keywords", r.keywords},
       {"abstract_only", r.abstract_only},
       {"cost", r.cost},
       {"warnings", r.warnings}};
}

void from_json(const nlohmann::json& j, NoveltyReport& r) {
  r.paper_id = j.at("paper_id").get<std::string>();
  r.score = j.at("score").get<double>();
  r.samples = j.at("samples").get<std::vector<int>>();
  r.label = parse_label(j.at("label").get<std::string>());
  r.summary = j.at("summary").get<std::string>();
  r.supporting = j.at("supporting").get<std::vector<EvidenceItem>>();
  r.contradictory = j.at("contradictory").get<std::vector<EvidenceItem>>();
  r.keywords = j.value("keywords", std::vector<std::string>{});
  r.abstract_only = j.value("abstract_only", false);
  r.cost = j.value("cost", nlohmann::json::object());
  r.warnings = j.value("warnings", std::vector<std::string>{});
}

}  // namespace novelscope::assess
