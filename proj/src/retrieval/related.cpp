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

#include "novelscope/retrieval/related.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "novelscope/common/error.hpp"
#include "novelscope/common/parallel.hpp"
#include "novelscope/common/text.hpp"

namespace novelscope::retrieval {

namespace {

// Scores are compared at 1e-12 resolution so that texts scoring equal up to
// rounding noise fall back to the id order.
bool ranks_before(double sim_a, const std::string& id_a, double sim_b, const std::string& id_b) {
  const auto qa = std::llround(sim_a * 1e12);
  const auto qb = std::llround(sim_b * 1e12);
  if (qa != qb) return qa > qb;
  return id_a < id_b;
}

bool is_model_failure(const Error& e) {
  return e.code() == ErrorCode::kSchemaFailure || e.code() == ErrorCode::kExtractionFailed;
}

std::string capitalized(std::string_view s) {
  std::string out(s);
  if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

}  // namespace

std::string_view to_string(Source s) { return s == Source::kCitation ? "citation" : "semantic"; }

std::string_view to_string(RelationClass c) {
  switch (c) {
    case RelationClass::kSupporting: return "supporting";
    case RelationClass::kContrasting: return "contrasting";
    case RelationClass::kBackground: return "background";
    case RelationClass::kTarget: return "target";
  }
  return "";
}

std::string_view to_string(Polarity p) { return p == Polarity::kPositive ? "positive" : "negative"; }

Source parse_source(std::string_view s) {
  if (s == "citation") return Source::kCitation;
  if (s == "semantic") return Source::kSemantic;
  throw Error(ErrorCode::kBadRequest, "unknown source '" + std::string(s) + "'");
}

RelationClass parse_relation_class(std::string_view s) {
  if (s == "supporting") return RelationClass::kSupporting;
  if (s == "contrasting") return RelationClass::kContrasting;
  if (s == "background") return RelationClass::kBackground;
  if (s == "target") return RelationClass::kTarget;
  throw Error(ErrorCode::kBadRequest, "unknown relation class '" + std::string(s) + "'");
}

Polarity parse_polarity(std::string_view s) {
  if (s == "positive") return Polarity::kPositive;
  if (s == "negative") return Polarity::kNegative;
  throw Error(ErrorCode::kBadRequest, "unknown polarity '" + std::string(s) + "'");
}

void check_invariants(const RelatedPaper& p) {
  const bool citation_class =
      p.relation == RelationClass::kSupporting || p.relation == RelationClass::kContrasting;
  if (p.source == Source::kCitation) {
    if (p.contexts.empty()) throw Error(ErrorCode::kBadRequest, "citation paper without contexts");
    if (!p.matched_text.empty()) throw Error(ErrorCode::kBadRequest, "citation paper with matched text");
    if (!citation_class) throw Error(ErrorCode::kBadRequest, "citation paper with a semantic class");
  } else {
    if (p.matched_text.empty()) throw Error(ErrorCode::kBadRequest, "semantic paper without matched text");
    if (!p.contexts.empty()) throw Error(ErrorCode::kBadRequest, "semantic paper with contexts");
    if (citation_class) throw Error(ErrorCode::kBadRequest, "semantic paper with a citation class");
  }
}

std::string paper_text(const ingest::PaperRecord& r) {
  return r.abstract.empty() ? r.title : r.title + "\n\n" + r.abstract;
}

std::vector<ScoredPaper> filter_citations(const ingest::PaperRecord& main,
                                          const std::vector<ingest::PaperRecord>& cited,
                                          std::size_t k, EmbeddingProvider& embedder) {
  if (k == 0) throw Error(ErrorCode::kBadRequest, "k must be at least 1");
  const EmbeddingVector anchor = embedder.embed(paper_text(main));
  std::vector<ScoredPaper> scored;
  std::set<std::string> seen;
  for (const auto& r : cited) {
    if (!seen.insert(r.id).second) continue;
    scored.push_back({r, cosine(anchor, embedder.embed(paper_text(r)))});
  }
  std::sort(scored.begin(), scored.end(), [](const ScoredPaper& a, const ScoredPaper& b) {
    return ranks_before(a.similarity, a.record.id, b.similarity, b.record.id);
  });
  if (scored.size() > k) scored.resize(k);
  return scored;
}

Polarity classify_polarity(const texparse::CitationContext& context, const std::string& cited_title,
                           const llm::LlmHandle& llm) {
  if (text::trim(context.sentence).empty()) {
    throw Error(ErrorCode::kBadRequest, "citation context has an empty sentence");
  }
  llm::AskOptions opts;
  opts.stage = "polarity";
  opts.max_output_tokens = 256;
  try {
    auto out = llm.ask("citation_polarity.v1",
                       {{"key", context.citation_key}, {"cited_title", cited_title},
                        {"sentence", context.sentence}},
                       opts);
    return parse_polarity(out.content.at("polarity").get<std::string>());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kSchemaFailure) {
      throw Error(ErrorCode::kExtractionFailed, std::string("polarity classification failed: ") + e.what());
    }
    throw;
  }
}

RelationClass aggregate_polarity(const std::vector<Polarity>& labels) {
  if (labels.empty()) throw Error(ErrorCode::kEmptyLabels, "no polarity labels to aggregate");
  const auto positive = std::count(labels.begin(), labels.end(), Polarity::kPositive);
  const auto negative = static_cast<std::ptrdiff_t>(labels.size()) - positive;
  return positive > negative ? RelationClass::kSupporting : RelationClass::kContrasting;
}

TermDecomposition decompose_abstract(const std::string& abstract, const llm::LlmHandle& llm) {
  if (text::trim(abstract).empty()) throw Error(ErrorCode::kBadRequest, "abstract is empty");
  llm::AskOptions opts;
  opts.stage = "decompose";
  opts.max_output_tokens = 512;
  nlohmann::json out;
  try {
    out = llm.ask("abstract_terms.v1", {{"abstract", abstract}}, opts).content;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kSchemaFailure) {
      throw Error(ErrorCode::kExtractionFailed, std::string("abstract decomposition failed: ") + e.what());
    }
    throw;
  }
  TermDecomposition terms{text::trim(out.at("background").get<std::string>()),
                          text::trim(out.at("target").get<std::string>())};
  if (terms.background.empty() && terms.target.empty()) {
    throw Error(ErrorCode::kExtractionFailed, "abstract decomposition is empty");
  }
  return terms;
}

std::vector<RelatedPaper> rank_semantic(const TermDecomposition& main_terms,
                                        const std::vector<DecomposedCandidate>& candidates,
                                        std::size_t k, EmbeddingProvider& embedder) {
  if (k == 0) throw Error(ErrorCode::kBadRequest, "k must be at least 1");
  if (main_terms.background.empty() && main_terms.target.empty()) {
    throw Error(ErrorCode::kBadRequest, "main paper decomposition is empty");
  }
  std::optional<EmbeddingVector> main_bg, main_tg;
  if (!main_terms.background.empty()) main_bg = embedder.embed(main_terms.background);
  if (!main_terms.target.empty()) main_tg = embedder.embed(main_terms.target);

  std::vector<RelatedPaper> out;
  for (const auto& c : candidates) {
    std::optional<double> bg, tg;
    if (main_bg && !c.terms.background.empty()) bg = cosine(*main_bg, embedder.embed(c.terms.background));
    if (main_tg && !c.terms.target.empty()) tg = cosine(*main_tg, embedder.embed(c.terms.target));
    if (!bg && !tg) continue;
    const bool background_wins = bg && (!tg || *bg >= *tg);
    RelatedPaper p;
    p.record = c.record;
    p.source = Source::kSemantic;
    p.relation = background_wins ? RelationClass::kBackground : RelationClass::kTarget;
    p.raw_similarity = background_wins ? *bg : *tg;
    p.similarity = display_similarity(p.raw_similarity);
    p.matched_text = background_wins ? c.terms.background : c.terms.target;
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(), [](const RelatedPaper& a, const RelatedPaper& b) {
    return ranks_before(a.raw_similarity, a.record.id, b.raw_similarity, b.record.id);
  });
  if (out.size() > k) out.resize(k);
  return out;
}

std::vector<RelatedPaper> match_semantic(const TermDecomposition& main_terms,
                                         const ingest::RecommendationBatch& batch,
                                         const SemanticOptions& options, const llm::LlmHandle& llm,
                                         EmbeddingProvider& embedder, std::vector<std::string>* warnings) {
  std::vector<ingest::PaperRecord> eligible;
  for (const auto& r : batch.papers) {
    if (options.cutoff_year && r.year && *r.year > *options.cutoff_year) continue;
    if (text::trim(r.abstract).empty()) {
      if (warnings) warnings->push_back("candidate " + r.id + " has no abstract; skipped");
      continue;
    }
    eligible.push_back(r);
  }
  std::sort(eligible.begin(), eligible.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });

  std::vector<std::optional<TermDecomposition>> terms(eligible.size());
  std::vector<std::string> failures(eligible.size());
  parallel_for(eligible.size(), options.parallelism, [&](std::size_t i) {
    try {
      terms[i] = decompose_abstract(eligible[i].abstract, llm);
    } catch (const Error& e) {
      if (!is_model_failure(e)) throw;
      failures[i] = e.what();
    }
  });

  std::vector<DecomposedCandidate> decomposed;
  for (std::size_t i = 0; i < eligible.size(); ++i) {
    if (terms[i]) {
      decomposed.push_back({eligible[i], *terms[i]});
    } else if (warnings) {
      warnings->push_back("candidate " + eligible[i].id + " skipped: " + failures[i]);
    }
  }
  if (decomposed.empty()) return {};
  return rank_semantic(main_terms, decomposed, options.k, embedder);
}

std::string fallback_summary(const RelatedPaper& related) {
  const std::string relation(to_string(related.relation));
  if (related.source == Source::kCitation) {
    std::string s = "\"" + related.record.title + "\" is a " + relation + " citation of the paper.";
    if (!related.contexts.empty()) s += " It is cited in: " + related.contexts.front().context.sentence;
    return s;
  }
  return "\"" + related.record.title + "\" is related through its " + relation + ": " +
         related.matched_text;
}

std::string summarize_relation(const ingest::PaperRecord& main, const RelatedPaper& related,
                               const llm::LlmHandle& llm) {
  check_invariants(related);
  const std::string relation(to_string(related.relation));
  std::string evidence;
  if (related.source == Source::kCitation) {
    for (const auto& c : related.contexts) {
      evidence += "- (" + std::string(to_string(c.polarity)) + ") " + c.context.sentence + "\n";
    }
  } else {
    evidence = "Matched " + relation + ": " + related.matched_text;
  }
  llm::AskOptions opts;
  opts.stage = "summary";
  opts.max_output_tokens = 512;
  try {
    auto out = llm.ask("relation_summary.v1",
                       {{"main_title", main.title},
                        {"main_abstract", main.abstract},
                        {"related_title", related.record.title},
                        {"related_abstract", related.record.abstract},
                        {"relation", relation},
                        {"evidence", text::trim(evidence)}},
                       opts);
    std::string summary = text::trim(out.content.at("summary").get<std::string>());
    if (summary.empty()) return fallback_summary(related);
    if (!text::contains_icase(summary, relation)) summary = capitalized(relation) + ". " + summary;
    return summary;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kCancelled) throw;
    return fallback_summary(related);
  }
}

std::vector<RelatedPaper> classify_citations(const std::vector<CitedWithContexts>& cited,
                                             const llm::LlmHandle& llm, std::size_t parallelism,
                                             std::vector<std::string>* warnings) {
  struct Job {
    std::size_t paper;
    std::size_t context;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < cited.size(); ++i) {
    for (std::size_t j = 0; j < cited[i].contexts.size(); ++j) jobs.push_back({i, j});
  }
  std::vector<std::optional<Polarity>> labels(jobs.size());
  parallel_for(jobs.size(), parallelism, [&](std::size_t n) {
    const auto& paper = cited[jobs[n].paper];
    try {
      labels[n] = classify_polarity(paper.contexts[jobs[n].context], paper.paper.record.title, llm);
    } catch (const Error& e) {
      if (!is_model_failure(e)) throw;
    }
  });

  std::vector<RelatedPaper> out;
  std::size_t n = 0;
  for (const auto& c : cited) {
    RelatedPaper p;
    p.record = c.paper.record;
    p.source = Source::kCitation;
    p.raw_similarity = c.paper.similarity;
    p.similarity = display_similarity(c.paper.similarity);
    std::vector<Polarity> votes;
    for (const auto& ctx : c.contexts) {
      if (labels[n]) {
        p.contexts.push_back({ctx, *labels[n]});
        votes.push_back(*labels[n]);
      } else if (warnings) {
        warnings->push_back("context of " + c.paper.record.id + " could not be classified");
      }
      ++n;
    }
    if (votes.empty()) {
      if (warnings) warnings->push_back("citation " + c.paper.record.id + " dropped: no classified contexts");
      continue;
    }
    p.relation = aggregate_polarity(votes);
    out.push_back(std::move(p));
  }
  return out;
}

std::map<std::string, std::string> match_bibliography(const texparse::Bibliography& bib,
                                                      const std::vector<ingest::PaperRecord>& cited) {
  std::map<std::string, std::string> by_title;
  for (const auto& r : cited) by_title.emplace(text::normalize_title(r.title), r.id);
  std::map<std::string, std::string> out;
  for (const auto& [key, entry] : bib.entries) {
    const std::string t = text::normalize_title(entry.title);
    if (auto it = by_title.find(t); !t.empty() && it != by_title.end()) {
      out[key] = it->second;
      continue;
    }
    // Free-form entries often carry no recognizable title field. Accept the
    // longest cited title (four words or more) found inside the entry text.
    const std::string raw = " " + text::normalize_title(entry.raw) + " ";
    std::size_t best = 0;
    for (const auto& [title, id] : by_title) {
      if (std::count(title.begin(), title.end(), ' ') < 3 || title.size() <= best) continue;
      if (raw.find(" " + title + " ") != std::string::npos) {
        out[key] = id;
        best = title.size();
      }
    }
  }
  return out;
}

void to_json(nlohmann::json& j, const TermDecomposition& t) {
  j = {{"background", t.background}, {"target", t.target}};
}

void from_json(const nlohmann::json& j, TermDecomposition& t) {
  t.background = j.at("background").get<std::string>();
  t.target = j.at("target").get<std::string>();
}

void to_json(nlohmann::json& j, const RelatedPaper& p) {
  nlohmann::json contexts = nlohmann::json::array();
  for (const auto& c : p.contexts) {
    nlohmann::json cj = c.context;
    cj["polarity"] = to_string(c.polarity);
    contexts.push_back(std::move(cj));
  }
  j = {{"id", p.record.id},
       {"record", p.record},
       {"source", to_string(p.source)},
       {"class", to_string(p.relation)},
       {"similarity", p.similarity},
       {"raw_similarity", p.raw_similarity},
       {"summary", p.summary},
       {"contexts", std::move(contexts)},
       {"matched_text", p.matched_text.empty() ? nlohmann::json(nullptr) : nlohmann::json(p.matched_text)}};
}

void from_json(const nlohmann::json& j, RelatedPaper& p) {
  p.record = j.at("record").get<ingest::PaperRecord>();
  p.source = parse_source(j.at("source").get<std::string>());
  p.relation = parse_relation_class(j.at("class").get<std::string>());
  p.similarity = j.at("similarity").get<double>();
  p.raw_similarity = j.value("raw_similarity", p.similarity);
  p.summary = j.value("summary", std::string{});
  p.contexts.clear();
  for (const auto& cj : j.value("contexts", nlohmann::json::array())) {
    p.contexts.push_back({cj.get<texparse::CitationContext>(),
                          parse_polarity(cj.at("polarity").get<std::string>())});
  }
  p.matched_text = j.value("matched_text", nlohmann::json(nullptr)).is_string()
                       ? j["matched_text"].get<std::string>()
                       : std::string{};
}

}  // namespace novelscope::retrieval
