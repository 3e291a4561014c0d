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

#include <gtest/gtest.h>

#include <thread>

#include "novelscope/server/mock_responders.hpp"
#include "server_support.hpp"

namespace ns = novelscope;
using namespace novelscope::server;
using nlohmann::json;
using testsupport::fixture_app;
namespace graph = novelscope::graph;
namespace retrieval = novelscope::retrieval;
namespace llm = novelscope::llm;
namespace assess = novelscope::assess;

namespace {

struct Run {
  Stage terminal;
  std::vector<ProgressEvent> events;
  json result;
};

Run run(App& app, const EvaluateRequest& req, const Ablation& ablation = {}) {
  Run r;
  const auto id = app.service->new_id();
  r.terminal = app.service->run(id, req, [&](const ProgressEvent& e) { r.events.push_back(e); }, ablation);
  if (r.terminal == Stage::kDone) r.result = r.events.back().data;
  return r;
}

EvaluateRequest request_for(const std::string& arxiv_id) {
  EvaluateRequest r;
  r.arxiv_id = arxiv_id;
  return r;
}

std::vector<Stage> stages(const std::vector<ProgressEvent>& events) {
  std::vector<Stage> s;
  for (const auto& e : events) s.push_back(e.stage);
  return s;
}

const std::vector<Stage> kCanonical = {Stage::kFetchPaper, Stage::kParse,  Stage::kExtractGraph, Stage::kFetchRelated,
                                       Stage::kClassify,   Stage::kAssess, Stage::kDone};

}  // namespace

class GoldenPaper : public ::testing::TestWithParam<std::string> {};

TEST_P(GoldenPaper, ReportAndEventsAreByteStable) {
  const std::string id = GetParam();
  auto app = fixture_app("golden-" + id);
  const auto t0 = std::chrono::steady_clock::now();
  const auto a = run(app, request_for(id));
  EXPECT_LT(std::chrono::steady_clock::now() - t0, std::chrono::seconds(5));
  ASSERT_EQ(a.terminal, Stage::kDone) << a.events.back().message;
  EXPECT_EQ(stages(a.events), kCanonical);
  std::vector<double> pct;
  for (const auto& e : a.events) pct.push_back(e.percent);
  EXPECT_EQ(pct, (std::vector<double>{0, 15, 25, 45, 60, 80, 100}));

  // a second, independent process-equivalent run
  auto fresh = fixture_app("golden2-" + id);
  const auto b = run(fresh, request_for(id));
  EXPECT_EQ(a.result.dump(2), b.result.dump(2));
  EXPECT_EQ(testsupport::event_log(a.events), testsupport::event_log(b.events));

  testsupport::expect_golden("report_" + id + ".json", a.result.dump(2) + "\n");
  testsupport::expect_golden("events_" + id + ".jsonl", testsupport::event_log(a.events));
}

INSTANTIATE_TEST_SUITE_P(Fixtures, GoldenPaper, ::testing::Values("2403.01234", "2405.05678"),
                         [](const auto& info) { return info.param == "2403.01234" ? "PaperA" : "PaperB"; });

TEST(Pipeline, ResultHonoursStructuralInvariants) {
  auto app = fixture_app("invariants");
  const auto r = run(app, request_for("2403.01234"));
  ASSERT_EQ(r.terminal, Stage::kDone);
  const auto res = evaluation_from_json(r.result);
  ASSERT_TRUE(res.graph.has_value());
  EXPECT_TRUE(graph::validate_graph(*res.graph).empty());
  std::size_t citations = 0, semantic = 0;
  std::set<std::string> ids;
  for (const auto& p : res.related) {
    EXPECT_NO_THROW(retrieval::check_invariants(p));
    (p.source == retrieval::Source::kCitation ? citations : semantic)++;
    ids.insert(p.record.id);
  }
  EXPECT_LE(citations, 20u);
  EXPECT_LE(semantic, 10u);
  EXPECT_GT(citations, 0u);
  EXPECT_GT(semantic, 0u);
  for (const auto& e : res.report.supporting) EXPECT_TRUE(ids.contains(e.related_id));
  for (const auto& e : res.report.contradictory) EXPECT_TRUE(ids.contains(e.related_id));
  EXPECT_EQ(res.report.label, assess::label_for(res.report.score));
  EXPECT_EQ(res.report.score, assess::mean_vote(res.report.samples));
  EXPECT_EQ(json(res.report).dump(), r.result["report"].dump());
}

TEST(Pipeline, CostMatchesTheLedgerArithmetic) {
  auto app = fixture_app("cost");
  const auto r = run(app, request_for("2403.01234"));
  ASSERT_EQ(r.terminal, Stage::kDone);
  const auto& cost = r.result["report"]["cost"];
  const auto& price = app.pricing->get("gemini-2.0-flash");
  const llm::Picodollars pico =
      cost["input_tokens"].get<std::int64_t>() * price.input_per_token +
      cost["output_tokens"].get<std::int64_t>() * price.output_per_token;
  EXPECT_EQ(cost["usd"].get<double>(), llm::to_usd(pico));
  EXPECT_EQ(cost["calls"].get<std::int64_t>(), static_cast<std::int64_t>(app.mock->calls()));
}

TEST(Service, CachedResultYieldsOneDoneEvent) {
  auto app = fixture_app("cachehit");
  const auto first = run(app, request_for("2405.05678"));
  ASSERT_EQ(first.terminal, Stage::kDone);
  app.counting->reset();
  const auto calls = app.mock->calls();
  const auto second = run(app, request_for("2405.05678"));
  ASSERT_EQ(second.events.size(), 1u);
  EXPECT_EQ(second.terminal, Stage::kDone);
  EXPECT_EQ(second.result, first.result);
  EXPECT_EQ(app.counting->count(), 0u);
  EXPECT_EQ(app.mock->calls(), calls);
}

TEST(Service, WarmHttpCacheMakesNoUpstreamCalls) {
  auto app = fixture_app("warm");
  ASSERT_EQ(run(app, request_for("2403.01234")).terminal, Stage::kDone);
  app.counting->reset();
  // different settings miss the result cache but hit the HTTP cache
  auto req = request_for("2403.01234");
  req.k_samples = 3;
  ASSERT_EQ(run(app, req).terminal, Stage::kDone);
  EXPECT_EQ(app.counting->count(), 0u);
}

TEST(Service, CancelDuringGraphExtractionStoresNothing) {
  auto app = fixture_app("cancel");
  const auto id = app.service->new_id();
  auto service = app.service;
  app.mock->set_responder("graph_extraction.v1", [service, id](const llm::ProviderCall& c) {
    service->cancel(id);
    return mock_graph(c.original_user());
  });
  std::vector<ProgressEvent> events;
  const auto req = request_for("2403.01234");
  const auto terminal = app.service->run(id, req, [&](const ProgressEvent& e) { events.push_back(e); });
  EXPECT_EQ(terminal, Stage::kCancelled);
  EXPECT_EQ(events.back().stage, Stage::kCancelled);
  EXPECT_EQ(events.back().percent, 25.0);
  EXPECT_FALSE(app.store->contains(evaluation_cache_key(req, app.pipeline->deps().pipeline_version)));
  EXPECT_FALSE(app.service->cancel(id));
}

TEST(Service, FailuresBecomeErrorEvents) {
  auto app = fixture_app("errors");
  const auto r = run(app, request_for("2409.09999"));
  EXPECT_EQ(r.terminal, Stage::kError);
  EXPECT_EQ(r.events.back().data["code"], "NotFound");
  EXPECT_EQ(r.events.back().data["failed_stage"], "fetch_paper");
  EXPECT_THROW(app.service->validate(request_for("not-an-id")), ns::Error);
  auto bad = request_for("2403.01234");
  bad.model_id = "no-such-model";
  EXPECT_THROW(app.service->validate(bad), ns::Error);
  bad = request_for("2403.01234");
  bad.k_samples = 0;
  EXPECT_THROW(app.service->validate(bad), ns::Error);
}

TEST(Service, MissingSourceFallsBackToAbstractOnly) {
  for (const char* id : {"2406.04321", "2407.00002"}) {
    auto app = fixture_app(std::string("absonly-") + id);
    const auto r = run(app, request_for(id));
    ASSERT_EQ(r.terminal, Stage::kDone) << id;
    EXPECT_TRUE(r.result["report"]["abstract_only"].get<bool>());
    EXPECT_TRUE(r.result["graph"].is_null());
    EXPECT_FALSE(r.result["warnings"].empty());
  }
}

TEST(Service, ConcurrencyCapHolds) {
  auto app = fixture_app("cap", 1);
  std::atomic<int> running{0}, peak{0};
  auto base = app.mock;
  app.mock->set_responder("keywords.v1", [&](const llm::ProviderCall& c) {
    const int now = ++running;
    peak = std::max(peak.load(), now);
    std::this_thread::sleep_for(std::chrono::milliseconds(30));
    --running;
    return mock_keywords(c.original_user());
  });
  std::vector<std::thread> ts;
  for (int i = 0; i < 3; ++i) {
    ts.emplace_back([&, i] {
      auto req = request_for(i % 2 ? "2403.01234" : "2405.05678");
      req.k_samples = 1 + i;
      run(app, req);
    });
  }
  for (auto& t : ts) t.join();
  EXPECT_EQ(peak.load(), 1);
}

TEST(Ablations, VariantsDropTheirInputs) {
  auto app = fixture_app("ablate");
  Ablation no_cit;
  no_cit.no_citation = true;
  for (const auto& p : run(app, request_for("2405.05678"), no_cit).result["related"]) EXPECT_EQ(p["source"], "semantic");
  Ablation no_sem;
  no_sem.no_semantic = true;
  for (const auto& p : run(app, request_for("2405.05678"), no_sem).result["related"]) EXPECT_EQ(p["source"], "citation");
  Ablation none;
  none.no_related = true;
  EXPECT_TRUE(run(app, request_for("2405.05678"), none).result["related"].empty());
  Ablation no_graph;
  no_graph.no_graph = true;
  const auto r = run(app, request_for("2405.05678"), no_graph).result;
  EXPECT_TRUE(r["graph"].is_null());
  EXPECT_EQ(r["graph_text"], "");
}

TEST(Abstract, GoldenResult) {
  auto app = fixture_app("abstract");
  const auto body = json::parse(ns::text::read_file(testsupport::fixture("requests/draft_abstract.json").string()));
  const auto result = app.service->evaluate_abstract(parse_abstract_request(body));
  EXPECT_TRUE(result["graph"].is_null());
  EXPECT_TRUE(result["report"]["abstract_only"].get<bool>());
  for (const auto& p : result["related"]) EXPECT_EQ(p["source"], "semantic");
  testsupport::expect_golden("abstract_draft.json", result.dump(2) + "\n");
  // the second call is served from the result store
  const auto calls = app.mock->calls();
  EXPECT_EQ(app.service->evaluate_abstract(parse_abstract_request(body)), result);
  EXPECT_EQ(app.mock->calls(), calls);
}

TEST(Abstract, RequestValidation) {
  auto app = fixture_app("abstract-bad");
  EXPECT_THROW(app.service->evaluate_abstract(parse_abstract_request(json{{"title", "T"}, {"abstract", " "}})),
               ns::Error);
  EXPECT_THROW(parse_abstract_request(json{{"title", 3}}), ns::Error);
}

TEST(Library, EmptySortedAndCorruptSkipped) {
  const auto dir = testsupport::temp_dir("library");
  EXPECT_TRUE(list_library(dir / "missing").empty());
  EXPECT_TRUE(list_library(dir).empty());
  novelscope::server::AppConfig cfg;
  cfg.data_dir = testsupport::temp_dir("library-data");
  cfg.library_dir = dir;
  cfg.fixtures_dir = testsupport::fixture("http");
  cfg.fake_clock = true;
  auto app = build_app(cfg);
  for (const char* id : {"2405.05678", "2403.01234", "2406.04321"}) ASSERT_EQ(run(app, request_for(id)).terminal, Stage::kDone);
  ns::text::write_file((dir / "broken.json").string(), "{\"paper\": ");
  std::vector<std::string> warnings;
  const auto entries = list_library(dir, &warnings);
  ASSERT_EQ(entries.size(), 3u);
  EXPECT_EQ(warnings.size(), 1u);
  EXPECT_EQ(entries[0].title, "Claim Graphs for Retrieval-Augmented Scientific Fact Verification");
  EXPECT_EQ(entries[1].title, "Sparse Mixture Adapters for Low-Resource Speech Recognition");
  EXPECT_EQ(entries[2].title, "Streaming Keyword Spotting with Tiny Transformers");
  for (const auto& e : entries) {
    EXPECT_TRUE(e.label == "novel" || e.label == "not_novel");
    EXPECT_TRUE(load_library_item(dir, e.id).has_value());
  }
  EXPECT_FALSE(load_library_item(dir, "broken").has_value());
  EXPECT_FALSE(load_library_item(dir, "../etc/passwd").has_value());
}

TEST(Store, FirstWriterWins) {
  ResultStore store(testsupport::temp_dir("store"));
  EXPECT_TRUE(store.put("k1", json{{"v", 1}}));
  EXPECT_FALSE(store.put("k1", json{{"v", 2}}));
  EXPECT_EQ((*store.get("k1"))["v"], 1);
  EXPECT_FALSE(store.get("nope").has_value());
}

TEST(CacheKey, EveryFieldMatters) {
  const auto base = request_for("2403.01234");
  const auto k = evaluation_cache_key(base, "v1");
  EXPECT_EQ(k, evaluation_cache_key(base, "v1"));
  std::vector<EvaluateRequest> variants(8, base);
  variants[0].arxiv_id = "2405.05678";
  variants[1].title = "x";
  variants[2].k_citations = 19;
  variants[3].k_recommended = 29;
  variants[4].k_related = 9;
  variants[5].model_id = "gpt-4o-mini";
  variants[6].filter_by_date = true;
  variants[7].k_samples = 4;
  std::set<std::string> keys = {k};
  for (const auto& v : variants) keys.insert(evaluation_cache_key(v, "v1"));
  EXPECT_EQ(keys.size(), 9u);
  EXPECT_NE(k, evaluation_cache_key(base, "v2"));
  Ablation a;
  a.no_graph = true;
  EXPECT_NE(k, evaluation_cache_key(base, "v1", a));
}

TEST(Requests, DefaultsAndTypeErrors) {
  const auto r = parse_evaluate_request(json{{"arxiv_id", "2403.01234"}});
  EXPECT_EQ(r.k_citations, 20);
  EXPECT_EQ(r.k_recommended, 30);
  EXPECT_EQ(r.k_related, 10);
  EXPECT_EQ(r.k_samples, 5);
  EXPECT_EQ(r.model_id, "gemini-2.0-flash");
  EXPECT_FALSE(r.filter_by_date);
  EXPECT_THROW(parse_evaluate_request(json{{"arxiv_id", 5}}), ns::Error);
  EXPECT_THROW(parse_evaluate_request(json::array()), ns::Error);
  EXPECT_EQ(parse_stage("fetch_related"), Stage::kFetchRelated);
  EXPECT_EQ(stage_percent(Stage::kClassify), 60.0);
  EXPECT_TRUE(is_terminal(Stage::kCancelled));
  EXPECT_FALSE(is_terminal(Stage::kAssess));
}

TEST(MockResponders, PromptSections) {
  EXPECT_EQ(prompt_section("a Title: xyz\n\nmore", "Title: ", "\n\n"), "xyz");
  EXPECT_EQ(prompt_section("no marker", "Title: ", "\n"), "");
  const auto v1 = mock_vote("Paper: p\nEvidence:\n", 3);
  EXPECT_EQ(v1, mock_vote("Paper: p\nEvidence:\n", 3));
  EXPECT_TRUE(v1["label"] == "novel" || v1["label"] == "not_novel");
}
