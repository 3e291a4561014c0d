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

#include <random>
#include <thread>

#include "novelscope/llm/gateway.hpp"
#include "novelscope/llm/handle.hpp"
#include "novelscope/server/mock_responders.hpp"
#include "support.hpp"

namespace ns = novelscope;
using namespace novelscope::llm;
using nlohmann::json;

namespace {

ns::ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ns::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ns::ErrorCode::kInternal;
}

ModelRequest keywords_request() {
  ModelRequest r;
  r.model_id = "gemini-2.0-flash";
  r.user = "give keywords";
  r.schema_id = "keywords.v1";
  r.stage = "keywords";
  return r;
}

class SlowProvider final : public Provider {
 public:
  explicit SlowProvider(std::chrono::milliseconds d) : delay_(d) {}
  ProviderReply generate(const ProviderCall&) override {
    std::this_thread::sleep_for(delay_);
    return {R"({"keywords": ["x"]})", 1, 1};
  }

 private:
  std::chrono::milliseconds delay_;
};

}  // namespace

// ---- schema validation ------------------------------------------------------

TEST(Schema, AcceptsValidAndReportsEachViolation) {
  const json schema = json::parse(R"({
    "type": "object", "required": ["a", "b"], "additionalProperties": false,
    "properties": {
      "a": {"type": "integer", "minimum": 0, "maximum": 5},
      "b": {"type": "array", "minItems": 1, "maxItems": 2, "items": {"type": "string", "enum": ["x", "y"]}},
      "c": {"type": "string", "minLength": 2, "maxLength": 3}
    }})");
  EXPECT_TRUE(validate_schema(schema, json::parse(R"({"a": 3, "b": ["x"]})")).empty());
  EXPECT_EQ(validate_schema(schema, json::parse(R"({"b": ["x"]})")).size(), 1u);
  EXPECT_EQ(validate_schema(schema, json::parse(R"({"a": 9, "b": ["z", "x", "y"], "c": "q", "d": 1})")).size(),
            5u);
  EXPECT_FALSE(validate_schema(schema, json::parse(R"({"a": 1.5, "b": ["x"]})")).empty());
  EXPECT_FALSE(validate_schema(schema, json::array()).empty());
}

TEST(Schema, MessagesCarryJsonPointers) {
  const json schema = json::parse(R"({"type": "array", "items": {"type": "number"}})");
  const auto v = validate_schema(schema, json::parse(R"([1, "two"])"));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("/1"), std::string::npos);
}

TEST(Schema, BundledSchemasLoad) {
  const auto reg = SchemaRegistry::load_dir(ns::asset_path("schemas"));
  for (const char* id : {"graph_extraction.v1", "citation_polarity.v1", "novelty_vote.v1", "novelty_report.v1",
                         "keywords.v1", "pairwise_judgment.v1", "relation_summary.v1", "abstract_terms.v1"}) {
    EXPECT_TRUE(reg.has(id)) << id;
  }
  EXPECT_EQ(code_of([&] { reg.get("nope"); }), ns::ErrorCode::kBadRequest);
}

// ---- cost -------------------------------------------------------------------

TEST(Cost, ExactPicodollarsPerCall) {
  CostLedger ledger(PricingTable::load(ns::asset_path("config/pricing.json")));
  // 0.10 USD per million input tokens is 100000 pUSD per token.
  const auto e = ledger.record("gemini-2.0-flash", {1234, 567}, "s");
  EXPECT_EQ(e.cost, 1234LL * 100000 + 567LL * 400000);
  EXPECT_EQ(code_of([&] { ledger.record("unknown-model", {1, 1}); }), ns::ErrorCode::kUnknownModel);
}

TEST(Cost, TotalsAreOrderIndependent) {
  const auto pricing = PricingTable::load(ns::asset_path("config/pricing.json"));
  std::vector<std::pair<std::string, Usage>> calls;
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    calls.push_back({i % 3 == 0 ? "gpt-4o-mini" : "gemini-2.0-flash",
                     {static_cast<std::int64_t>(rng() % 5000), static_cast<std::int64_t>(rng() % 800)}});
  }
  CostLedger a(pricing), b(pricing);
  Picodollars oracle = 0;
  for (const auto& [m, u] : calls) {
    a.record(m, u, "x");
    const auto& p = pricing.get(m);
    oracle += u.input_tokens * p.input_per_token + u.output_tokens * p.output_per_token;
  }
  std::shuffle(calls.begin(), calls.end(), rng);
  for (const auto& [m, u] : calls) b.record(m, u, "x");
  EXPECT_EQ(a.total().cost, oracle);
  EXPECT_EQ(a.snapshot().dump(), b.snapshot().dump());
  EXPECT_EQ(a.total().calls, 200);
}

TEST(Cost, ConcurrentRecordingLosesNothing) {
  CostLedger ledger(PricingTable::load(ns::asset_path("config/pricing.json")));
  std::vector<std::thread> ts;
  for (int t = 0; t < 4; ++t)
    ts.emplace_back([&] {
      for (int i = 0; i < 250; ++i) ledger.record("gemini-2.0-flash", {10, 10});
    });
  for (auto& t : ts) t.join();
  EXPECT_EQ(ledger.total().calls, 1000);
  EXPECT_EQ(ledger.total().cost, 1000LL * (10 * 100000 + 10 * 400000));
}

TEST(Cost, PricingRejectsNegativePrices) {
  EXPECT_THROW(PricingTable::from_json(json::parse(R"({"models": {"m": {"input_per_million": -1,
      "output_per_million": 1}}})")),
               ns::Error);
}

// ---- gateway ----------------------------------------------------------------

TEST(Gateway, ValidOutputOnFirstAttempt) {
  testsupport::MockLlm m;
  m.provider->set_responder("keywords.v1", [](const ProviderCall&) { return json{{"keywords", {"a", "b"}}}; });
  const auto r = m.gateway->complete(keywords_request(), {m.ledger, {}});
  EXPECT_EQ(r.attempts, 1);
  EXPECT_EQ(r.content["keywords"].size(), 2u);
  EXPECT_EQ(m.ledger->total().calls, 1);
  EXPECT_EQ(m.ledger->totals_by_stage().at("keywords").calls, 1);
}

TEST(Gateway, RepairsInvalidOutputWithFeedback) {
  testsupport::MockLlm m;
  m.provider->set_responder("keywords.v1", [](const ProviderCall&) { return json{{"keywords", {"ok"}}}; });
  m.provider->script("keywords.v1", {MockProvider::Outcome::raw("not json"),
                                     MockProvider::Outcome::raw(R"({"keywords": []})")});
  const auto r = m.gateway->complete(keywords_request(), {m.ledger, {}});
  EXPECT_EQ(r.attempts, 3);
  const auto hist = m.provider->history();
  ASSERT_EQ(hist.size(), 3u);
  ASSERT_EQ(hist[2].messages.size(), 5u);
  EXPECT_EQ(hist[2].messages[1].content, "not json");
  EXPECT_EQ(hist[2].messages[3].content, R"({"keywords": []})");
  // every attempt is billed
  EXPECT_EQ(m.ledger->total().calls, 3);
  EXPECT_EQ(r.input_tokens, m.ledger->total().input_tokens);
}

TEST(Gateway, SchemaFailureAfterThreeBadAnswers) {
  testsupport::MockLlm m;
  m.provider->script("keywords.v1", {MockProvider::Outcome::raw("{}"), MockProvider::Outcome::raw("{}"),
                                     MockProvider::Outcome::raw("{}")});
  EXPECT_EQ(code_of([&] { m.gateway->complete(keywords_request()); }), ns::ErrorCode::kSchemaFailure);
  EXPECT_EQ(m.provider->calls(), 3u);
}

TEST(Gateway, TransientProviderErrorsAreRetried) {
  testsupport::MockLlm m;
  m.provider->set_responder("keywords.v1", [](const ProviderCall&) { return json{{"keywords", {"a"}}}; });
  m.provider->script("keywords.v1", {MockProvider::Outcome::unavailable(), MockProvider::Outcome::pass()});
  EXPECT_EQ(m.gateway->complete(keywords_request()).attempts, 2);

  m.provider->script("keywords.v1", {MockProvider::Outcome::unavailable(), MockProvider::Outcome::unavailable(),
                                     MockProvider::Outcome::unavailable()});
  EXPECT_EQ(code_of([&] { m.gateway->complete(keywords_request()); }), ns::ErrorCode::kProviderUnavailable);
}

TEST(Gateway, RequestValidation) {
  testsupport::MockLlm m;
  auto r = keywords_request();
  r.model_id = "missing";
  EXPECT_EQ(code_of([&] { m.gateway->complete(r); }), ns::ErrorCode::kUnknownModel);
  r = keywords_request();
  r.temperature = -0.1;
  EXPECT_EQ(code_of([&] { m.gateway->complete(r); }), ns::ErrorCode::kBadRequest);
  r = keywords_request();
  r.max_output_tokens = 0;
  EXPECT_EQ(code_of([&] { m.gateway->complete(r); }), ns::ErrorCode::kBadRequest);
  EXPECT_EQ(m.provider->calls(), 0u);
}

TEST(Gateway, SlowProviderTimesOut) {
  GatewayOptions opts;
  opts.timeout = std::chrono::milliseconds(30);
  opts.max_attempts = 1;
  Gateway g(SchemaRegistry::load_dir(ns::asset_path("schemas")), opts);
  g.add_provider("slow", std::make_shared<SlowProvider>(std::chrono::milliseconds(300)));
  g.add_model({"gemini-2.0-flash", "slow", "x"});
  const auto t0 = std::chrono::steady_clock::now();
  EXPECT_EQ(code_of([&] { g.complete(keywords_request()); }), ns::ErrorCode::kTimeout);
  EXPECT_LT(std::chrono::steady_clock::now() - t0, std::chrono::milliseconds(250));
}

TEST(Gateway, CancellationStopsTheCall) {
  Gateway g(SchemaRegistry::load_dir(ns::asset_path("schemas")));
  g.add_provider("slow", std::make_shared<SlowProvider>(std::chrono::milliseconds(300)));
  g.add_model({"gemini-2.0-flash", "slow", "x"});
  ns::CancellationToken cancel;
  std::thread canceller([&] {
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    cancel.cancel();
  });
  const auto t0 = std::chrono::steady_clock::now();
  EXPECT_EQ(code_of([&] { g.complete(keywords_request(), {nullptr, cancel}); }), ns::ErrorCode::kCancelled);
  EXPECT_LT(std::chrono::steady_clock::now() - t0, std::chrono::milliseconds(250));
  canceller.join();
}

TEST(Gateway, UnstructuredRequestsReturnText) {
  testsupport::MockLlm m;
  m.provider->set_default_responder([](const ProviderCall& c) { return json("echo: " + c.original_user()); });
  auto r = keywords_request();
  r.schema_id.reset();
  EXPECT_EQ(m.gateway->complete(r).text(), "echo: give keywords");
}

TEST(Gateway, UsageFallsBackToEstimates) {
  testsupport::MockLlm m;
  m.provider->set_responder("keywords.v1", [](const ProviderCall&) { return json{{"keywords", {"abc"}}}; });
  const auto r = m.gateway->complete(keywords_request());
  EXPECT_EQ(r.input_tokens, estimate_tokens("give keywords"));
  EXPECT_EQ(r.output_tokens, estimate_tokens(R"({"keywords":["abc"]})"));
}

// ---- mock provider ----------------------------------------------------------

TEST(MockProvider, FixtureLookupByPromptHash) {
  MockProvider p;
  p.add_fixture("keywords.v1", "give keywords", json{{"keywords", {"fixed"}}});
  ProviderCall c;
  c.schema_id = "keywords.v1";
  c.messages.push_back({"user", "give keywords"});
  EXPECT_EQ(json::parse(p.generate(c).text)["keywords"][0], "fixed");
  c.messages[0].content = "other";
  EXPECT_EQ(code_of([&] { p.generate(c); }), ns::ErrorCode::kProviderUnavailable);
}

TEST(MockProvider, ResponderRepliesAreDeterministic) {
  testsupport::MockLlm a, b;
  ns::server::install_mock_responders(*a.provider);
  ns::server::install_mock_responders(*b.provider);
  const std::map<std::string, std::string> vars = {
      {"title", "A Paper"}, {"abstract", "We study sparse adapters for speech recognition on small data."}};
  const auto ra = a.handle().ask("keywords.v1", vars);
  const auto rb = b.handle().ask("keywords.v1", vars);
  EXPECT_EQ(ra.content, rb.content);
  EXPECT_EQ(ra.input_tokens, rb.input_tokens);
}

TEST(Prompts, RenderReplacesKnownPlaceholdersOnly) {
  EXPECT_EQ(render("{{a}} and {{b}} {{a}}", {{"a", "1"}}), "1 and {{b}} 1");
  PromptLibrary lib(ns::asset_path("prompts"));
  EXPECT_FALSE(lib.get("novelty_vote.v1").user.empty());
  EXPECT_EQ(code_of([&] { lib.get("nope"); }), ns::ErrorCode::kNotFound);
}

TEST(ChatCompletions, RequestBodyAndResponseParsing) {
  auto t = std::make_shared<testsupport::ScriptedTransport>();
  t->push_status(200, R"({"choices": [{"message": {"content": "{\"keywords\": [\"q\"]}"}}],
                          "usage": {"prompt_tokens": 11, "completion_tokens": 4}})");
  t->push_status(503);
  ChatCompletionsProvider p(t, "https://example.test/v1", "key");
  const json schema = json::parse(R"({"type": "object"})");
  ProviderCall c;
  c.model = "m";
  c.system = "sys";
  c.schema_id = "keywords.v1";
  c.schema = &schema;
  c.messages.push_back({"user", "u"});
  const auto reply = p.generate(c);
  EXPECT_EQ(reply.input_tokens, 11);
  EXPECT_EQ(reply.output_tokens, 4);
  const auto req = t->requests()[0];
  EXPECT_EQ(req.url, "https://example.test/v1/chat/completions");
  EXPECT_EQ(req.headers.at("Authorization"), "Bearer key");
  const auto body = json::parse(req.body);
  EXPECT_EQ(body["messages"][0]["role"], "system");
  EXPECT_EQ(body["response_format"]["type"], "json_schema");
  EXPECT_EQ(code_of([&] { p.generate(c); }), ns::ErrorCode::kProviderUnavailable);
}
