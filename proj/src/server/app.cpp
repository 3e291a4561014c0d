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

#include "novelscope/server/app.hpp"

#include <cstdlib>

#include "novelscope/common/assets.hpp"
#include "novelscope/common/error.hpp"
#include "novelscope/common/text.hpp"
#include "novelscope/server/mock_responders.hpp"

namespace novelscope::server {

namespace {

std::string env_or_empty(const char* name) {
  const char* v = std::getenv(name);
  return v ? v : "";
}

}  // namespace

App build_app(const AppConfig& config) {
  App app;
  app.config = config;
  if (app.config.library_dir.empty()) app.config.library_dir = config.data_dir / "results";
  std::filesystem::create_directories(config.data_dir / "cache");

  if (config.fake_clock) {
    app.clock = std::make_shared<FakeClock>();
  } else {
    app.clock = std::make_shared<SystemClock>();
  }
  if (config.fixtures_dir) {
    app.transport = std::make_shared<ingest::FixtureTransport>(*config.fixtures_dir);
  } else {
    app.transport = std::make_shared<ingest::HttpTransport>();
  }
  app.counting = std::make_shared<ingest::CountingTransport>(app.transport);

  auto cache = std::make_shared<ingest::DiskCache>(config.data_dir / "cache", app.clock);
  const std::string version = "novelscope-pipeline/1";
  auto arxiv_up = std::make_shared<ingest::UpstreamClient>(
      app.counting, cache, std::make_shared<ingest::RateLimiter>(config.arxiv_rps, app.clock), app.clock,
      ingest::RetryPolicy{}, version);
  auto scholar_up = std::make_shared<ingest::UpstreamClient>(
      app.counting, cache, std::make_shared<ingest::RateLimiter>(config.scholar_rps, app.clock), app.clock,
      ingest::RetryPolicy{}, version);
  app.arxiv = std::make_shared<ingest::ArxivClient>(arxiv_up);
  ingest::ScholarEndpoints s2;
  s2.api_key = env_or_empty("S2_API_KEY");
  app.scholar = std::make_shared<ingest::ScholarClient>(scholar_up, s2);

  app.gateway = std::make_shared<llm::Gateway>(llm::SchemaRegistry::load_dir(asset_path("schemas")));

  const std::string models_path = config.models_path.empty() ? asset_path("config/models.json") : config.models_path;
  const auto roster = llm::load_model_roster(models_path);
  if (config.provider == "mock") {
    app.mock = std::make_shared<llm::MockProvider>();
    install_mock_responders(*app.mock);
    app.gateway->add_provider("mock", app.mock);
    for (auto m : roster) {
      m.provider = "mock";
      app.gateway->add_model(m);
    }
  } else if (config.provider == "live") {
    const auto doc = nlohmann::json::parse(text::read_file(models_path));
    for (const auto& [name, p] : doc.value("providers", nlohmann::json::object()).items()) {
      app.gateway->add_provider(name, std::make_shared<llm::ChatCompletionsProvider>(
                                          app.transport, p.at("base_url").get<std::string>(),
                                          env_or_empty(p.value("api_key_env", "").c_str())));
    }
    for (const auto& m : roster) app.gateway->add_model(m);
  } else {
    throw Error(ErrorCode::kBadRequest, "unknown provider mode: " + config.provider);
  }

  app.pricing = std::make_shared<const llm::PricingTable>(
      llm::PricingTable::load(config.pricing_path.empty() ? asset_path("config/pricing.json") : config.pricing_path));

  std::shared_ptr<retrieval::EmbeddingProvider> embedder;
  if (config.embedding_url.empty()) {
    embedder = std::make_shared<retrieval::HashingEmbedder>();
  } else {
    embedder = std::make_shared<retrieval::RemoteEmbedder>(app.transport, config.embedding_url,
                                                           env_or_empty("EMBEDDING_API_KEY"));
  }

  PipelineDeps deps;
  deps.arxiv = app.arxiv;
  deps.scholar = app.scholar;
  deps.gateway = app.gateway;
  deps.prompts = std::make_shared<llm::PromptLibrary>(asset_path("prompts"));
  deps.embedder = embedder;
  deps.pricing = app.pricing;
  deps.clock = app.clock;
  deps.pipeline_version = version;
  deps.parallelism = config.parallelism;
  app.pipeline = std::make_shared<Pipeline>(std::move(deps));
  app.store = std::make_shared<ResultStore>(app.config.library_dir);

  ServiceOptions opts;
  opts.max_concurrent = config.max_concurrent;
  app.service = std::make_shared<EvaluationService>(app.pipeline, app.store, opts);
  return app;
}

}  // namespace novelscope::server
