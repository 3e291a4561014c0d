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

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "novelscope/ingest/transport.hpp"
#include "novelscope/llm/cost.hpp"
#include "novelscope/llm/provider.hpp"
#include "novelscope/server/pipeline.hpp"
#include "novelscope/server/service.hpp"

namespace novelscope::server {

struct AppConfig {
  std::filesystem::path data_dir = "novelscope-data";  // cache/ and results/ live here
  std::filesystem::path library_dir;                    // defaults to data_dir/results
  std::optional<std::filesystem::path> fixtures_dir;    // recorded HTTP responses
  std::string provider = "mock";                        // mock | live
  std::string models_path;                              // defaults to the bundled roster
  std::string pricing_path;                             // defaults to the bundled pricing
  std::string embedding_url;                            // empty: local hashing embedder
  // Fixed start time that advances only on sleeps; makes fixture runs
  // byte-stable and skips rate-limit waits.
  bool fake_clock = false;
  int arxiv_rps = 1;
  int scholar_rps = 1;
  int max_concurrent = 2;
  std::size_t parallelism = 4;
};

// Everything one process needs, assembled from a config.
struct App {
  AppConfig config;
  std::shared_ptr<Clock> clock;
  std::shared_ptr<ingest::Transport> transport;
  std::shared_ptr<ingest::CountingTransport> counting;  // wraps transport
  std::shared_ptr<ingest::ArxivClient> arxiv;
  std::shared_ptr<ingest::ScholarClient> scholar;
  std::shared_ptr<llm::MockProvider> mock;  // null for live providers
  std::shared_ptr<llm::Gateway> gateway;
  std::shared_ptr<const llm::PricingTable> pricing;
  std::shared_ptr<Pipeline> pipeline;
  std::shared_ptr<ResultStore> store;
  std::shared_ptr<EvaluationService> service;
};

// Environment: S2_API_KEY for Semantic Scholar; provider keys as named in
// the roster's api_key_env fields; EMBEDDING_API_KEY for a remote embedder.
App build_app(const AppConfig& config);

}  // namespace novelscope::server
