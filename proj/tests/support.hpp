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

#include <gtest/gtest.h>

#include <cstdlib>
#include <deque>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <string>

#include <unistd.h>

#include "novelscope/common/assets.hpp"
#include "novelscope/common/error.hpp"
#include "novelscope/common/text.hpp"
#include "novelscope/ingest/transport.hpp"
#include "novelscope/llm/gateway.hpp"
#include "novelscope/llm/handle.hpp"
#include "novelscope/llm/prompts.hpp"

namespace testsupport {

inline std::filesystem::path fixture_dir() { return NOVELSCOPE_FIXTURE_DIR; }
inline std::filesystem::path golden_dir() { return NOVELSCOPE_GOLDEN_DIR; }
inline std::filesystem::path fixture(const std::string& rel) { return fixture_dir() / rel; }

// Compares against tests/golden/<name>; UPDATE_GOLDEN=1 rewrites the file.
inline void expect_golden(const std::string& name, const std::string& actual) {
  const auto path = golden_dir() / name;
  const char* update = std::getenv("UPDATE_GOLDEN");
  if ((update && std::string(update) == "1") || !std::filesystem::exists(path)) {
    std::filesystem::create_directories(path.parent_path());
    novelscope::text::write_file(path.string(), actual);
    if (!(update && std::string(update) == "1")) {
      ADD_FAILURE() << "golden file " << path << " was missing and has been written; rerun";
    }
    return;
  }
  const std::string expected = novelscope::text::read_file(path.string());
  EXPECT_EQ(expected, actual) << "golden mismatch for " << name << " (UPDATE_GOLDEN=1 to refresh)";
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("novelscope-test-" + name + "-" +
                                                     std::to_string(::getpid()));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

// Transport answering from a queue of canned responses or errors.
class ScriptedTransport final : public novelscope::ingest::Transport {
 public:
  using Step = std::function<novelscope::ingest::HttpResponse(const novelscope::ingest::HttpRequest&)>;

  void push(Step s) {
    std::lock_guard lock(mu_);
    steps_.push_back(std::move(s));
  }
  void push_status(int status, std::string body = "") {
    push([status, body](const auto&) { return novelscope::ingest::HttpResponse{status, body, {}}; });
  }
  void set_fallback(Step s) { fallback_ = std::move(s); }

  novelscope::ingest::HttpResponse send(const novelscope::ingest::HttpRequest& r) override {
    Step s;
    {
      std::lock_guard lock(mu_);
      ++calls_;
      requests_.push_back(r);
      if (!steps_.empty()) {
        s = std::move(steps_.front());
        steps_.pop_front();
      } else {
        s = fallback_;
      }
    }
    if (!s) throw novelscope::Error(novelscope::ErrorCode::kUpstreamUnavailable, "no scripted response");
    return s(r);
  }
  int calls() const {
    std::lock_guard lock(mu_);
    return calls_;
  }
  std::vector<novelscope::ingest::HttpRequest> requests() const {
    std::lock_guard lock(mu_);
    return requests_;
  }

 private:
  mutable std::mutex mu_;
  std::deque<Step> steps_;
  Step fallback_;
  int calls_ = 0;
  std::vector<novelscope::ingest::HttpRequest> requests_;
};

// Gateway with one mock provider serving every rostered model, plus the
// bundled prompts and pricing.
struct MockLlm {
  std::shared_ptr<novelscope::llm::MockProvider> provider = std::make_shared<novelscope::llm::MockProvider>();
  std::shared_ptr<novelscope::llm::Gateway> gateway;
  std::shared_ptr<novelscope::llm::PromptLibrary> prompts;
  std::shared_ptr<novelscope::llm::CostLedger> ledger;

  explicit MockLlm(novelscope::llm::GatewayOptions opts = {}) {
    gateway = std::make_shared<novelscope::llm::Gateway>(
        novelscope::llm::SchemaRegistry::load_dir(novelscope::asset_path("schemas")), opts);
    gateway->add_provider("mock", provider);
    gateway->add_model({"gemini-2.0-flash", "mock", "gemini-2.0-flash"});
    gateway->add_model({"gpt-4o-mini", "mock", "gpt-4o-mini"});
    prompts = std::make_shared<novelscope::llm::PromptLibrary>(novelscope::asset_path("prompts"));
    ledger = std::make_shared<novelscope::llm::CostLedger>(
        novelscope::llm::PricingTable::load(novelscope::asset_path("config/pricing.json")));
  }

  novelscope::llm::LlmHandle handle(novelscope::CancellationToken cancel = {}) const {
    return {gateway.get(), prompts.get(), "gemini-2.0-flash", {ledger, cancel}};
  }
};

}  // namespace testsupport
