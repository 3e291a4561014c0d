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

#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "novelscope/common/cancel.hpp"
#include "novelscope/llm/cost.hpp"
#include "novelscope/llm/provider.hpp"
#include "novelscope/llm/schema.hpp"

namespace novelscope::llm {

struct ModelRequest {
  std::string model_id;
  std::string system;
  std::string user;
  std::optional<std::string> schema_id;
  double temperature = 0.0;
  int max_output_tokens = 1024;
  std::optional<std::int64_t> seed;
  std::string stage;  // cost ledger tag
};

struct ModelResponse {
  // Parsed and validated value for structured requests; a JSON string otherwise.
  nlohmann::json content;
  std::int64_t input_tokens = 0;   // summed over attempts
  std::int64_t output_tokens = 0;  // summed over attempts
  std::chrono::milliseconds latency{0};
  int attempts = 0;

  const std::string& text() const { return content.get_ref<const std::string&>(); }
};

// Roster entry: the id callers use, the provider that serves it and the
// provider-side model name.
struct ModelConfig {
  std::string id;
  std::string provider;
  std::string provider_model;
};

// Roster file: {"models": [{"id", "provider", "provider_model"}]}
std::vector<ModelConfig> load_model_roster(const std::string& path);

struct GatewayOptions {
  int max_attempts = 3;  // first try plus two re-prompts
  std::chrono::milliseconds timeout{120000};
  int max_concurrent_per_provider = 8;
};

// Per-evaluation state threaded through every call.
struct CallContext {
  std::shared_ptr<CostLedger> ledger;
  CancellationToken cancel;
};

class Gateway {
 public:
  Gateway(SchemaRegistry schemas, GatewayOptions options = {});
  ~Gateway();

  void add_provider(const std::string& name, std::shared_ptr<Provider> provider);
  void add_model(const ModelConfig& model);

  bool has_model(const std::string& id) const { return models_.contains(id); }
  std::vector<std::string> models() const;
  const SchemaRegistry& schemas() const { return schemas_; }
  const GatewayOptions& options() const { return options_; }

  // Sends the request, validating structured output against its schema.
  // Invalid output or a transient provider failure uses up one attempt;
  // re-prompts carry the rejected answer and the validation errors.
  // Errors: kUnknownModel, kBadRequest, kSchemaFailure, kProviderUnavailable,
  // kTimeout, kCancelled.
  ModelResponse complete(const ModelRequest& request, const CallContext& ctx = {});

  // Total provider calls made through this gateway, all attempts included.
  std::int64_t provider_calls() const;

 private:
  class Slots;

  ProviderReply attempt(const std::string& provider_name, const ProviderCall& call,
                        const CallContext& ctx);

  SchemaRegistry schemas_;
  GatewayOptions options_;
  std::map<std::string, std::shared_ptr<Provider>> providers_;
  std::map<std::string, std::shared_ptr<Slots>> slots_;
  std::map<std::string, ModelConfig> models_;
  std::atomic<std::int64_t> provider_calls_{0};
};

// Appended to the conversation after output fails validation.
std::string repair_message(const std::vector<std::string>& violations);

}  // namespace novelscope::llm
