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

#include "novelscope/llm/gateway.hpp"

#include <condition_variable>
#include <future>
#include <thread>

#include "novelscope/common/error.hpp"
#include "novelscope/common/text.hpp"

namespace novelscope::llm {

namespace {

constexpr auto kPollInterval = std::chrono::milliseconds(20);

// Models often wrap JSON in a markdown fence; accept that.
std::string strip_fence(const std::string& raw) {
  std::string s = text::trim(raw);
  if (s.rfind("```", 0) != 0) return s;
  auto first_nl = s.find('\n');
  auto last = s.rfind("```");
  if (first_nl == std::string::npos || last <= first_nl) return s;
  return text::trim(s.substr(first_nl + 1, last - first_nl - 1));
}

}  // namespace

// Counting semaphore whose waits give up on cancellation.
class Gateway::Slots {
 public:
  explicit Slots(int n) : free_(n) {}

  void acquire(const CancellationToken& cancel) {
    std::unique_lock lock(mu_);
    while (free_ == 0) {
      cv_.wait_for(lock, kPollInterval);
      cancel.throw_if_cancelled();
    }
    --free_;
  }

  void release() {
    {
      std::lock_guard lock(mu_);
      ++free_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int free_;
};

std::vector<ModelConfig> load_model_roster(const std::string& path) {
  auto j = nlohmann::json::parse(text::read_file(path));
  std::vector<ModelConfig> out;
  for (const auto& m : j.at("models")) {
    out.push_back({m.at("id").get<std::string>(), m.at("provider").get<std::string>(),
                   m.value("provider_model", m.at("id").get<std::string>())});
  }
  return out;
}

std::string repair_message(const std::vector<std::string>& violations) {
  std::string msg =
      "Your previous answer did not match the required JSON schema. Problems found:\n";
  for (const auto& v : violations) msg += "- " + v + "\n";
  msg += "Answer again with a single JSON value that satisfies the schema. Do not add commentary.";
  return msg;
}

Gateway::Gateway(SchemaRegistry schemas, GatewayOptions options)
    : schemas_(std::move(schemas)), options_(options) {}

Gateway::~Gateway() = default;

void Gateway::add_provider(const std::string& name, std::shared_ptr<Provider> provider) {
  providers_[name] = std::move(provider);
  slots_[name] = std::make_shared<Slots>(options_.max_concurrent_per_provider);
}

void Gateway::add_model(const ModelConfig& model) {
  if (!providers_.contains(model.provider)) {
    throw Error(ErrorCode::kBadRequest, "model " + model.id + " names unknown provider " + model.provider);
  }
  models_[model.id] = model;
}

std::vector<std::string> Gateway::models() const {
  std::vector<std::string> out;
  for (const auto& [id, _] : models_) out.push_back(id);
  return out;
}

std::int64_t Gateway::provider_calls() const { return provider_calls_.load(); }

ProviderReply Gateway::attempt(const std::string& provider_name, const ProviderCall& call,
                               const CallContext& ctx) {
  auto slots = slots_.at(provider_name);
  slots->acquire(ctx.cancel);
  provider_calls_.fetch_add(1);

  // The provider runs on its own thread so a hung call can be abandoned on
  // timeout or cancellation. The thread owns copies of everything it touches.
  auto promise = std::make_shared<std::promise<ProviderReply>>();
  auto future = promise->get_future();
  auto schema_copy = call.schema ? std::make_shared<nlohmann::json>(*call.schema) : nullptr;
  std::thread worker([provider = providers_.at(provider_name), call = ProviderCall(call), schema_copy, promise,
                      slots]() mutable {
    call.schema = schema_copy.get();
    try {
      promise->set_value(provider->generate(call));
    } catch (...) {
      promise->set_exception(std::current_exception());
    }
    slots->release();
  });

  const auto deadline = std::chrono::steady_clock::now() + options_.timeout;
  while (future.wait_for(kPollInterval) != std::future_status::ready) {
    if (ctx.cancel.cancelled() || std::chrono::steady_clock::now() >= deadline) {
      worker.detach();
      ctx.cancel.throw_if_cancelled();
      throw Error(ErrorCode::kTimeout, "model call exceeded " +
                                           std::to_string(options_.timeout.count()) + " ms");
    }
  }
  worker.join();
  return future.get();
}

ModelResponse Gateway::complete(const ModelRequest& request, const CallContext& ctx) {
  auto model = models_.find(request.model_id);
  if (model == models_.end()) {
    throw Error(ErrorCode::kUnknownModel, "model " + request.model_id + " is not configured");
  }
  if (ctx.ledger && !ctx.ledger->pricing().has(request.model_id)) {
    throw Error(ErrorCode::kUnknownModel, "no pricing for model " + request.model_id);
  }
  if (request.temperature < 0 || request.max_output_tokens <= 0) {
    throw Error(ErrorCode::kBadRequest, "temperature must be >= 0 and max_output_tokens > 0");
  }
  const nlohmann::json* schema = nullptr;
  if (request.schema_id) schema = &schemas_.get(*request.schema_id);

  ProviderCall call;
  call.model = model->second.provider_model;
  call.system = request.system;
  call.messages.push_back({"user", request.user});
  call.schema_id = request.schema_id;
  call.schema = schema;
  call.temperature = request.temperature;
  call.max_output_tokens = request.max_output_tokens;
  call.seed = request.seed;

  ModelResponse response;
  const auto started = std::chrono::steady_clock::now();
  std::optional<Error> last_provider_error;
  std::vector<std::string> last_violations;

  for (int i = 0; i < options_.max_attempts; ++i) {
    ctx.cancel.throw_if_cancelled();
    response.attempts = i + 1;
    ProviderReply reply;
    try {
      reply = attempt(model->second.provider, call, ctx);
    } catch (const Error& e) {
      if (!is_transient(e.code())) throw;
      last_provider_error = e;
      continue;
    }
    response.input_tokens += reply.input_tokens;
    response.output_tokens += reply.output_tokens;
    if (ctx.ledger) {
      ctx.ledger->record(request.model_id, {reply.input_tokens, reply.output_tokens}, request.stage);
    }
    if (!schema) {
      response.content = reply.text;
      response.latency = std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - started);
      return response;
    }
    std::vector<std::string> violations;
    nlohmann::json parsed = nlohmann::json::parse(strip_fence(reply.text), nullptr, false);
    if (parsed.is_discarded()) {
      violations.push_back("output is not valid JSON");
    } else {
      violations = validate_schema(*schema, parsed);
    }
    if (violations.empty()) {
      response.content = std::move(parsed);
      response.latency = std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - started);
      return response;
    }
    last_violations = violations;
    last_provider_error.reset();
    call.messages.push_back({"assistant", reply.text});
    call.messages.push_back({"user", repair_message(violations)});
  }

  if (last_provider_error) {
    throw Error(last_provider_error->code(),
                "model call failed after " + std::to_string(options_.max_attempts) +
                    " attempts: " + last_provider_error->what());
  }
  throw Error(ErrorCode::kSchemaFailure,
              "output failed schema " + request.schema_id.value_or("") + " after " +
                  std::to_string(options_.max_attempts) + " attempts: " +
                  text::join(last_violations, "; "));
}

}  // namespace novelscope::llm
