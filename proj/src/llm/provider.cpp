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

#include "novelscope/llm/provider.hpp"

#include "novelscope/common/error.hpp"
#include "novelscope/common/text.hpp"

namespace novelscope::llm {

std::int64_t estimate_tokens(std::string_view text) {
  return static_cast<std::int64_t>((text.size() + 3) / 4);
}

std::int64_t estimate_input_tokens(const ProviderCall& call) {
  std::int64_t n = estimate_tokens(call.system);
  for (const auto& m : call.messages) n += estimate_tokens(m.content);
  return n;
}

std::string MockProvider::fixture_key(const std::string& schema_id, const std::string& user_text) {
  return schema_id + "#" + text::sha256_hex(user_text);
}

void MockProvider::add_fixture(const std::string& schema_id, const std::string& user_text,
                               nlohmann::json value) {
  std::lock_guard lock(mu_);
  fixtures_[fixture_key(schema_id, user_text)] = std::move(value);
}

void MockProvider::set_responder(const std::string& schema_id, Responder r) {
  std::lock_guard lock(mu_);
  responders_[schema_id] = std::move(r);
}

void MockProvider::set_default_responder(Responder r) {
  std::lock_guard lock(mu_);
  default_responder_ = std::move(r);
}

void MockProvider::script(const std::string& schema_id, std::vector<Outcome> outcomes) {
  std::lock_guard lock(mu_);
  auto& q = scripts_[schema_id];
  for (auto& o : outcomes) q.push_back(std::move(o));
}

ProviderReply MockProvider::generate(const ProviderCall& call) {
  const std::string schema_id = call.schema_id.value_or("");
  std::optional<nlohmann::json> value;
  Responder responder;
  {
    std::lock_guard lock(mu_);
    ProviderCall recorded = call;
    recorded.schema = nullptr;
    history_.push_back(std::move(recorded));

    auto qs = scripts_.find(schema_id);
    if (qs != scripts_.end() && !qs->second.empty()) {
      Outcome o = qs->second.front();
      qs->second.pop_front();
      switch (o.kind) {
        case Outcome::Kind::kUnavailable:
          throw Error(ErrorCode::kProviderUnavailable, "mock provider scripted failure");
        case Outcome::Kind::kTimeout:
          throw Error(ErrorCode::kTimeout, "mock provider scripted timeout");
        case Outcome::Kind::kRaw:
          return {o.text, estimate_input_tokens(call), estimate_tokens(o.text)};
        case Outcome::Kind::kPassThrough:
          break;
      }
    }
    if (auto f = fixtures_.find(fixture_key(schema_id, call.original_user())); f != fixtures_.end()) {
      value = f->second;
    } else if (auto r = responders_.find(schema_id); r != responders_.end()) {
      responder = r->second;
    } else {
      responder = default_responder_;
    }
  }
  if (!value) {
    // Responders run outside the lock; they may be slow or reentrant.
    if (!responder) {
      throw Error(ErrorCode::kProviderUnavailable, "mock provider has no answer for schema '" +
                                                       schema_id + "'");
    }
    value = responder(call);
  }
  std::string out = value->is_string() ? value->get<std::string>() : value->dump();
  return {out, estimate_input_tokens(call), estimate_tokens(out)};
}

std::size_t MockProvider::calls() const {
  std::lock_guard lock(mu_);
  return history_.size();
}

std::vector<ProviderCall> MockProvider::history() const {
  std::lock_guard lock(mu_);
  return history_;
}

ChatCompletionsProvider::ChatCompletionsProvider(std::shared_ptr<ingest::Transport> transport,
                                                 std::string base_url, std::string api_key)
    : transport_(std::move(transport)), base_url_(std::move(base_url)), api_key_(std::move(api_key)) {}

nlohmann::json ChatCompletionsProvider::request_body(const ProviderCall& call) {
  nlohmann::json messages = nlohmann::json::array();
  if (!call.system.empty()) messages.push_back({{"role", "system"}, {"content", call.system}});
  for (const auto& m : call.messages) messages.push_back({{"role", m.role}, {"content", m.content}});
  nlohmann::json body = {{"model", call.model},
                         {"messages", messages},
                         {"temperature", call.temperature},
                         {"max_tokens", call.max_output_tokens}};
  if (call.seed) body["seed"] = *call.seed;
  if (call.schema) {
    body["response_format"] = {
        {"type", "json_schema"},
        {"json_schema", {{"name", call.schema_id.value_or("output")}, {"schema", *call.schema}}}};
  }
  return body;
}

ProviderReply ChatCompletionsProvider::generate(const ProviderCall& call) {
  ingest::HttpRequest req;
  req.method = "POST";
  req.url = base_url_ + "/chat/completions";
  req.headers = {{"Content-Type", "application/json"}, {"Authorization", "Bearer " + api_key_}};
  req.body = request_body(call).dump();
  ingest::HttpResponse resp;
  try {
    resp = transport_->send(req);
  } catch (const Error& e) {
    throw Error(ErrorCode::kProviderUnavailable, e.what());
  }
  if (resp.status == 408 || resp.status == 504) {
    throw Error(ErrorCode::kTimeout, "model provider timed out");
  }
  if (resp.status < 200 || resp.status >= 300) {
    throw Error(ErrorCode::kProviderUnavailable,
                "model provider returned HTTP " + std::to_string(resp.status));
  }
  try {
    auto j = nlohmann::json::parse(resp.body);
    ProviderReply reply;
    reply.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
    if (auto u = j.find("usage"); u != j.end() && u->is_object()) {
      reply.input_tokens = u->value("prompt_tokens", std::int64_t{0});
      reply.output_tokens = u->value("completion_tokens", std::int64_t{0});
    } else {
      reply.input_tokens = estimate_input_tokens(call);
      reply.output_tokens = estimate_tokens(reply.text);
    }
    return reply;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kProviderUnavailable, std::string("malformed provider response: ") + e.what());
  }
}

}  // namespace novelscope::llm
