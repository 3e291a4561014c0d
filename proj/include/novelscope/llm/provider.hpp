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

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "novelscope/ingest/transport.hpp"

namespace novelscope::llm {

struct ChatMessage {
  std::string role;  // "user" or "assistant"
  std::string content;
};

// One wire-level attempt. `messages` starts with the original user prompt;
// repair rounds append the rejected answer and the validation errors.
struct ProviderCall {
  std::string model;  // provider-side model name
  std::string system;
  std::vector<ChatMessage> messages;
  std::optional<std::string> schema_id;
  const nlohmann::json* schema = nullptr;
  double temperature = 0.0;
  int max_output_tokens = 1024;
  std::optional<std::int64_t> seed;

  const std::string& original_user() const { return messages.front().content; }
};

struct ProviderReply {
  std::string text;
  std::int64_t input_tokens = 0;
  std::int64_t output_tokens = 0;
};

// Failures are reported as Error(kProviderUnavailable) or Error(kTimeout).
class Provider {
 public:
  virtual ~Provider() = default;
  virtual ProviderReply generate(const ProviderCall& call) = 0;
};

// Rough token estimate used wherever a provider reports no usage: one token
// per four bytes, rounded up.
std::int64_t estimate_tokens(std::string_view text);

// Input tokens for a call: system prompt plus every message.
std::int64_t estimate_input_tokens(const ProviderCall& call);

// Deterministic provider for tests and offline runs. Lookup order for a call:
//   1. the scripted outcome queue for the call's schema id,
//   2. a fixture registered for (schema id, sha256 of the original user text),
//   3. the responder registered for the schema id,
//   4. the default responder.
// The reply text is the fixture value serialized with dump(), or the string
// itself when the value is a JSON string.
class MockProvider final : public Provider {
 public:
  using Responder = std::function<nlohmann::json(const ProviderCall&)>;

  struct Outcome {
    enum class Kind { kUnavailable, kTimeout, kRaw, kPassThrough };
    Kind kind = Kind::kPassThrough;
    std::string text;  // for kRaw

    static Outcome unavailable() { return {Kind::kUnavailable, {}}; }
    static Outcome timeout() { return {Kind::kTimeout, {}}; }
    static Outcome raw(std::string t) { return {Kind::kRaw, std::move(t)}; }
    static Outcome pass() { return {Kind::kPassThrough, {}}; }
  };

  static std::string fixture_key(const std::string& schema_id, const std::string& user_text);

  void add_fixture(const std::string& schema_id, const std::string& user_text, nlohmann::json value);
  void set_responder(const std::string& schema_id, Responder r);
  void set_default_responder(Responder r);
  // Outcomes are consumed one per call before any other lookup. Use "" as the
  // schema id for unstructured requests.
  void script(const std::string& schema_id, std::vector<Outcome> outcomes);

  ProviderReply generate(const ProviderCall& call) override;

  std::size_t calls() const;
  std::vector<ProviderCall> history() const;  // schema pointer is cleared

 private:
  mutable std::mutex mu_;
  std::map<std::string, nlohmann::json> fixtures_;
  std::map<std::string, Responder> responders_;
  Responder default_responder_;
  std::map<std::string, std::deque<Outcome>> scripts_;
  std::vector<ProviderCall> history_;
};

// OpenAI-style chat completions endpoint (also served by Gemini's
// compatibility layer). Structured requests use response_format json_schema.
class ChatCompletionsProvider final : public Provider {
 public:
  ChatCompletionsProvider(std::shared_ptr<ingest::Transport> transport, std::string base_url,
                          std::string api_key);

  ProviderReply generate(const ProviderCall& call) override;

  static nlohmann::json request_body(const ProviderCall& call);

 private:
  std::shared_ptr<ingest::Transport> transport_;
  std::string base_url_;
  std::string api_key_;
};

}  // namespace novelscope::llm
