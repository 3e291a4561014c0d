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

#include <map>
#include <optional>
#include <string>

#include "novelscope/llm/gateway.hpp"
#include "novelscope/llm/prompts.hpp"

namespace novelscope::llm {

struct AskOptions {
  double temperature = 0.0;
  std::optional<std::int64_t> seed;
  int max_output_tokens = 2048;
  std::string stage;
};

// What pipeline steps need to talk to a model: the gateway, the prompt
// assets, the chosen model and the per-evaluation call context. Prompt
// templates and schemas share ids, e.g. "graph_extraction.v1".
struct LlmHandle {
  Gateway* gateway = nullptr;
  PromptLibrary* prompts = nullptr;
  std::string model_id;
  CallContext ctx;

  // Renders the template `task`, sends it constrained by the schema of the
  // same id and returns the validated value.
  ModelResponse ask(const std::string& task, const std::map<std::string, std::string>& vars,
                    const AskOptions& options = {}) const;

  // The user prompt `ask` would send; mock fixtures are keyed by it.
  std::string user_prompt(const std::string& task,
                          const std::map<std::string, std::string>& vars) const;
};

}  // namespace novelscope::llm
