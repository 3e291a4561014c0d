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

#include <memory>
#include <string>
#include <string_view>

#include "json.hpp"
#include "novelscope/llm/provider.hpp"

namespace novelscope::server {

// Deterministic stand-ins for every structured task, computed from the
// prompt text alone. They make offline runs produce plausible, stable
// reports; they are not meant to be good at the tasks.
void install_mock_responders(llm::MockProvider& provider);

// Exposed for tests.
nlohmann::json mock_graph(const std::string& user_prompt);
nlohmann::json mock_polarity(const std::string& user_prompt);
nlohmann::json mock_abstract_terms(const std::string& user_prompt);
nlohmann::json mock_relation_summary(const std::string& user_prompt);
nlohmann::json mock_vote(const std::string& user_prompt, std::int64_t seed);
nlohmann::json mock_report(const std::string& user_prompt);
nlohmann::json mock_keywords(const std::string& user_prompt);
nlohmann::json mock_judgment(const std::string& user_prompt);

// Text between the first occurrence of `start` and the next `end` (or the
// end of the prompt when `end` is empty or absent), trimmed.
std::string prompt_section(std::string_view prompt, std::string_view start, std::string_view end);

}  // namespace novelscope::server
