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
#include <mutex>
#include <string>

namespace novelscope::llm {

// Prompt templates live in <asset dir>/prompts/<name>.txt. A template may
// hold a system part and a user part separated by a line "=== user ===".
struct PromptTemplate {
  std::string system;
  std::string user;
};

class PromptLibrary {
 public:
  explicit PromptLibrary(std::string dir);

  // Cached after the first load. Throws kNotFound for a missing template.
  const PromptTemplate& get(const std::string& name);

 private:
  std::string dir_;
  std::mutex mu_;
  std::map<std::string, PromptTemplate> cache_;
};

// Replaces every {{key}} with its value. Unknown placeholders are left as is.
std::string render(const std::string& tmpl, const std::map<std::string, std::string>& vars);

}  // namespace novelscope::llm
