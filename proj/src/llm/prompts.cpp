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

#include "novelscope/llm/prompts.hpp"

#include "novelscope/common/text.hpp"

namespace novelscope::llm {

namespace {
constexpr std::string_view kUserMarker = "=== user ===";
}

PromptLibrary::PromptLibrary(std::string dir) : dir_(std::move(dir)) {}

const PromptTemplate& PromptLibrary::get(const std::string& name) {
  std::lock_guard lock(mu_);
  if (auto it = cache_.find(name); it != cache_.end()) return it->second;
  const std::string raw = text::read_file(dir_ + "/" + name + ".txt");
  PromptTemplate t;
  auto pos = raw.find(kUserMarker);
  if (pos == std::string::npos) {
    t.user = text::trim(raw);
  } else {
    t.system = text::trim(raw.substr(0, pos));
    t.user = text::trim(raw.substr(pos + kUserMarker.size()));
  }
  return cache_.emplace(name, std::move(t)).first->second;
}

std::string render(const std::string& tmpl, const std::map<std::string, std::string>& vars) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    auto open = tmpl.find("{{", i);
    if (open == std::string::npos) break;
    auto close = tmpl.find("}}", open + 2);
    if (close == std::string::npos) break;
    out.append(tmpl, i, open - i);
    const std::string key = tmpl.substr(open + 2, close - open - 2);
    if (auto v = vars.find(key); v != vars.end()) {
      out += v->second;
    } else {
      out.append(tmpl, open, close + 2 - open);
    }
    i = close + 2;
  }
  out.append(tmpl, i, std::string::npos);
  return out;
}

}  // namespace novelscope::llm
