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
#include <string>
#include <vector>

#include "json.hpp"

namespace novelscope::llm {

// Validates `value` against the JSON Schema subset used by the structured
// output assets: type, properties, required, additionalProperties (bool),
// enum, items, minItems, maxItems, minLength, maxLength, minimum, maximum.
// Returns one message per violation, prefixed with a JSON pointer.
std::vector<std::string> validate_schema(const nlohmann::json& schema,
                                         const nlohmann::json& value);

// Schemas keyed by id; the id of a file is its name without ".json".
class SchemaRegistry {
 public:
  [[nodiscard]] static SchemaRegistry load_dir(const std::string& dir);

  void add(const std::string& id, nlohmann::json schema);
  bool has(const std::string& id) const { return schemas_.contains(id); }
  const nlohmann::json& get(const std::string& id) const;
  std::vector<std::string> ids() const;

 private:
  std::map<std::string, nlohmann::json> schemas_;
};

}  // namespace novelscope::llm
