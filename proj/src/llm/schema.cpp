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

#include "novelscope/llm/schema.hpp"

#include <filesystem>

#include "novelscope/common/error.hpp"
#include "novelscope/common/text.hpp"

namespace novelscope::llm {

namespace {

bool type_matches(const std::string& type, const nlohmann::json& v) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "integer") return v.is_number_integer();
  if (type == "number") return v.is_number();
  if (type == "boolean") return v.is_boolean();
  if (type == "null") return v.is_null();
  return false;
}

void validate_at(const nlohmann::json& schema, const nlohmann::json& v, const std::string& path,
                 std::vector<std::string>& errors) {
  const std::string where = path.empty() ? "/" : path;
  if (auto t = schema.find("type"); t != schema.end()) {
    bool ok = false;
    if (t->is_string()) {
      ok = type_matches(t->get<std::string>(), v);
    } else if (t->is_array()) {
      for (const auto& alt : *t) ok = ok || type_matches(alt.get<std::string>(), v);
    }
    if (!ok) {
      errors.push_back(where + ": expected type " + t->dump() + ", got " + v.type_name());
      return;
    }
  }
  if (auto e = schema.find("enum"); e != schema.end()) {
    bool found = false;
    for (const auto& option : *e) found = found || option == v;
    if (!found) errors.push_back(where + ": value " + v.dump() + " not in " + e->dump());
  }
  if (v.is_string()) {
    const auto len = v.get_ref<const std::string&>().size();
    if (schema.contains("minLength") && len < schema["minLength"].get<std::size_t>()) {
      errors.push_back(where + ": string shorter than " + schema["minLength"].dump());
    }
    if (schema.contains("maxLength") && len > schema["maxLength"].get<std::size_t>()) {
      errors.push_back(where + ": string longer than " + schema["maxLength"].dump());
    }
  }
  if (v.is_number()) {
    const double x = v.get<double>();
    if (schema.contains("minimum") && x < schema["minimum"].get<double>()) {
      errors.push_back(where + ": below minimum " + schema["minimum"].dump());
    }
    if (schema.contains("maximum") && x > schema["maximum"].get<double>()) {
      errors.push_back(where + ": above maximum " + schema["maximum"].dump());
    }
  }
  if (v.is_array()) {
    if (schema.contains("minItems") && v.size() < schema["minItems"].get<std::size_t>()) {
      errors.push_back(where + ": fewer than " + schema["minItems"].dump() + " items");
    }
    if (schema.contains("maxItems") && v.size() > schema["maxItems"].get<std::size_t>()) {
      errors.push_back(where + ": more than " + schema["maxItems"].dump() + " items");
    }
    if (auto items = schema.find("items"); items != schema.end()) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        validate_at(*items, v[i], path + "/" + std::to_string(i), errors);
      }
    }
  }
  if (v.is_object()) {
    const auto props = schema.find("properties");
    if (auto req = schema.find("required"); req != schema.end()) {
      for (const auto& name : *req) {
        if (!v.contains(name.get<std::string>())) {
          errors.push_back(where + ": missing required property \"" + name.get<std::string>() + "\"");
        }
      }
    }
    for (const auto& [key, child] : v.items()) {
      if (props != schema.end() && props->contains(key)) {
        validate_at((*props)[key], child, path + "/" + key, errors);
      } else if (schema.value("additionalProperties", true) == false) {
        errors.push_back(where + ": unexpected property \"" + key + "\"");
      }
    }
  }
}

}  // namespace

std::vector<std::string> validate_schema(const nlohmann::json& schema, const nlohmann::json& value) {
  std::vector<std::string> errors;
  validate_at(schema, value, "", errors);
  return errors;
}

SchemaRegistry SchemaRegistry::load_dir(const std::string& dir) {
  SchemaRegistry reg;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    reg.add(entry.path().stem().string(),
            nlohmann::json::parse(text::read_file(entry.path().string())));
  }
  return reg;
}

void SchemaRegistry::add(const std::string& id, nlohmann::json schema) {
  schemas_[id] = std::move(schema);
}

const nlohmann::json& SchemaRegistry::get(const std::string& id) const {
  auto it = schemas_.find(id);
  if (it == schemas_.end()) throw Error(ErrorCode::kBadRequest, "unknown schema " + id);
  return it->second;
}

std::vector<std::string> SchemaRegistry::ids() const {
  std::vector<std::string> out;
  for (const auto& [id, _] : schemas_) out.push_back(id);
  return out;
}

}  // namespace novelscope::llm
