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

#include "novelscope/server/store.hpp"

#include <algorithm>
#include <fstream>
#include <regex>

#include "novelscope/common/text.hpp"

namespace novelscope::server {

namespace fs = std::filesystem;

namespace {

std::optional<nlohmann::json> read_json(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) return std::nullopt;
  return j;
}

bool safe_id(const std::string& id) {
  static const std::regex pattern("^[A-Za-z0-9._-]+$");
  return std::regex_match(id, pattern) && id.find("..") == std::string::npos;
}

}  // namespace

std::string evaluation_cache_key(const EvaluateRequest& r, const std::string& pipeline_version,
                                 const Ablation& ablation) {
  nlohmann::json j = to_json(r);
  j["kind"] = "evaluate";
  j["pipeline_version"] = pipeline_version;
  j["ablation"] = ablation.to_json();
  return text::sha256_hex(j.dump());
}

std::string abstract_cache_key(const AbstractRequest& r, const std::string& pipeline_version) {
  nlohmann::json j = to_json(r);
  j["kind"] = "abstract";
  j["pipeline_version"] = pipeline_version;
  return text::sha256_hex(j.dump());
}

ResultStore::ResultStore(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

std::optional<nlohmann::json> ResultStore::get(const std::string& key) const {
  if (!safe_id(key)) return std::nullopt;
  return read_json(dir_ / (key + ".json"));
}

bool ResultStore::contains(const std::string& key) const {
  return safe_id(key) && fs::exists(dir_ / (key + ".json"));
}

bool ResultStore::put(const std::string& key, const nlohmann::json& value) {
  if (!safe_id(key)) return false;
  std::lock_guard lock(write_mu_);
  const fs::path target = dir_ / (key + ".json");
  if (fs::exists(target)) return false;
  const fs::path tmp = dir_ / ("." + key + ".tmp");
  text::write_file(tmp.string(), value.dump(2) + "\n");
  fs::rename(tmp, target);
  return true;
}

nlohmann::json to_json(const LibraryEntry& e) {
  return {{"id", e.id},
          {"title", e.title},
          {"abstract", e.abstract},
          {"venue", e.venue},
          {"year", e.year ? nlohmann::json(*e.year) : nlohmann::json(nullptr)},
          {"score", e.score},
          {"label", e.label}};
}

std::vector<LibraryEntry> list_library(const fs::path& dir, std::vector<std::string>* warnings) {
  std::vector<LibraryEntry> out;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return out;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    auto j = read_json(f);
    try {
      if (!j) throw std::runtime_error("not valid JSON");
      const auto& paper = j->at("paper");
      const auto& report = j->at("report");
      LibraryEntry e;
      e.id = f.stem().string();
      e.title = paper.at("title").get<std::string>();
      e.abstract = paper.value("abstract", std::string{});
      e.venue = paper.value("venue", nlohmann::json(nullptr)).is_string() ? paper["venue"].get<std::string>() : "";
      if (paper.contains("year") && paper["year"].is_number_integer()) e.year = paper["year"].get<int>();
      e.score = report.at("score").get<double>();
      e.label = report.at("label").get<std::string>();
      out.push_back(std::move(e));
    } catch (const std::exception& ex) {
      if (warnings) warnings->push_back("skipping library file " + f.filename().string() + ": " + ex.what());
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const LibraryEntry& a, const LibraryEntry& b) {
    return a.title != b.title ? a.title < b.title : a.id < b.id;
  });
  return out;
}

std::optional<nlohmann::json> load_library_item(const fs::path& dir, const std::string& id) {
  if (!safe_id(id)) return std::nullopt;
  return read_json(dir / (id + ".json"));
}

}  // namespace novelscope::server
