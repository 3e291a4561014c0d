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

#include "novelscope/retrieval/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "json.hpp"
#include "novelscope/common/error.hpp"
#include "novelscope/common/text.hpp"

namespace novelscope::retrieval {

namespace {

const std::set<std::string>& stopwords() {
  static const std::set<std::string> words = {
      "a",    "an",   "and",  "are",  "as",   "at",   "be",    "by",   "for",  "from",
      "has",  "have", "in",   "is",   "it",   "its",  "of",    "on",   "or",   "that",
      "the",  "this", "to",   "was",  "were", "which", "with", "we",   "our",  "these",
      "can",  "not",  "but",  "their", "than", "into", "also", "such", "they", "been"};
  return words;
}

}  // namespace

void normalize(std::vector<double>& v) {
  double sq = 0;
  for (double x : v) sq += x * x;
  if (sq == 0) {
    if (!v.empty()) v[0] = 1.0;
    return;
  }
  const double norm = std::sqrt(sq);
  for (double& x : v) x /= norm;
}

double cosine(const EmbeddingVector& u, const EmbeddingVector& v) {
  if (u.values.size() != v.values.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "cannot compare vectors of length " +
                                                   std::to_string(u.values.size()) + " and " +
                                                   std::to_string(v.values.size()));
  }
  double dot = 0, nu = 0, nv = 0;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    dot += u.values[i] * v.values[i];
    nu += u.values[i] * u.values[i];
    nv += v.values[i] * v.values[i];
  }
  if (nu == 0 || nv == 0) return 0.0;
  return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

double display_similarity(double raw) { return std::clamp(raw, 0.0, 1.0); }

HashingEmbedder::HashingEmbedder(std::size_t dimension) : dim_(dimension) {
  if (dim_ == 0) throw Error(ErrorCode::kBadRequest, "embedding dimension must be positive");
}

std::string HashingEmbedder::model_id() const { return "hashing-" + std::to_string(dim_); }

EmbeddingVector HashingEmbedder::embed(const std::string& input) {
  if (text::trim(input).empty()) throw Error(ErrorCode::kBadRequest, "cannot embed empty text");
  const auto words = text::word_tokens(input);
  std::map<std::string, int> counts;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!stopwords().contains(words[i])) ++counts["u:" + words[i]];
    if (i + 1 < words.size()) ++counts["b:" + words[i] + " " + words[i + 1]];
  }
  std::vector<double> v(dim_, 0.0);
  for (const auto& [feature, tf] : counts) {
    const std::uint64_t h = text::fnv1a64(feature);
    const double sign = (h >> 63) ? -1.0 : 1.0;
    v[h % dim_] += sign * (1.0 + std::log(static_cast<double>(tf)));
  }
  normalize(v);
  return {std::move(v), model_id()};
}

RemoteEmbedder::RemoteEmbedder(std::shared_ptr<ingest::Transport> transport, std::string endpoint_url,
                               std::string api_key, std::string model, std::size_t dimension)
    : transport_(std::move(transport)),
      url_(std::move(endpoint_url)),
      api_key_(std::move(api_key)),
      model_(std::move(model)),
      dim_(dimension) {}

EmbeddingVector RemoteEmbedder::embed(const std::string& input) {
  if (text::trim(input).empty()) throw Error(ErrorCode::kBadRequest, "cannot embed empty text");
  ingest::HttpRequest req;
  req.method = "POST";
  req.url = url_;
  req.headers["Content-Type"] = "application/json";
  if (!api_key_.empty()) req.headers["Authorization"] = "Bearer " + api_key_;
  req.body = nlohmann::json{{"inputs", input}}.dump();
  ingest::HttpResponse resp;
  try {
    resp = transport_->send(req);
  } catch (const Error& e) {
    throw Error(ErrorCode::kProviderUnavailable, e.what());
  }
  if (resp.status != 200) {
    throw Error(ErrorCode::kProviderUnavailable,
                "embedding service returned HTTP " + std::to_string(resp.status));
  }
  auto j = nlohmann::json::parse(resp.body, nullptr, false);
  // Some deployments wrap a single embedding in an outer array.
  if (j.is_array() && j.size() == 1 && j[0].is_array()) j = j[0];
  if (!j.is_array() || j.size() != dim_) {
    throw Error(ErrorCode::kProviderUnavailable, "embedding service returned an unexpected shape");
  }
  std::vector<double> v;
  v.reserve(dim_);
  for (const auto& x : j) {
    if (!x.is_number() || !std::isfinite(x.get<double>())) {
      throw Error(ErrorCode::kProviderUnavailable, "embedding contains a non-finite value");
    }
    v.push_back(x.get<double>());
  }
  normalize(v);
  return {std::move(v), model_};
}

}  // namespace novelscope::retrieval
