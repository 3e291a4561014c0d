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

#include "novelscope/ingest/scholar.hpp"

#include <set>

#include "novelscope/common/error.hpp"
#include "novelscope/common/text.hpp"
#include "novelscope/ingest/arxiv.hpp"

namespace novelscope::ingest {

namespace {

nlohmann::json parse_body(const std::string& body) {
  try {
    return nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kUpstreamUnavailable, std::string("malformed JSON: ") + e.what());
  }
}

RecommendationBatch make_batch(std::string_view seed_id, int n,
                               const nlohmann::json& papers) {
  RecommendationBatch batch;
  batch.seed_id = std::string(seed_id);
  batch.requested = n;
  std::set<std::string> seen{batch.seed_id};
  for (const auto& p : papers) {
    auto rec = record_from_scholar(p);
    if (!rec || !seen.insert(rec->id).second) continue;
    batch.papers.push_back(std::move(*rec));
    if (static_cast<int>(batch.papers.size()) == n) break;
  }
  return batch;
}

}  // namespace

const char* ScholarClient::fields() {
  return "paperId,externalIds,title,abstract,authors,year,venue,url,citationCount";
}

std::string scholar_identifier(std::string_view id) {
  if (is_valid_arxiv_id(id)) return "arXiv:" + strip_arxiv_version(id);
  if (id.rfind("arxiv:", 0) == 0) return "arXiv:" + std::string(id.substr(6));
  return std::string(id);
}

std::optional<PaperRecord> record_from_scholar(const nlohmann::json& p) {
  if (!p.is_object()) return std::nullopt;
  const auto pid = p.find("paperId");
  const auto title = p.find("title");
  if (pid == p.end() || !pid->is_string() || title == p.end() || !title->is_string()) {
    return std::nullopt;
  }
  PaperRecord r;
  r.id = pid->get<std::string>();
  r.title = text::collapse_whitespace(title->get<std::string>());
  if (r.title.empty()) return std::nullopt;
  if (auto a = p.find("abstract"); a != p.end() && a->is_string()) r.abstract = a->get<std::string>();
  if (auto ext = p.find("externalIds"); ext != p.end() && ext->is_object()) {
    if (auto ax = ext->find("ArXiv"); ax != ext->end() && ax->is_string()) {
      r.arxiv_id = ax->get<std::string>();
    }
  }
  if (auto authors = p.find("authors"); authors != p.end() && authors->is_array()) {
    for (const auto& a : *authors) {
      if (a.contains("name") && a["name"].is_string()) r.authors.push_back(a["name"]);
    }
  }
  if (auto y = p.find("year"); y != p.end() && y->is_number_integer()) {
    const int year = y->get<int>();
    if (year >= 1900 && year <= 2100) r.year = year;
  }
  if (auto v = p.find("venue"); v != p.end() && v->is_string() && !v->get<std::string>().empty()) {
    r.venue = v->get<std::string>();
  }
  if (auto u = p.find("url"); u != p.end() && u->is_string()) r.url = u->get<std::string>();
  if (auto c = p.find("citationCount"); c != p.end() && c->is_number_integer()) {
    r.citation_count = c->get<long long>();
  }
  return r;
}

ScholarClient::ScholarClient(std::shared_ptr<UpstreamClient> upstream, ScholarEndpoints endpoints)
    : upstream_(std::move(upstream)), endpoints_(std::move(endpoints)) {}

HttpRequest ScholarClient::request(std::string url) const {
  HttpRequest req;
  req.url = std::move(url);
  if (!endpoints_.api_key.empty()) req.headers["x-api-key"] = endpoints_.api_key;
  return req;
}

PaperWithReferences ScholarClient::fetch_metadata(std::string_view id) const {
  if (text::trim(id).empty()) throw Error(ErrorCode::kBadRequest, "empty paper identifier");
  const std::string sid = text::url_encode(scholar_identifier(id));
  const auto paper = parse_body(upstream_->fetch(
      "s2.paper", request(endpoints_.graph + "/paper/" + sid + "?fields=" + fields())));
  auto main = record_from_scholar(paper);
  if (!main) throw Error(ErrorCode::kNotFound, "no usable record for " + std::string(id));

  PaperWithReferences out{std::move(*main), {}};
  const auto refs = parse_body(upstream_->fetch(
      "s2.references", request(endpoints_.graph + "/paper/" + sid +
                               "/references?fields=" + fields() + "&limit=1000")));
  std::set<std::string> seen;
  for (const auto& item : refs.value("data", nlohmann::json::array())) {
    auto rec = record_from_scholar(item.value("citedPaper", nlohmann::json{}));
    if (rec && seen.insert(rec->id).second) out.cited.push_back(std::move(*rec));
  }
  return out;
}

RecommendationBatch ScholarClient::fetch_recommendations(std::string_view seed_paper_id,
                                                         int n) const {
  if (n < 1 || n > 100) throw Error(ErrorCode::kBadRequest, "n must be in [1, 100]");
  const auto body = parse_body(upstream_->fetch(
      "s2.recommendations",
      request(endpoints_.recommendations + "/papers/forpaper/" +
              text::url_encode(std::string(seed_paper_id)) + "?limit=" + std::to_string(n) +
              "&fields=" + fields())));
  return make_batch(seed_paper_id, n, body.value("recommendedPapers", nlohmann::json::array()));
}

RecommendationBatch ScholarClient::search(std::string_view query, int n,
                                          std::string_view seed_id) const {
  if (text::trim(query).empty()) throw Error(ErrorCode::kEmptyQuery, "blank search query");
  if (n < 1 || n > 100) throw Error(ErrorCode::kBadRequest, "n must be in [1, 100]");
  const auto body = parse_body(upstream_->fetch(
      "s2.search", request(endpoints_.graph + "/paper/search?query=" +
                           text::url_encode(text::collapse_whitespace(query)) +
                           "&limit=" + std::to_string(n) + "&fields=" + fields())));
  return make_batch(seed_id, n, body.value("data", nlohmann::json::array()));
}

}  // namespace novelscope::ingest
