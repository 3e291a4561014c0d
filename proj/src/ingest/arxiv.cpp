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

#include "novelscope/ingest/arxiv.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <filesystem>
#include <regex>
#include <sstream>

#include "novelscope/common/error.hpp"
#include "novelscope/common/text.hpp"
#include "novelscope/ingest/archive.hpp"

namespace novelscope::ingest {

namespace {

const std::regex& new_scheme() {
  static const std::regex re(R"(^\d{4}\.\d{4,5}(v\d+)?$)");
  return re;
}

const std::regex& old_scheme() {
  static const std::regex re(R"(^[a-z]+(-[a-z]+)*(\.[A-Z]{2})?/\d{7}(v\d+)?$)");
  return re;
}

std::string id_from_abs_url(const std::string& url) {
  const auto pos = url.find("/abs/");
  return strip_arxiv_version(pos == std::string::npos ? url : url.substr(pos + 5));
}

}  // namespace

bool is_valid_arxiv_id(std::string_view id) {
  const std::string s(id);
  return std::regex_match(s, new_scheme()) || std::regex_match(s, old_scheme());
}

std::string strip_arxiv_version(std::string_view id) {
  static const std::regex version(R"(v\d+$)");
  return std::regex_replace(std::string(id), version, "");
}

std::vector<PaperRecord> parse_arxiv_feed(const std::string& atom_xml) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(atom_xml);
  try {
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorCode::kUpstreamUnavailable, std::string("malformed arXiv feed: ") + e.what());
  }
  std::vector<PaperRecord> records;
  const auto feed = tree.get_child_optional("feed");
  if (!feed) return records;
  for (const auto& [name, entry] : *feed) {
    if (name != "entry") continue;
    const std::string abs_url = text::trim(entry.get<std::string>("id", ""));
    const std::string title = text::collapse_whitespace(entry.get<std::string>("title", ""));
    // The API reports query errors as a pseudo-entry titled "Error".
    if (abs_url.empty() || title.empty() || abs_url.find("/api/errors") != std::string::npos) {
      continue;
    }
    PaperRecord r;
    r.arxiv_id = id_from_abs_url(abs_url);
    r.id = "arxiv:" + *r.arxiv_id;
    r.title = title;
    r.abstract = text::collapse_whitespace(entry.get<std::string>("summary", ""));
    for (const auto& [child, node] : entry) {
      if (child == "author") {
        r.authors.push_back(text::collapse_whitespace(node.get<std::string>("name", "")));
      }
    }
    const std::string published = entry.get<std::string>("published", "");
    if (published.size() >= 4) {
      try {
        r.year = std::stoi(published.substr(0, 4));
      } catch (const std::exception&) {
      }
    }
    r.url = "https://arxiv.org/abs/" + *r.arxiv_id;
    records.push_back(std::move(r));
  }
  return records;
}

ArxivClient::ArxivClient(std::shared_ptr<UpstreamClient> upstream, ArxivEndpoints endpoints)
    : upstream_(std::move(upstream)), endpoints_(std::move(endpoints)) {}

std::string ArxivClient::search_url(const ArxivEndpoints& endpoints, std::string_view query,
                                    int limit) {
  const std::string q = "ti:\"" + text::collapse_whitespace(query) + "\"";
  return endpoints.api + "?search_query=" + text::url_encode(q) +
         "&start=0&max_results=" + std::to_string(limit);
}

std::vector<PaperRecord> ArxivClient::search(std::string_view query, int limit) const {
  if (text::trim(query).empty()) throw Error(ErrorCode::kEmptyQuery, "blank search query");
  if (limit < 1 || limit > 50) {
    throw Error(ErrorCode::kBadRequest, "limit must be in [1, 50]");
  }
  HttpRequest req;
  req.url = search_url(endpoints_, query, limit);
  auto records = parse_arxiv_feed(upstream_->fetch("arxiv.search", req));
  if (static_cast<int>(records.size()) > limit) records.resize(static_cast<std::size_t>(limit));
  return records;
}

LatexBundle ArxivClient::fetch_latex(std::string_view arxiv_id) const {
  if (!is_valid_arxiv_id(arxiv_id)) {
    throw Error(ErrorCode::kBadId, "not an arXiv identifier: " + std::string(arxiv_id));
  }
  HttpRequest req;
  req.url = endpoints_.eprint + std::string(arxiv_id);
  std::string payload;
  try {
    payload = upstream_->fetch("arxiv.eprint", req);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kNotFound) {
      throw Error(ErrorCode::kSourceUnavailable, "no source for " + std::string(arxiv_id));
    }
    throw;
  }
  return bundle_from_eprint(arxiv_id, payload, upstream_->clock()->now());
}

LatexBundle bundle_from_eprint(std::string_view arxiv_id, std::string_view payload,
                               TimePoint fetched_at) {
  std::string raw = is_gzip(payload) ? gunzip(payload) : std::string(payload);
  if (raw.rfind("%PDF", 0) == 0) {
    throw Error(ErrorCode::kSourceUnavailable, "only a PDF is offered for " + std::string(arxiv_id));
  }
  std::map<std::string, std::string> files;
  if (is_tar(raw)) {
    files = untar(raw);
  } else {
    files.emplace("main.tex", std::move(raw));
  }

  LatexBundle bundle;
  bundle.arxiv_id = std::string(arxiv_id);
  bundle.fetched_at = fetched_at;
  bundle.main_file = resolve_main_file(files);
  if (bundle.main_file.empty()) {
    throw Error(ErrorCode::kSourceUnavailable,
                "no main .tex file in source of " + std::string(arxiv_id));
  }
  auto flat = flatten_includes(bundle.main_file, files);
  bundle.main_source = std::move(flat.source);
  bundle.warnings = std::move(flat.warnings);
  for (const auto& [path, content] : files) {
    const auto ext = std::filesystem::path(path).extension();
    if (ext == ".bib" || ext == ".bbl") bundle.bib_sources.push_back(content);
  }
  if (bundle.main_source.empty()) {
    throw Error(ErrorCode::kSourceUnavailable, "empty main source");
  }
  return bundle;
}

}  // namespace novelscope::ingest
