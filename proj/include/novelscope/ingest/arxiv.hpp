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
#include <vector>

#include "novelscope/ingest/types.hpp"
#include "novelscope/ingest/upstream.hpp"

namespace novelscope::ingest {

// Accepts the new scheme (2301.01234, optional vN) and the old scheme
// (hep-th/9901001, math.AG/0601001, optional vN).
bool is_valid_arxiv_id(std::string_view id);

// Drops a trailing version suffix: "2301.01234v3" -> "2301.01234".
std::string strip_arxiv_version(std::string_view id);

// Parses an arXiv Atom feed into records (id = "arxiv:<id>").
std::vector<PaperRecord> parse_arxiv_feed(const std::string& atom_xml);

struct ArxivEndpoints {
  std::string api = "http://export.arxiv.org/api/query";
  std::string eprint = "https://arxiv.org/e-print/";
};

class ArxivClient {
 public:
  explicit ArxivClient(std::shared_ptr<UpstreamClient> upstream, ArxivEndpoints endpoints = {});

  // Title search, upstream relevance order, at most `limit` (<= 50) records.
  std::vector<PaperRecord> search(std::string_view query, int limit) const;

  // Downloads the e-print source and resolves it into a flattened bundle.
  // kSourceUnavailable when no LaTeX is offered (404 or a PDF-only submission).
  LatexBundle fetch_latex(std::string_view arxiv_id) const;

  static std::string search_url(const ArxivEndpoints& endpoints, std::string_view query,
                                int limit);

 private:
  std::shared_ptr<UpstreamClient> upstream_;
  ArxivEndpoints endpoints_;
};

// Builds a bundle from raw e-print bytes (gzip'd tar, gzip'd single file, or
// plain TeX).
LatexBundle bundle_from_eprint(std::string_view arxiv_id, std::string_view payload,
                               TimePoint fetched_at);

}  // namespace novelscope::ingest
