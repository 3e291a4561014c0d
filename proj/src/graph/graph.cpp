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

#include "novelscope/graph/graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>
#include <set>
#include <tuple>

#include "novelscope/common/error.hpp"
#include "novelscope/common/text.hpp"

namespace novelscope::graph {

namespace {

struct Index {
  std::map<std::string, std::size_t> pos;         // id -> first node with it
  std::vector<std::vector<std::size_t>> out;      // adjacency over known edges
};

Index build_index(const PaperGraph& g) {
  Index idx;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) idx.pos.emplace(g.nodes[i].id, i);
  idx.out.resize(g.nodes.size());
  for (const auto& e : g.edges) {
    auto a = idx.pos.find(e.from);
    auto b = idx.pos.find(e.to);
    if (a != idx.pos.end() && b != idx.pos.end()) idx.out[a->second].push_back(b->second);
  }
  return idx;
}

std::vector<bool> reachable_from(const Index& idx, const std::vector<std::size_t>& starts) {
  std::vector<bool> seen(idx.out.size(), false);
  std::deque<std::size_t> queue;
  for (auto s : starts) {
    if (!seen[s]) {
      seen[s] = true;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    auto u = queue.front();
    queue.pop_front();
    for (auto v : idx.out[u]) {
      if (!seen[v]) {
        seen[v] = true;
        queue.push_back(v);
      }
    }
  }
  return seen;
}

bool ends_with_terminal(std::string_view s) {
  return !s.empty() && (s.back() == '.' || s.back() == '!' || s.back() == '?');
}

std::string title_case(std::string_view kind) {
  std::string s(kind);
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

}  // namespace

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::kTitle: return "title";
    case NodeKind::kClaim: return "claim";
    case NodeKind::kMethod: return "method";
    case NodeKind::kExperiment: return "experiment";
  }
  return "title";
}

NodeKind parse_node_kind(std::string_view s) {
  if (s == "title") return NodeKind::kTitle;
  if (s == "claim") return NodeKind::kClaim;
  if (s == "method") return NodeKind::kMethod;
  if (s == "experiment") return NodeKind::kExperiment;
  throw Error(ErrorCode::kBadRequest, "unknown node kind '" + std::string(s) + "'");
}

int kind_rank(NodeKind kind) { return static_cast<int>(kind); }

std::string_view to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::kDuplicateId: return "duplicate_id";
    case Violation::Kind::kTitleCount: return "title_count";
    case Violation::Kind::kUnknownEndpoint: return "unknown_endpoint";
    case Violation::Kind::kCycle: return "cycle";
    case Violation::Kind::kHierarchy: return "hierarchy";
    case Violation::Kind::kUnreachable: return "unreachable";
    case Violation::Kind::kMissingExcerpt: return "missing_excerpt";
  }
  return "";
}

std::vector<Violation> validate_graph(const PaperGraph& g) {
  using K = Violation::Kind;
  std::vector<Violation> out;
  const Index idx = build_index(g);

  std::set<std::string> seen;
  for (const auto& n : g.nodes) {
    if (!seen.insert(n.id).second) {
      out.push_back({K::kDuplicateId, n.id, "node id '" + n.id + "' is used more than once"});
    }
  }

  std::vector<std::size_t> titles;
  for (const auto& [id, i] : idx.pos) {
    if (g.nodes[i].kind == NodeKind::kTitle) titles.push_back(i);
  }
  if (titles.size() != 1) {
    out.push_back({K::kTitleCount, "",
                   "expected exactly one title node, found " + std::to_string(titles.size())});
  }

  for (const auto& e : g.edges) {
    for (const auto* end : {&e.from, &e.to}) {
      if (!idx.pos.contains(*end)) {
        out.push_back({K::kUnknownEndpoint, e.from,
                       "edge " + e.from + " -> " + e.to + " references unknown node '" + *end + "'"});
      }
    }
  }

  // A node is on a cycle iff it can reach itself through at least one edge.
  for (const auto& [id, i] : idx.pos) {
    auto r = reachable_from(idx, idx.out[i]);
    if (r[i]) out.push_back({K::kCycle, id, "node '" + id + "' lies on a cycle"});
  }

  for (const auto& e : g.edges) {
    auto a = idx.pos.find(e.from);
    auto b = idx.pos.find(e.to);
    if (a == idx.pos.end() || b == idx.pos.end()) continue;
    const auto& u = g.nodes[a->second];
    const auto& v = g.nodes[b->second];
    if (kind_rank(v.kind) != kind_rank(u.kind) + 1) {
      out.push_back({K::kHierarchy, e.from,
                     "edge " + e.from + " -> " + e.to + " goes from " + std::string(to_string(u.kind)) +
                         " to " + std::string(to_string(v.kind))});
    }
  }

  auto reach = reachable_from(idx, titles);
  for (const auto& [id, i] : idx.pos) {
    if (g.nodes[i].kind != NodeKind::kTitle && !reach[i]) {
      out.push_back({K::kUnreachable, id, "node '" + id + "' is not reachable from the title"});
    }
  }

  for (const auto& n : g.nodes) {
    if (n.kind != NodeKind::kTitle && text::trim(n.excerpt).empty()) {
      out.push_back({K::kMissingExcerpt, n.id, "node '" + n.id + "' has no excerpt"});
    }
  }
  return out;
}

std::vector<std::string> topological_order(const PaperGraph& g) {
  const Index idx = build_index(g);
  const std::size_t n = g.nodes.size();
  std::vector<int> indegree(n, 0);
  std::vector<bool> live(n, false);
  for (const auto& [id, i] : idx.pos) live[i] = true;
  for (std::size_t u = 0; u < n; ++u) {
    for (auto v : idx.out[u]) ++indegree[v];
  }

  using Key = std::tuple<int, std::string, std::size_t>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (live[i] && indegree[i] == 0) ready.emplace(kind_rank(g.nodes[i].kind), g.nodes[i].id, i);
  }
  std::vector<std::string> order;
  while (!ready.empty()) {
    auto [rank, id, u] = ready.top();
    ready.pop();
    order.push_back(id);
    for (auto v : idx.out[u]) {
      if (--indegree[v] == 0) ready.emplace(kind_rank(g.nodes[v].kind), g.nodes[v].id, v);
    }
  }
  if (order.size() != idx.pos.size()) {
    throw Error(ErrorCode::kCyclicGraph, "graph has a cycle; no topological order exists");
  }
  return order;
}

std::string node_paragraph(const GraphNode& node) {
  std::string p = title_case(to_string(node.kind)) + ": " + text::trim(node.label);
  if (!ends_with_terminal(p)) p += ".";
  const std::string excerpt = text::trim(node.excerpt);
  if (!excerpt.empty()) p += " Supporting text: " + excerpt;
  return p;
}

std::string linearize(const PaperGraph& g) {
  const Index idx = build_index(g);
  std::vector<std::string> paragraphs;
  for (const auto& id : topological_order(g)) paragraphs.push_back(node_paragraph(g.nodes[idx.pos.at(id)]));
  return text::join(paragraphs, "\n\n");
}

bool occurs_verbatim(const texparse::PlainDocument& doc, std::string_view excerpt) {
  const std::string needle = text::collapse_whitespace(excerpt);
  if (needle.empty()) return false;
  for (const auto& s : doc.sections) {
    if (s.heading.find(needle) != std::string::npos) return true;
    for (const auto& p : s.paragraphs) {
      if (p.find(needle) != std::string::npos) return true;
    }
  }
  return false;
}

std::string best_matching_sentence(const texparse::PlainDocument& doc, std::string_view excerpt) {
  const auto tokens = text::word_tokens(excerpt);
  const std::set<std::string> wanted(tokens.begin(), tokens.end());
  std::string best;
  std::size_t best_score = 0;
  bool found = false;
  for (const auto& s : doc.sections) {
    for (const auto& p : s.paragraphs) {
      for (auto& sentence : texparse::segment_sentences(p)) {
        auto words = text::word_tokens(sentence);
        std::set<std::string> have(words.begin(), words.end());
        std::size_t score = 0;
        for (const auto& w : have) score += wanted.count(w);
        if (!found || score > best_score) {
          best = std::move(sentence);
          best_score = score;
          found = true;
        }
      }
    }
  }
  return best;
}

GraphExtraction extract_graph(const texparse::PlainDocument& doc, const std::string& title,
                              const llm::LlmHandle& llm) {
  if (doc.empty()) throw Error(ErrorCode::kBadRequest, "cannot extract a graph from an empty document");

  std::map<std::string, std::string> vars = {
      {"title", title}, {"document", doc.render_markdown()}, {"feedback", ""}};
  llm::AskOptions opts;
  opts.stage = "extract_graph";
  opts.max_output_tokens = 8192;

  GraphExtraction result;
  std::vector<Violation> violations;
  for (int round = 0; round < 2; ++round) {
    nlohmann::json raw;
    try {
      raw = llm.ask("graph_extraction.v1", vars, opts).content;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kSchemaFailure) {
        throw Error(ErrorCode::kExtractionFailed, std::string("graph extraction failed: ") + e.what());
      }
      throw;
    }
    PaperGraph g = raw.get<PaperGraph>();
    violations = validate_graph(g);
    if (violations.empty()) {
      result.graph = std::move(g);
      break;
    }
    std::string feedback = "\n\nA previous answer was rejected because of these problems:\n";
    for (const auto& v : violations) feedback += "- " + v.message + "\n";
    feedback += "Previous answer:\n" + raw.dump() + "\nReturn a corrected graph.";
    vars["feedback"] = feedback;
  }
  if (!violations.empty()) {
    std::vector<std::string> messages;
    for (const auto& v : violations) messages.push_back(v.message);
    throw Error(ErrorCode::kExtractionFailed,
                "graph still invalid after repair: " + text::join(messages, "; "));
  }

  for (auto& node : result.graph.nodes) {
    if (node.kind == NodeKind::kTitle || occurs_verbatim(doc, node.excerpt)) continue;
    std::string replacement = best_matching_sentence(doc, node.excerpt);
    result.warnings.push_back("excerpt of node '" + node.id + "' is not in the paper; replaced");
    node.excerpt = replacement.empty() ? node.excerpt : replacement;
    node.excerpt_flagged = true;
  }
  result.no_claims = std::none_of(result.graph.nodes.begin(), result.graph.nodes.end(),
                                  [](const GraphNode& n) { return n.kind == NodeKind::kClaim; });
  if (result.no_claims) result.warnings.push_back("no claims were extracted");
  return result;
}

void to_json(nlohmann::json& j, const GraphNode& n) {
  j = {{"id", n.id},
       {"kind", to_string(n.kind)},
       {"label", n.label},
       {"excerpt", n.excerpt},
       {"excerpt_flagged", n.excerpt_flagged}};
}

void from_json(const nlohmann::json& j, GraphNode& n) {
  n.id = j.at("id").get<std::string>();
  n.kind = parse_node_kind(j.at("kind").get<std::string>());
  n.label = j.at("label").get<std::string>();
  n.excerpt = j.value("excerpt", std::string{});
  n.excerpt_flagged = j.value("excerpt_flagged", false);
}

void to_json(nlohmann::json& j, const GraphEdge& e) { j = {{"from", e.from}, {"to", e.to}}; }

void from_json(const nlohmann::json& j, GraphEdge& e) {
  e.from = j.at("from").get<std::string>();
  e.to = j.at("to").get<std::string>();
}

void to_json(nlohmann::json& j, const PaperGraph& g) { j = {{"nodes", g.nodes}, {"edges", g.edges}}; }

void from_json(const nlohmann::json& j, PaperGraph& g) {
  g.nodes = j.at("nodes").get<std::vector<GraphNode>>();
  g.edges = j.at("edges").get<std::vector<GraphEdge>>();
}

}  // namespace novelscope::graph
