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

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "novelscope/graph/graph.hpp"
#include "generators.hpp"
#include "support.hpp"

namespace ns = novelscope;
using namespace novelscope::graph;
using nlohmann::json;
namespace texparse = novelscope::texparse;
namespace llm = novelscope::llm;
using K = Violation::Kind;
using testsupport::random_valid_graph;
using testsupport::kKinds;

namespace {

// Independent checker: transitive closure by Floyd-Warshall.
std::multiset<std::pair<K, std::string>> oracle_violations(const PaperGraph& g) {
  std::multiset<std::pair<K, std::string>> out;
  const std::size_t n = g.nodes.size();
  std::map<std::string, std::size_t> at;
  for (std::size_t i = 0; i < n; ++i) at[g.nodes[i].id] = i;
  int titles = 0;
  for (const auto& node : g.nodes) titles += node.kind == NodeKind::kTitle;
  if (titles != 1) out.insert({K::kTitleCount, ""});
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (const auto& e : g.edges) {
    if (!at.contains(e.from)) out.insert({K::kUnknownEndpoint, e.from});
    if (!at.contains(e.to)) out.insert({K::kUnknownEndpoint, e.from});
    if (!at.contains(e.from) || !at.contains(e.to)) continue;
    reach[at[e.from]][at[e.to]] = true;
    if (kind_rank(g.nodes[at[e.to]].kind) != kind_rank(g.nodes[at[e.from]].kind) + 1) {
      out.insert({K::kHierarchy, e.from});
    }
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (reach[i][i]) out.insert({K::kCycle, g.nodes[i].id});
    if (g.nodes[i].kind == NodeKind::kTitle) continue;
    bool reached = false;
    for (std::size_t t = 0; t < n; ++t) reached |= g.nodes[t].kind == NodeKind::kTitle && reach[t][i];
    if (!reached) out.insert({K::kUnreachable, g.nodes[i].id});
    if (ns::text::trim(g.nodes[i].excerpt).empty()) out.insert({K::kMissingExcerpt, g.nodes[i].id});
  }
  return out;
}

texparse::PlainDocument small_doc() {
  texparse::PlainDocument d;
  d.sections.push_back({"Introduction",
                        {"We claim that sparse adapters reduce word error rate. Training is cheap.",
                         "The router selects two experts per frame."}});
  d.sections.push_back({"Experiments", {"We evaluate on five low-resource languages."}});
  return d;
}

json graph_json(const std::string& claim_excerpt, bool cyclic = false) {
  json g = {{"nodes",
             {{{"id", "t"}, {"kind", "title"}, {"label", "Paper"}, {"excerpt", ""}},
              {{"id", "c1"}, {"kind", "claim"}, {"label", "Adapters help"}, {"excerpt", claim_excerpt}},
              {{"id", "m1"}, {"kind", "method"}, {"label", "Router"},
               {"excerpt", "The router selects two experts per frame."}}}},
            {"edges", {{{"from", "t"}, {"to", "c1"}}, {{"from", "c1"}, {"to", "m1"}}}}};
  if (cyclic) g["edges"].push_back({{"from", "m1"}, {"to", "c1"}});
  return g;
}

}  // namespace

TEST(Validate, MatchesBruteForceOracleOnSmallGraphs) {
  std::mt19937 rng(20240601);
  for (int trial = 0; trial < 3000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    PaperGraph g;
    for (int i = 0; i < n; ++i) {
      g.nodes.push_back({"v" + std::to_string(i), kKinds[rng() % 4], "l", rng() % 6 ? "x" : " ", false});
    }
    const int m = static_cast<int>(rng() % (2 * n + 1));
    for (int j = 0; j < m; ++j) {
      g.edges.push_back({"v" + std::to_string(rng() % (n + 1)), "v" + std::to_string(rng() % (n + 1))});
    }
    std::multiset<std::pair<K, std::string>> got;
    for (const auto& v : validate_graph(g)) got.insert({v.kind, v.node_id});
    ASSERT_EQ(got, oracle_violations(g)) << json(g).dump();
  }
}

TEST(Validate, DuplicateIdsAreReported) {
  PaperGraph g;
  g.nodes = {{"t", NodeKind::kTitle, "T", "", false}, {"t", NodeKind::kClaim, "C", "x", false}};
  const auto v = validate_graph(g);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v[0].kind, K::kDuplicateId);
}

TEST(Validate, RandomValidGraphsHaveNoViolations) {
  std::mt19937 rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto g = random_valid_graph(rng, 1 + static_cast<int>(rng() % 50));
    EXPECT_TRUE(validate_graph(g).empty()) << json(g).dump();
  }
}

TEST(TopologicalOrder, RespectsEdgesAndIgnoresInputOrder) {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 1000; ++trial) {
    PaperGraph g = random_valid_graph(rng, 1 + static_cast<int>(rng() % 50));
    const auto order = topological_order(g);
    ASSERT_EQ(order.size(), g.nodes.size());
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    ASSERT_EQ(pos.size(), order.size());
    for (const auto& e : g.edges) ASSERT_LT(pos.at(e.from), pos.at(e.to));
    PaperGraph shuffled = g;
    std::shuffle(shuffled.nodes.begin(), shuffled.nodes.end(), rng);
    std::shuffle(shuffled.edges.begin(), shuffled.edges.end(), rng);
    ASSERT_EQ(topological_order(shuffled), order);
  }
}

TEST(TopologicalOrder, TitleFirstThenRankThenId) {
  PaperGraph g;
  g.nodes = {{"m1", NodeKind::kMethod, "", "x", false}, {"c2", NodeKind::kClaim, "", "x", false},
             {"t", NodeKind::kTitle, "", "", false}, {"c1", NodeKind::kClaim, "", "x", false}};
  g.edges = {{"t", "c2"}, {"t", "c1"}, {"c2", "m1"}};
  EXPECT_EQ(topological_order(g), (std::vector<std::string>{"t", "c1", "c2", "m1"}));
}

TEST(TopologicalOrder, TwoCycleIsCyclicGraph) {
  PaperGraph g;
  g.nodes = {{"a", NodeKind::kClaim, "", "x", false}, {"b", NodeKind::kMethod, "", "x", false}};
  g.edges = {{"a", "b"}, {"b", "a"}};
  try {
    topological_order(g);
    FAIL();
  } catch (const ns::Error& e) {
    EXPECT_EQ(e.code(), ns::ErrorCode::kCyclicGraph);
  }
}

TEST(Linearize, OneParagraphPerNode) {
  std::mt19937 rng(3);
  const auto g = random_valid_graph(rng, 12);
  const auto text = linearize(g);
  const auto order = topological_order(g);
  std::size_t paragraphs = 1, at = 0;
  while ((at = text.find("\n\n", at)) != std::string::npos) ++paragraphs, at += 2;
  EXPECT_EQ(paragraphs, order.size());
  std::map<std::string, GraphNode> by_id;
  for (const auto& n : g.nodes) by_id[n.id] = n;
  EXPECT_EQ(text.rfind(node_paragraph(by_id[order.front()]), 0), 0u);
}

TEST(Serialization, GraphRoundTrip) {
  std::mt19937 rng(9);
  const auto g = random_valid_graph(rng, 20);
  EXPECT_EQ(json(g).get<PaperGraph>(), g);
  EXPECT_THROW(parse_node_kind("theorem"), ns::Error);
}

TEST(Excerpts, VerbatimAndClosestSentence) {
  const auto doc = small_doc();
  EXPECT_TRUE(occurs_verbatim(doc, "The router   selects two experts"));
  EXPECT_FALSE(occurs_verbatim(doc, "routers select experts"));
  EXPECT_EQ(best_matching_sentence(doc, "the router picks experts"), "The router selects two experts per frame.");
  EXPECT_EQ(best_matching_sentence(doc, "zzz"), "We claim that sparse adapters reduce word error rate.");
  EXPECT_EQ(best_matching_sentence(texparse::PlainDocument{}, "x"), "");
}

TEST(Extract, ValidGraphKeepsVerbatimExcerpts) {
  testsupport::MockLlm m;
  m.provider->set_responder("graph_extraction.v1", [](const llm::ProviderCall&) {
    return graph_json("We claim that sparse adapters reduce word error rate.");
  });
  const auto r = extract_graph(small_doc(), "Paper", m.handle());
  EXPECT_TRUE(r.warnings.empty());
  EXPECT_FALSE(r.no_claims);
  for (const auto& n : r.graph.nodes) EXPECT_FALSE(n.excerpt_flagged);
}

TEST(Extract, InventedExcerptIsReplacedAndFlagged) {
  testsupport::MockLlm m;
  m.provider->set_responder("graph_extraction.v1",
                            [](const llm::ProviderCall&) { return graph_json("adapters reduce error rates a lot"); });
  const auto r = extract_graph(small_doc(), "Paper", m.handle());
  const auto& c1 = r.graph.nodes[1];
  EXPECT_TRUE(c1.excerpt_flagged);
  EXPECT_EQ(c1.excerpt, "We claim that sparse adapters reduce word error rate.");
  EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(Extract, OneRepairRoundWithFeedback) {
  testsupport::MockLlm m;
  int call = 0;
  m.provider->set_responder("graph_extraction.v1", [&](const llm::ProviderCall&) {
    return graph_json("Training is cheap.", call++ == 0);
  });
  const auto r = extract_graph(small_doc(), "Paper", m.handle());
  EXPECT_EQ(r.graph.edges.size(), 2u);
  const auto hist = m.provider->history();
  ASSERT_EQ(hist.size(), 2u);
  EXPECT_NE(hist[1].original_user().find("lies on a cycle"), std::string::npos);
}

TEST(Extract, StillInvalidAfterRepairFails) {
  testsupport::MockLlm m;
  m.provider->set_responder("graph_extraction.v1",
                            [](const llm::ProviderCall&) { return graph_json("Training is cheap.", true); });
  try {
    extract_graph(small_doc(), "Paper", m.handle());
    FAIL();
  } catch (const ns::Error& e) {
    EXPECT_EQ(e.code(), ns::ErrorCode::kExtractionFailed);
  }
}

TEST(Extract, EmptyDocumentIsBadRequest) {
  testsupport::MockLlm m;
  EXPECT_THROW(extract_graph(texparse::PlainDocument{}, "Paper", m.handle()), ns::Error);
  EXPECT_EQ(m.provider->calls(), 0u);
}

TEST(Extract, TitleOnlyGraphIsNoClaims) {
  testsupport::MockLlm m;
  m.provider->set_responder("graph_extraction.v1", [](const llm::ProviderCall&) {
    return json{{"nodes", {{{"id", "t"}, {"kind", "title"}, {"label", "P"}, {"excerpt", ""}}}}, {"edges", json::array()}};
  });
  const auto r = extract_graph(small_doc(), "Paper", m.handle());
  EXPECT_TRUE(r.no_claims);
}
