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

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "novelscope/llm/handle.hpp"
#include "novelscope/texparse/texparse.hpp"

namespace novelscope::graph {

enum class NodeKind { kTitle, kClaim, kMethod, kExperiment };

std::string_view to_string(NodeKind kind);
NodeKind parse_node_kind(std::string_view s);  // kBadRequest on unknown names
// title < claim < method < experiment; an edge must go up exactly one rank.
int kind_rank(NodeKind kind);

struct GraphNode {
  std::string id;
  NodeKind kind = NodeKind::kTitle;
  std::string label;
  std::string excerpt;
  // Set when the model's excerpt was not found in the paper and was
  // replaced by the closest sentence.
  bool excerpt_flagged = false;

  bool operator==(const GraphNode&) const = default;
};

struct GraphEdge {
  std::string from;
  std::string to;

  bool operator==(const GraphEdge&) const = default;
};

struct PaperGraph {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;

  bool operator==(const PaperGraph&) const = default;
};

struct Violation {
  enum class Kind {
    kDuplicateId,
    kTitleCount,
    kUnknownEndpoint,
    kCycle,
    kHierarchy,
    kUnreachable,
    kMissingExcerpt,
  };
  Kind kind;
  std::string node_id;  // offending node, or the edge source for edge problems
  std::string message;
};

std::string_view to_string(Violation::Kind kind);

// Every violated invariant, in a fixed order: ids, title count, edge
// endpoints, cycles, hierarchy, reachability, excerpts.
std::vector<Violation> validate_graph(const PaperGraph& g);

// Node ids in topological order; among ready nodes the lowest (kind rank,
// id) goes first. Throws kCyclicGraph when no complete order exists.
std::vector<std::string> topological_order(const PaperGraph& g);
// One paragraph per node in topological order, separated by blank lines.
std::string linearize(const PaperGraph& g);
std::string node_paragraph(const GraphNode& node);

struct GraphExtraction {
  PaperGraph graph;
  bool no_claims = false;
  std::vector<std::string> warnings;
};

// Sentence of `doc` sharing the most distinct word tokens with `excerpt`;
// the first such sentence in document order wins ties. Empty when the
// document has no sentences.
std::string best_matching_sentence(const texparse::PlainDocument& doc, std::string_view excerpt);

// Whether `excerpt`, whitespace-collapsed, occurs inside one paragraph or
// heading of `doc`.
bool occurs_verbatim(const texparse::PlainDocument& doc, std::string_view excerpt);

// Schema-constrained extraction with one repair round for structural
// violations. Throws kBadRequest for an empty document and
// kExtractionFailed when no valid graph could be obtained.
GraphExtraction extract_graph(const texparse::PlainDocument& doc, const std::string& title,
                              const llm::LlmHandle& llm);

void to_json(nlohmann::json& j, const GraphNode& n);
void from_json(const nlohmann::json& j, GraphNode& n);
void to_json(nlohmann::json& j, const GraphEdge& e);
void from_json(const nlohmann::json& j, GraphEdge& e);
void to_json(nlohmann::json& j, const PaperGraph& g);
void from_json(const nlohmann::json& j, PaperGraph& g);

}  // namespace novelscope::graph
