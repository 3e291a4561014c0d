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

#include "novelscope/server/mock_responders.hpp"

#include <algorithm>
#include <map>
#include <regex>
#include <set>

#include "novelscope/common/text.hpp"
#include "novelscope/texparse/texparse.hpp"

namespace novelscope::server {

namespace {

const std::set<std::string>& stopwords() {
  static const std::set<std::string> words = {
      "a",     "an",    "and",  "are",   "as",    "at",   "be",   "by",    "for",   "from",  "has",
      "have",  "in",    "is",   "it",    "its",   "of",   "on",   "or",    "that",  "the",   "this",
      "to",    "was",   "were", "which", "with",  "we",   "our",  "these", "can",   "not",   "but",
      "their", "than",  "into", "also",  "such",  "they", "been", "using", "show",  "shows", "paper",
      "work",  "while", "both", "each",  "more",  "most", "over", "when",  "where", "how",   "what",
      "new",   "based", "use",  "used",  "cite",  "via",  "per",  "all",   "any",   "one",   "two"};
  return words;
}

bool has_any(const std::string& lower, std::initializer_list<const char*> cues) {
  return std::any_of(cues.begin(), cues.end(), [&](const char* c) { return lower.find(c) != std::string::npos; });
}

std::string short_label(const std::string& sentence, std::size_t words) {
  std::vector<std::string> out;
  for (const auto& w : text::split(sentence, ' ')) {
    if (w.empty() || w.rfind("⟨cite:", 0) == 0) continue;
    out.push_back(w);
    if (out.size() == words) break;
  }
  std::string label = text::join(out, " ");
  while (!label.empty() && (label.back() == ',' || label.back() == '.' || label.back() == ';' || label.back() == ':')) {
    label.pop_back();
  }
  return label;
}

struct MdSection {
  std::string heading;
  std::vector<std::string> sentences;
};

std::vector<MdSection> parse_markdown(const std::string& md) {
  std::vector<MdSection> out;
  for (const auto& block : text::split(md, '\n')) {
    const std::string line = text::trim(block);
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      out.push_back({line.substr(2), {}});
      continue;
    }
    if (out.empty()) out.push_back({"", {}});
    for (auto& s : texparse::segment_sentences(line)) out.back().sentences.push_back(std::move(s));
  }
  return out;
}

std::uint64_t mix(std::string_view s, std::int64_t salt) {
  return text::fnv1a64(std::string(s) + "#" + std::to_string(salt));
}

}  // namespace

std::string prompt_section(std::string_view prompt, std::string_view start, std::string_view end) {
  auto a = prompt.find(start);
  if (a == std::string_view::npos) return "";
  a += start.size();
  auto b = end.empty() ? std::string_view::npos : prompt.find(end, a);
  return text::trim(prompt.substr(a, b == std::string_view::npos ? std::string_view::npos : b - a));
}

nlohmann::json mock_graph(const std::string& user) {
  const std::string title = prompt_section(user, "Title: ", "\n");
  std::string body = prompt_section(user, "Paper text:\n", "\n\nA previous answer was rejected");
  const auto sections = parse_markdown(body);

  std::vector<std::string> claims, methods, experiments;
  auto push = [](std::vector<std::string>& v, const std::string& s, std::size_t cap) {
    if (v.size() < cap && std::find(v.begin(), v.end(), s) == v.end() && s.size() >= 20) v.push_back(s);
  };
  for (const auto& sec : sections) {
    const std::string h = text::to_lower(sec.heading);
    const bool method_sec = has_any(h, {"method", "approach", "model", "framework", "architecture"});
    const bool exp_sec = has_any(h, {"experiment", "evaluation", "result", "ablation"});
    for (const auto& s : sec.sentences) {
      const std::string l = text::to_lower(s);
      if (has_any(l, {"we propose", "we introduce", "we present", "we show", "our contribution", "we demonstrate"})) {
        push(claims, s, 3);
      } else if (exp_sec || has_any(l, {"we evaluate", "we measure", "accuracy", "outperform", "benchmark"})) {
        push(experiments, s, 4);
      } else if (method_sec || has_any(l, {"we use", "we train", "our method", "our model", "we compute"})) {
        push(methods, s, 4);
      }
    }
  }
  if (claims.empty()) {
    for (const auto& sec : sections) {
      if (!sec.sentences.empty()) {
        claims.push_back(sec.sentences.front());
        break;
      }
    }
  }

  nlohmann::json nodes = nlohmann::json::array();
  nlohmann::json edges = nlohmann::json::array();
  nodes.push_back({{"id", "t"}, {"kind", "title"}, {"label", title.empty() ? "Untitled" : title}, {"excerpt", ""}});
  for (std::size_t i = 0; i < claims.size(); ++i) {
    const std::string id = "c" + std::to_string(i + 1);
    nodes.push_back({{"id", id}, {"kind", "claim"}, {"label", short_label(claims[i], 8)}, {"excerpt", claims[i]}});
    edges.push_back({{"from", "t"}, {"to", id}});
  }
  if (claims.empty()) return {{"nodes", nodes}, {"edges", edges}};
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const std::string id = "m" + std::to_string(i + 1);
    nodes.push_back({{"id", id}, {"kind", "method"}, {"label", short_label(methods[i], 8)}, {"excerpt", methods[i]}});
    edges.push_back({{"from", "c" + std::to_string(i % claims.size() + 1)}, {"to", id}});
  }
  if (!methods.empty()) {
    for (std::size_t i = 0; i < experiments.size(); ++i) {
      const std::string id = "e" + std::to_string(i + 1);
      nodes.push_back(
          {{"id", id}, {"kind", "experiment"}, {"label", short_label(experiments[i], 8)}, {"excerpt", experiments[i]}});
      edges.push_back({{"from", "m" + std::to_string(i % methods.size() + 1)}, {"to", id}});
    }
  }
  return {{"nodes", nodes}, {"edges", edges}};
}

nlohmann::json mock_polarity(const std::string& user) {
  const std::string l = text::to_lower(prompt_section(user, "Sentence: ", "\n"));
  const bool negative = has_any(l, {"unlike", "in contrast", "however", "fail", "suffer", "limited", "limitation",
                                    "cannot", "whereas", "drawback", "struggle", "poorly", "instead of"});
  return {{"polarity", negative ? "negative" : "positive"},
          {"rationale", negative ? "The sentence sets the work apart from the citation."
                                 : "The sentence relies on or agrees with the citation."}};
}

nlohmann::json mock_abstract_terms(const std::string& user) {
  const std::string abstract = prompt_section(user, "Abstract: ", "\n\nReturn");
  const auto sentences = texparse::segment_sentences(abstract);
  std::vector<std::string> background, target;
  bool in_target = false;
  for (const auto& s : sentences) {
    const std::string l = text::to_lower(s);
    if (!in_target && has_any(l, {"we ", "this paper", "in this work", "our ", "here,"})) in_target = true;
    (in_target ? target : background).push_back(s);
  }
  if (target.empty() && !background.empty()) {
    target.push_back(background.back());
    background.pop_back();
  }
  return {{"background", text::join(background, " ")}, {"target", text::join(target, " ")}};
}

nlohmann::json mock_relation_summary(const std::string& user) {
  const std::string related = prompt_section(user, "Related paper: ", "\n");
  const std::string main = prompt_section(user, "Main paper: ", "\n");
  const std::string relation = prompt_section(user, "Relation class: ", "\n");
  std::string evidence = prompt_section(user, "Evidence:\n", "\n\nIn two or three sentences");
  if (auto nl = evidence.find('\n'); nl != std::string::npos) evidence = evidence.substr(0, nl);
  if (evidence.size() > 240) evidence = evidence.substr(0, 240) + "...";
  return {{"summary", "\"" + related + "\" is " + relation + " work for \"" + main + "\". " + evidence}};
}

nlohmann::json mock_vote(const std::string& user, std::int64_t seed) {
  const std::string evidence = prompt_section(user, "Related work:\n", "\n\nDecide whether");
  // Contrasting citations and background matches nudge towards novel,
  // supporting citations and target matches towards not novel.
  int lean = 0;
  for (const auto& line : text::split(evidence, '\n')) {
    if (line.find(", contrasting)") != std::string::npos || line.find(", background)") != std::string::npos) ++lean;
    if (line.find(", supporting)") != std::string::npos || line.find(", target)") != std::string::npos) --lean;
  }
  const int threshold = std::clamp(55 + 5 * lean, 15, 85);
  const bool novel = static_cast<int>(mix(user, seed) % 100) < threshold;
  return {{"label", novel ? "novel" : "not_novel"},
          {"rationale", novel ? "The structure and the related work suggest a distinct contribution."
                              : "Closely related work covers much of the contribution."}};
}

nlohmann::json mock_report(const std::string& user) {
  const std::string title = prompt_section(user, "Paper: ", "\n");
  const std::string label = prompt_section(user, "rated the paper ", " (score");
  const std::string evidence = prompt_section(user, "Related work (ids in square brackets):\n", "\n\nThe ensemble");
  static const std::regex line_re(R"(^\[([^\]]+)\] (.*) \((citation|semantic), (\w+)\): )");
  nlohmann::json supporting = nlohmann::json::array();
  nlohmann::json contradictory = nlohmann::json::array();
  for (const auto& line : text::split(evidence, '\n')) {
    std::smatch m;
    if (!std::regex_search(line, m, line_re)) continue;
    const std::string id = m[1], name = m[2], cls = m[4];
    if ((cls == "contrasting" || cls == "background") && supporting.size() < 3) {
      supporting.push_back({{"related_id", id},
                            {"explanation", "\"" + name + "\" addresses a different problem setting (" + cls +
                                                "), which leaves room for the paper's contribution."}});
    } else if ((cls == "supporting" || cls == "target") && contradictory.size() < 3) {
      contradictory.push_back({{"related_id", id},
                               {"explanation", "\"" + name + "\" pursues a closely related goal (" + cls +
                                                   "), which overlaps with the paper's contribution."}});
    }
  }
  std::string summary = "\"" + title + "\" is assessed as " + (label == "novel" ? "novel" : "not novel") + ". ";
  summary += "The assessment draws on " + std::to_string(supporting.size()) + " supporting and " +
             std::to_string(contradictory.size()) + " contradictory related papers.";
  return {{"summary", summary}, {"supporting", supporting}, {"contradictory", contradictory}};
}

nlohmann::json mock_keywords(const std::string& user) {
  const std::string title = prompt_section(user, "Title: ", "\n");
  const std::string abstract = prompt_section(user, "Abstract: ", "\n\nReturn");
  std::map<std::string, int> freq;
  std::vector<std::string> order;
  auto add = [&](const std::string& text, int weight) {
    for (const auto& w : text::word_tokens(text)) {
      if (w.size() < 4 || stopwords().contains(w) || std::all_of(w.begin(), w.end(), ::isdigit)) continue;
      if (!freq.contains(w)) order.push_back(w);
      freq[w] += weight;
    }
  };
  add(title, 3);
  add(abstract, 1);
  std::stable_sort(order.begin(), order.end(), [&](const auto& a, const auto& b) { return freq[a] > freq[b]; });
  if (order.size() > 6) order.resize(6);
  while (order.size() < 3) order.push_back("paper" + std::to_string(order.size() + 1));
  return {{"keywords", order}};
}

nlohmann::json mock_judgment(const std::string& user) {
  auto richness = [](const std::string& s) {
    auto words = text::word_tokens(s);
    return std::set<std::string>(words.begin(), words.end()).size();
  };
  const auto first = richness(prompt_section(user, "Review 1:\n", "\n\nReview 2:"));
  const auto second = richness(prompt_section(user, "Review 2:\n", "\n\nWhich review"));
  const bool first_wins = first >= second;
  return {{"winner", first_wins ? "first" : "second"},
          {"reason", "The chosen review is more specific on this dimension."}};
}

void install_mock_responders(llm::MockProvider& provider) {
  using Call = llm::ProviderCall;
  provider.set_responder("graph_extraction.v1", [](const Call& c) { return mock_graph(c.original_user()); });
  provider.set_responder("citation_polarity.v1", [](const Call& c) { return mock_polarity(c.original_user()); });
  provider.set_responder("abstract_terms.v1", [](const Call& c) { return mock_abstract_terms(c.original_user()); });
  provider.set_responder("relation_summary.v1", [](const Call& c) { return mock_relation_summary(c.original_user()); });
  provider.set_responder("novelty_vote.v1",
                         [](const Call& c) { return mock_vote(c.original_user(), c.seed.value_or(0)); });
  provider.set_responder("novelty_report.v1", [](const Call& c) { return mock_report(c.original_user()); });
  provider.set_responder("keywords.v1", [](const Call& c) { return mock_keywords(c.original_user()); });
  provider.set_responder("pairwise_judgment.v1", [](const Call& c) { return mock_judgment(c.original_user()); });
}

}  // namespace novelscope::server
