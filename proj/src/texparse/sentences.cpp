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

#include <cctype>
#include <set>

#include "novelscope/common/text.hpp"
#include "novelscope/texparse/texparse.hpp"

namespace novelscope::texparse {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_closer(char c) { return c == ')' || c == ']' || c == '"' || c == '\''; }

bool ends_with_abbreviation(std::string_view upto, const std::vector<std::string>& abbrevs) {
  for (const auto& a : abbrevs) {
    if (upto.size() < a.size() || upto.compare(upto.size() - a.size(), a.size(), a) != 0) {
      continue;
    }
    const std::size_t before = upto.size() - a.size();
    if (before == 0 || !std::isalnum(static_cast<unsigned char>(upto[before - 1]))) return true;
  }
  // Single-letter initial such as "J. Smith".
  if (upto.size() >= 2 && std::isupper(static_cast<unsigned char>(upto[upto.size() - 2])) &&
      (upto.size() == 2 || is_space(upto[upto.size() - 3]))) {
    return true;
  }
  return false;
}

}  // namespace

std::vector<std::string> segment_sentences(std::string_view p, const ParserConfig& config) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < p.size() && is_space(p[start])) ++start;
  std::size_t i = start;
  while (i < p.size()) {
    const char c = p[i];
    if (c != '.' && c != '!' && c != '?') {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < p.size() && (p[j] == '.' || p[j] == '!' || p[j] == '?')) ++j;
    while (j < p.size() && is_closer(p[j])) ++j;
    if (j >= p.size()) break;
    if (!is_space(p[j])) {
      i = j;
      continue;
    }
    std::size_t k = j;
    while (k < p.size() && is_space(p[k])) ++k;
    if (k >= p.size()) break;
    const bool lowercase_next = std::islower(static_cast<unsigned char>(p[k])) != 0;
    const bool abbreviation =
        c == '.' && j == i + 1 && ends_with_abbreviation(p.substr(0, i + 1), config.abbreviations);
    if (lowercase_next || abbreviation) {
      i = k;
      continue;
    }
    out.push_back(text::trim(p.substr(start, j - start)));
    start = k;
    i = k;
  }
  if (start < p.size()) {
    auto last = text::trim(p.substr(start));
    if (!last.empty()) out.push_back(std::move(last));
  }
  return out;
}

std::vector<CitationContext> extract_citation_contexts(const PlainDocument& doc,
                                                       const Bibliography& bib,
                                                       const ParserConfig& config,
                                                       std::vector<std::string>* warnings) {
  std::vector<CitationContext> contexts;
  std::set<std::string> warned;
  for (std::size_t s = 0; s < doc.sections.size(); ++s) {
    const auto& section = doc.sections[s];
    for (std::size_t p = 0; p < section.paragraphs.size(); ++p) {
      const auto& paragraph = section.paragraphs[p];
      if (find_cite_keys(paragraph).empty()) continue;
      const auto sentences = segment_sentences(paragraph, config);
      for (std::size_t k = 0; k < sentences.size(); ++k) {
        std::set<std::string> seen;
        for (const auto& key : find_cite_keys(sentences[k])) {
          if (!seen.insert(key).second) continue;
          if (!bib.entries.contains(key)) {
            if (warnings != nullptr && warned.insert(key).second) {
              warnings->push_back("citation key not in bibliography: " + key);
            }
            continue;
          }
          contexts.push_back(CitationContext{key, sentences[k], section.heading, Position{s, p, k}});
        }
      }
    }
  }
  return contexts;
}

void to_json(nlohmann::json& j, const Position& p) {
  j = nlohmann::json{{"section", p.section}, {"paragraph", p.paragraph}, {"sentence", p.sentence}};
}

void from_json(const nlohmann::json& j, Position& p) {
  p.section = j.at("section").get<std::size_t>();
  p.paragraph = j.at("paragraph").get<std::size_t>();
  p.sentence = j.at("sentence").get<std::size_t>();
}

void to_json(nlohmann::json& j, const CitationContext& c) {
  j = nlohmann::json{{"citation_key", c.citation_key},
                     {"sentence", c.sentence},
                     {"section_heading", c.section_heading},
                     {"position", c.position}};
}

void from_json(const nlohmann::json& j, CitationContext& c) {
  c.citation_key = j.at("citation_key").get<std::string>();
  c.sentence = j.at("sentence").get<std::string>();
  c.section_heading = j.value("section_heading", std::string{});
  c.position = j.at("position").get<Position>();
}

}  // namespace novelscope::texparse
