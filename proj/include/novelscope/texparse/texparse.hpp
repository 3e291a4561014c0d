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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "novelscope/ingest/types.hpp"

namespace novelscope::texparse {

struct Section {
  std::string heading;
  std::vector<std::string> paragraphs;
};

struct Position {
  std::size_t section = 0;
  std::size_t paragraph = 0;
  std::size_t sentence = 0;

  auto operator<=>(const Position&) const = default;
};

struct ParserConfig;

struct PlainDocument {
  std::string source_id;
  std::vector<Section> sections;
  // Recoverable problems met during conversion (e.g. unbalanced braces).
  std::vector<std::string> warnings;

  bool empty() const;
  // Sentence at `pos`, re-segmenting the addressed paragraph.
  std::string sentence_at(const Position& pos, const ParserConfig& config) const;
  // "# heading" lines followed by blank-line separated paragraphs.
  std::string render_markdown() const;
};

struct BibEntry {
  std::string title;
  std::vector<std::string> authors;
  std::optional<int> year;
  std::string raw;
};

struct Bibliography {
  std::map<std::string, BibEntry> entries;
};

struct CitationContext {
  std::string citation_key;
  std::string sentence;
  std::string section_heading;
  Position position;
};

// Config-file driven vocabularies: recognized citation commands and the
// abbreviation whitelist used by sentence segmentation.
struct ParserConfig {
  std::set<std::string> cite_commands;
  std::vector<std::string> abbreviations;

  static ParserConfig from_files(const std::string& cite_commands_path,
                                 const std::string& abbreviations_path);
};

// Loaded once from the asset directory.
const ParserConfig& default_config();

// Placeholder token substituted for each cited key: "⟨cite:KEY⟩".
std::string cite_token(std::string_view key);

// Keys of all placeholder tokens in `text`, in order of appearance.
std::vector<std::string> find_cite_keys(std::string_view text);

// Removes '%' comments. Lines that held only a comment disappear entirely so
// they do not introduce paragraph breaks.
std::string strip_comments(std::string_view source);

// Throws Error(kNoBibliography) when neither the bib sources nor the main
// source contain any entry.
Bibliography parse_bibliography(const ingest::LatexBundle& bundle);
Bibliography parse_bibtex(std::string_view source);
Bibliography parse_thebibliography(std::string_view source);

PlainDocument to_plain_text(const ingest::LatexBundle& bundle,
                            const ParserConfig& config = default_config());

// Splits at sentence terminators followed by whitespace and a non-lowercase
// character, except after whitelisted abbreviations and single-letter
// initials. Outputs are trimmed and never empty.
std::vector<std::string> segment_sentences(std::string_view paragraph,
                                           const ParserConfig& config = default_config());

// One context per (key, sentence position) for keys present in `bib`. Keys
// missing from the bibliography are reported through `warnings`.
std::vector<CitationContext> extract_citation_contexts(
    const PlainDocument& doc, const Bibliography& bib,
    const ParserConfig& config = default_config(),
    std::vector<std::string>* warnings = nullptr);

void to_json(nlohmann::json& j, const Position& p);
void from_json(const nlohmann::json& j, Position& p);
void to_json(nlohmann::json& j, const CitationContext& c);
void from_json(const nlohmann::json& j, CitationContext& c);

}  // namespace novelscope::texparse
