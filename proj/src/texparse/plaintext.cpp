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
#include <regex>
#include <set>

#include "novelscope/common/assets.hpp"
#include "novelscope/common/text.hpp"
#include "novelscope/texparse/texparse.hpp"

namespace novelscope::texparse {

namespace {

// Section boundaries are carried through conversion as
// kSectionStart + heading + kSectionEnd.
constexpr char kSectionStart = '\x1e';
constexpr char kSectionEnd = '\x1f';

constexpr std::string_view kTokenOpen = "⟨cite:";
constexpr std::string_view kTokenClose = "⟩";

const std::set<std::string, std::less<>> kFloatEnvs = {
    "figure", "figure*", "table", "table*", "wrapfigure", "wraptable",
    "algorithm", "algorithm*", "subfigure", "SCfigure", "sidewaystable"};

const std::set<std::string, std::less<>> kMathEnvs = {
    "equation", "equation*", "align", "align*", "gather", "gather*",
    "multline", "multline*", "eqnarray", "eqnarray*", "displaymath",
    "math", "flalign", "flalign*", "alignat", "alignat*", "split"};

const std::set<std::string, std::less<>> kDroppedEnvs = {
    "thebibliography", "comment", "verbatim", "lstlisting", "minted",
    "tikzpicture", "tabular", "tabular*", "tabularx", "algorithmic",
    "filecontents", "filecontents*"};

const std::set<std::string, std::less<>> kSectionCommands = {
    "part", "chapter", "section", "subsection", "subsubsection"};

const std::set<std::string, std::less<>> kParagraphCommands = {"paragraph", "subparagraph"};

// Commands whose brace arguments are discarded together with the command.
const std::set<std::string, std::less<>> kDropWithArgs = {
    "label", "includegraphics", "vspace", "hspace", "bibliographystyle", "bibliography",
    "addbibresource", "newcommand", "renewcommand", "providecommand", "usepackage",
    "setlength", "addtolength", "setcounter", "addtocounter", "pagestyle",
    "thispagestyle", "nocite", "input", "include", "documentclass", "newenvironment",
    "renewenvironment", "DeclareMathOperator", "definecolor", "color", "hypersetup",
    "fontsize", "linespread", "captionsetup", "graphicspath", "author", "title",
    "date", "affiliation", "address", "email", "thanks", "iclrfinalcopy",
    "icmltitle", "icmlauthor", "icmlaffiliation", "icmlkeywords", "icmlcorrespondingauthor"};

const std::set<std::string, std::less<>> kRefCommands = {
    "ref", "eqref", "cref", "Cref", "autoref", "pageref", "nameref", "vref", "Vref"};

class Converter {
 public:
  explicit Converter(const ParserConfig& config, std::vector<std::string>& warnings)
      : config_(config), warnings_(warnings) {}

  std::string convert(std::string_view s) {
    std::string out;
    std::size_t i = 0;
    while (i < s.size()) {
      const char c = s[i];
      if (c == '\\') {
        i = command(s, i, out);
      } else if (c == '$') {
        i = inline_math(s, i, out);
      } else if (c == '{' || c == '}') {
        ++i;
      } else if (c == '~') {
        out.push_back(' ');
        ++i;
      } else if (s.compare(i, 2, "``") == 0 || s.compare(i, 2, "''") == 0) {
        out.push_back('"');
        i += 2;
      } else {
        out.push_back(c);
        ++i;
      }
    }
    return out;
  }

 private:
  // Index just past the group that opens at s[open] ('{' or '['), or npos if
  // it never closes.
  std::size_t group_end(std::string_view s, std::size_t open) {
    const char o = s[open];
    const char cl = o == '{' ? '}' : ']';
    int depth = 0;
    for (std::size_t i = open; i < s.size(); ++i) {
      if (s[i] == '\\') {
        ++i;
        continue;
      }
      if (s[i] == o) ++depth;
      if (s[i] == cl && --depth == 0) return i + 1;
    }
    return std::string_view::npos;
  }

  // Reads a {...} group at s[pos]; returns its content and advances pos. On
  // unbalanced input the rest of the text becomes the content.
  std::string_view read_group(std::string_view s, std::size_t& pos) {
    const std::size_t end = group_end(s, pos);
    if (end == std::string_view::npos) {
      warnings_.push_back("unbalanced braces near offset " + std::to_string(pos));
      auto content = s.substr(pos + 1);
      pos = s.size();
      return content;
    }
    auto content = s.substr(pos + 1, end - pos - 2);
    pos = end;
    return content;
  }

  void skip_optionals(std::string_view s, std::size_t& pos) {
    while (true) {
      std::size_t p = pos;
      while (p < s.size() && (s[p] == ' ' || s[p] == '\t')) ++p;
      if (p >= s.size() || s[p] != '[') return;
      const std::size_t end = group_end(s, p);
      if (end == std::string_view::npos) return;
      pos = end;
    }
  }

  bool brace_follows(std::string_view s, std::size_t& pos) {
    std::size_t p = pos;
    while (p < s.size() && (s[p] == ' ' || s[p] == '\t' || s[p] == '\n')) ++p;
    if (p < s.size() && s[p] == '{') {
      pos = p;
      return true;
    }
    return false;
  }

  std::size_t command(std::string_view s, std::size_t i, std::string& out) {
    std::size_t j = i + 1;
    if (j >= s.size()) return j;
    if (!std::isalpha(static_cast<unsigned char>(s[j]))) {
      return control_symbol(s, j, out);
    }
    while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) ++j;
    std::string name(s.substr(i + 1, j - i - 1));
    if (j < s.size() && s[j] == '*') ++j;

    if (name == "begin") return environment(s, j, out);
    if (name == "end") {
      if (j < s.size() && s[j] == '{') read_group(s, j);
      return j;
    }
    if (config_.cite_commands.contains(name)) return citation(s, j, out);
    if (kSectionCommands.contains(name)) {
      skip_optionals(s, j);
      if (brace_follows(s, j)) {
        const auto heading = text::collapse_whitespace(convert(read_group(s, j)));
        out.push_back(kSectionStart);
        out += heading;
        out.push_back(kSectionEnd);
      }
      return j;
    }
    if (kParagraphCommands.contains(name)) {
      skip_optionals(s, j);
      out += "\n\n";
      if (brace_follows(s, j)) {
        const auto lead = text::trim(convert(read_group(s, j)));
        out += lead;
        if (!lead.empty() && lead.find_last_of(".!?:") != lead.size() - 1) out.push_back('.');
        out.push_back(' ');
      }
      return j;
    }
    if (name == "item") {
      skip_optionals(s, j);
      out += "\n\n";
      return j;
    }
    if (name == "par") {
      out += "\n\n";
      return j;
    }
    if (kDropWithArgs.contains(name)) {
      skip_optionals(s, j);
      while (brace_follows(s, j)) read_group(s, j);
      return j;
    }
    if (kRefCommands.contains(name)) {
      skip_optionals(s, j);
      if (brace_follows(s, j)) read_group(s, j);
      out += "[ref]";
      return j;
    }
    if (name == "href") {
      if (brace_follows(s, j)) read_group(s, j);
      if (brace_follows(s, j)) out += convert(read_group(s, j));
      return j;
    }
    if (name == "url") {
      if (brace_follows(s, j)) out += std::string(read_group(s, j));
      return j;
    }
    // Unknown macro: drop it, keep the content of directly attached groups.
    skip_optionals(s, j);
    while (j < s.size() && s[j] == '{') out += convert(read_group(s, j));
    return j;
  }

  std::size_t control_symbol(std::string_view s, std::size_t j, std::string& out) {
    const char c = s[j];
    switch (c) {
      case '%': case '&': case '_': case '#': case '$': case '{': case '}':
        out.push_back(c);
        return j + 1;
      case '\\': case ' ': case ',': case ';': case ':': case '!': case '\n':
        out.push_back(' ');
        return j + 1;
      case '(': {
        const auto end = s.find("\\)", j);
        out += "[math]";
        return end == std::string_view::npos ? s.size() : end + 2;
      }
      case '[': {
        const auto end = s.find("\\]", j);
        out += "[math]";
        return end == std::string_view::npos ? s.size() : end + 2;
      }
      default:
        // Accents and other symbols: drop the command, keep what follows.
        return j + 1;
    }
  }

  std::size_t inline_math(std::string_view s, std::size_t i, std::string& out) {
    const bool display = s.compare(i, 2, "$$") == 0;
    const std::string_view delim = display ? "$$" : "$";
    std::size_t p = i + delim.size();
    while (true) {
      p = s.find(delim, p);
      if (p == std::string_view::npos) {
        warnings_.push_back("unterminated math near offset " + std::to_string(i));
        out += "[math]";
        return s.size();
      }
      if (s[p - 1] == '\\') {
        ++p;
        continue;
      }
      break;
    }
    out += "[math]";
    return p + delim.size();
  }

  std::size_t citation(std::string_view s, std::size_t j, std::string& out) {
    skip_optionals(s, j);
    if (!brace_follows(s, j)) return j;
    const auto keys = read_group(s, j);
    bool first = true;
    for (const auto& raw : text::split(keys, ',')) {
      const auto key = text::trim(raw);
      if (key.empty()) continue;
      if (!first) out.push_back(' ');
      out += cite_token(key);
      first = false;
    }
    return j;
  }

  // Index of the matching \end{env} for an environment whose body starts at
  // `from`, honoring nesting of the same environment.
  std::pair<std::size_t, std::size_t> find_env_end(std::string_view s, std::size_t from,
                                                   const std::string& env) {
    const std::string open = "\\begin{" + env + "}";
    const std::string close = "\\end{" + env + "}";
    int depth = 1;
    std::size_t p = from;
    while (true) {
      const auto next_open = s.find(open, p);
      const auto next_close = s.find(close, p);
      if (next_close == std::string_view::npos) return {s.size(), s.size()};
      if (next_open != std::string_view::npos && next_open < next_close) {
        ++depth;
        p = next_open + open.size();
        continue;
      }
      if (--depth == 0) return {next_close, next_close + close.size()};
      p = next_close + close.size();
    }
  }

  std::string captions(std::string_view body) {
    std::string out;
    std::size_t p = 0;
    while ((p = body.find("\\caption", p)) != std::string_view::npos) {
      std::size_t j = p + 8;
      if (j < body.size() && std::isalpha(static_cast<unsigned char>(body[j]))) {
        p = j;
        continue;
      }
      if (j < body.size() && body[j] == '*') ++j;
      skip_optionals(body, j);
      if (brace_follows(body, j)) {
        out += "\n\n";
        out += convert(read_group(body, j));
        out += "\n\n";
      }
      p = j;
    }
    return out;
  }

  std::size_t environment(std::string_view s, std::size_t j, std::string& out) {
    if (!brace_follows(s, j)) return j;
    const std::string env = text::trim(read_group(s, j));
    const auto [body_end, after] = find_env_end(s, j, env);
    if (body_end == s.size()) {
      warnings_.push_back("unterminated environment " + env);
    }
    const auto body = s.substr(j, body_end - j);
    if (kFloatEnvs.contains(env)) {
      out += captions(body);
    } else if (kMathEnvs.contains(env)) {
      out += " [math] ";
    } else if (kDroppedEnvs.contains(env)) {
      // nothing
    } else if (env == "abstract") {
      out.push_back(kSectionStart);
      out += "Abstract";
      out.push_back(kSectionEnd);
      out += convert(body);
    } else {
      out += convert(body);
    }
    return after;
  }

  const ParserConfig& config_;
  std::vector<std::string>& warnings_;
};

std::string_view document_body(std::string_view source) {
  constexpr std::string_view kBegin = "\\begin{document}";
  constexpr std::string_view kEnd = "\\end{document}";
  const auto b = source.find(kBegin);
  if (b == std::string_view::npos) return source;
  auto body = source.substr(b + kBegin.size());
  const auto e = body.find(kEnd);
  return e == std::string_view::npos ? body : body.substr(0, e);
}

std::vector<std::string> split_paragraphs(std::string_view s) {
  static const std::regex blank(R"(\n[ \t\r]*\n)");
  std::vector<std::string> paragraphs;
  const std::string str(s);
  for (std::sregex_token_iterator it(str.begin(), str.end(), blank, -1), end; it != end; ++it) {
    auto p = text::collapse_whitespace(it->str());
    if (!p.empty()) paragraphs.push_back(std::move(p));
  }
  return paragraphs;
}

}  // namespace

std::string cite_token(std::string_view key) {
  std::string token(kTokenOpen);
  token += key;
  token += kTokenClose;
  return token;
}

std::vector<std::string> find_cite_keys(std::string_view s) {
  std::vector<std::string> keys;
  std::size_t p = 0;
  while ((p = s.find(kTokenOpen, p)) != std::string_view::npos) {
    const auto start = p + kTokenOpen.size();
    const auto end = s.find(kTokenClose, start);
    if (end == std::string_view::npos) break;
    keys.emplace_back(s.substr(start, end - start));
    p = end + kTokenClose.size();
  }
  return keys;
}

std::string strip_comments(std::string_view source) {
  std::string out;
  out.reserve(source.size());
  std::size_t start = 0;
  while (start < source.size()) {
    auto end = source.find('\n', start);
    const bool has_newline = end != std::string_view::npos;
    if (!has_newline) end = source.size();
    const auto line = source.substr(start, end - start);
    std::size_t cut = std::string_view::npos;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] != '%') continue;
      std::size_t backslashes = 0;
      for (std::size_t k = i; k > 0 && line[k - 1] == '\\'; --k) ++backslashes;
      if (backslashes % 2 == 0) {
        cut = i;
        break;
      }
    }
    if (cut == std::string_view::npos) {
      out.append(line);
      if (has_newline) out.push_back('\n');
    } else {
      const auto kept = line.substr(0, cut);
      if (!text::trim(kept).empty()) {
        out.append(kept);
        if (has_newline) out.push_back('\n');
      }
    }
    start = end + 1;
  }
  return out;
}

ParserConfig ParserConfig::from_files(const std::string& cite_commands_path,
                                      const std::string& abbreviations_path) {
  ParserConfig config;
  for (auto& line : text::read_config_lines(cite_commands_path)) {
    config.cite_commands.insert(std::move(line));
  }
  config.abbreviations = text::read_config_lines(abbreviations_path);
  return config;
}

const ParserConfig& default_config() {
  static const ParserConfig config = ParserConfig::from_files(
      asset_path("config/cite_commands.txt"), asset_path("config/abbreviations.txt"));
  return config;
}

bool PlainDocument::empty() const {
  for (const auto& s : sections) {
    if (!s.paragraphs.empty()) return false;
  }
  return true;
}

std::string PlainDocument::sentence_at(const Position& pos, const ParserConfig& config) const {
  const auto& paragraph = sections.at(pos.section).paragraphs.at(pos.paragraph);
  return segment_sentences(paragraph, config).at(pos.sentence);
}

std::string PlainDocument::render_markdown() const {
  std::string out;
  for (const auto& s : sections) {
    if (!s.heading.empty()) {
      out += "# " + s.heading + "\n\n";
    }
    for (const auto& p : s.paragraphs) out += p + "\n\n";
  }
  return out;
}

PlainDocument to_plain_text(const ingest::LatexBundle& bundle, const ParserConfig& config) {
  PlainDocument doc;
  doc.source_id = bundle.arxiv_id;
  const std::string uncommented = strip_comments(bundle.main_source);
  Converter converter(config, doc.warnings);
  const std::string converted = converter.convert(document_body(uncommented));

  Section current;
  std::size_t pos = 0;
  auto flush = [&](std::string_view chunk) {
    for (auto& p : split_paragraphs(chunk)) current.paragraphs.push_back(std::move(p));
  };
  while (pos < converted.size()) {
    const auto marker = converted.find(kSectionStart, pos);
    if (marker == std::string::npos) {
      flush(std::string_view(converted).substr(pos));
      break;
    }
    flush(std::string_view(converted).substr(pos, marker - pos));
    const auto close = converted.find(kSectionEnd, marker);
    if (!current.paragraphs.empty()) doc.sections.push_back(std::move(current));
    current = Section{};
    current.heading = converted.substr(marker + 1, close - marker - 1);
    pos = close + 1;
  }
  if (!current.paragraphs.empty()) doc.sections.push_back(std::move(current));
  return doc;
}

}  // namespace novelscope::texparse
