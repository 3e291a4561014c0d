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

#include "novelscope/common/error.hpp"
#include "novelscope/common/text.hpp"
#include "novelscope/texparse/texparse.hpp"

namespace novelscope::texparse {

namespace {

// Strips braces and control words from a bibliography field value.
std::string clean_field(std::string_view value) {
  std::string out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    const char c = value[i];
    if (c == '{' || c == '}') continue;
    if (c == '\\') {
      std::size_t j = i + 1;
      if (j < value.size() && !std::isalpha(static_cast<unsigned char>(value[j]))) {
        // Escaped symbol or accent: keep escaped punctuation, drop accents.
        if (std::string_view("&%$#_").find(value[j]) != std::string_view::npos) out.push_back(value[j]);
        i = j;
        continue;
      }
      while (j < value.size() && std::isalpha(static_cast<unsigned char>(value[j]))) ++j;
      i = j - 1;
      continue;
    }
    out.push_back(c == '~' ? ' ' : c);
  }
  return text::collapse_whitespace(out);
}

std::optional<int> first_year(std::string_view s) {
  static const std::regex year(R"((^|[^0-9])((19|20)[0-9]{2})([^0-9]|$))");
  std::match_results<std::string_view::const_iterator> m;
  if (std::regex_search(s.begin(), s.end(), m, year)) return std::stoi(m[2].str());
  return std::nullopt;
}

std::vector<std::string> split_authors(std::string_view s) {
  static const std::regex sep(R"(\s+and\s+)", std::regex::icase);
  std::vector<std::string> authors;
  const std::string str(s);
  for (std::sregex_token_iterator it(str.begin(), str.end(), sep, -1), end; it != end; ++it) {
    auto a = clean_field(it->str());
    if (!a.empty()) authors.push_back(std::move(a));
  }
  return authors;
}

std::size_t skip_space(std::string_view s, std::size_t i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return i;
}

// Index just past the delimited group starting at s[i].
std::size_t balanced_end(std::string_view s, std::size_t i, char open, char close) {
  int depth = 0;
  for (; i < s.size(); ++i) {
    if (s[i] == '\\') {
      ++i;
      continue;
    }
    if (s[i] == open) ++depth;
    else if (s[i] == close && --depth == 0) return i + 1;
  }
  return s.size();
}

}  // namespace

Bibliography parse_bibtex(std::string_view s) {
  Bibliography bib;
  std::size_t i = 0;
  while ((i = s.find('@', i)) != std::string_view::npos) {
    const std::size_t entry_start = i;
    std::size_t j = i + 1;
    while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) ++j;
    const std::string type = text::to_lower(s.substr(i + 1, j - i - 1));
    j = skip_space(s, j);
    if (type.empty() || j >= s.size() || (s[j] != '{' && s[j] != '(')) {
      i = j;
      continue;
    }
    const char open = s[j];
    const char close = open == '{' ? '}' : ')';
    const std::size_t entry_end = balanced_end(s, j, open, close);
    i = entry_end;
    if (type == "comment" || type == "string" || type == "preamble") continue;

    const auto body = s.substr(j + 1, entry_end - j - 2);
    const auto comma = body.find(',');
    const std::string key = text::trim(body.substr(0, comma));
    if (key.empty() || bib.entries.contains(key)) continue;

    BibEntry entry;
    entry.raw = std::string(s.substr(entry_start, entry_end - entry_start));
    std::size_t p = comma == std::string_view::npos ? body.size() : comma + 1;
    while (p < body.size()) {
      p = skip_space(body, p);
      std::size_t q = p;
      while (q < body.size() && body[q] != '=' && body[q] != ',') ++q;
      if (q >= body.size() || body[q] == ',') {
        p = q + 1;
        continue;
      }
      const std::string name = text::to_lower(text::trim(body.substr(p, q - p)));
      p = skip_space(body, q + 1);
      std::string value;
      // value := part ('#' part)*
      while (p < body.size()) {
        if (body[p] == '{') {
          const auto e = balanced_end(body, p, '{', '}');
          value += body.substr(p + 1, e - p - 2);
          p = e;
        } else if (body[p] == '"') {
          auto e = p + 1;
          int depth = 0;
          while (e < body.size() && !(body[e] == '"' && depth == 0)) {
            if (body[e] == '{') ++depth;
            if (body[e] == '}') --depth;
            ++e;
          }
          value += body.substr(p + 1, e - p - 1);
          p = e + 1;
        } else {
          auto e = p;
          while (e < body.size() && body[e] != ',' && body[e] != '#' &&
                 !std::isspace(static_cast<unsigned char>(body[e]))) {
            ++e;
          }
          value += body.substr(p, e - p);
          p = e;
        }
        p = skip_space(body, p);
        if (p < body.size() && body[p] == '#') {
          p = skip_space(body, p + 1);
          continue;
        }
        break;
      }
      if (p < body.size() && body[p] == ',') ++p;
      if (name == "title") entry.title = clean_field(value);
      else if (name == "author") entry.authors = split_authors(value);
      else if (name == "year") entry.year = first_year(value);
    }
    bib.entries.emplace(key, std::move(entry));
  }
  return bib;
}

Bibliography parse_thebibliography(std::string_view s) {
  Bibliography bib;
  constexpr std::string_view kItem = "\\bibitem";
  std::size_t i = s.find(kItem);
  while (i != std::string_view::npos) {
    std::size_t j = i + kItem.size();
    j = skip_space(s, j);
    if (j < s.size() && s[j] == '[') j = balanced_end(s, j, '[', ']');
    j = skip_space(s, j);
    if (j >= s.size() || s[j] != '{') {
      i = s.find(kItem, j);
      continue;
    }
    const auto key_end = balanced_end(s, j, '{', '}');
    const std::string key = text::trim(s.substr(j + 1, key_end - j - 2));
    auto next = s.find(kItem, key_end);
    auto stop = s.find("\\end{thebibliography}", key_end);
    const auto end = std::min(next, stop);
    const auto body = s.substr(key_end, (end == std::string_view::npos ? s.size() : end) - key_end);

    BibEntry entry;
    entry.raw = text::collapse_whitespace(body);
    std::vector<std::string> blocks;
    std::size_t b = 0;
    while (true) {
      const auto nb = body.find("\\newblock", b);
      blocks.emplace_back(body.substr(b, nb == std::string_view::npos ? std::string_view::npos : nb - b));
      if (nb == std::string_view::npos) break;
      b = nb + 9;
    }
    if (blocks.size() >= 2) {
      entry.title = clean_field(blocks[1]);
      while (!entry.title.empty() && (entry.title.back() == '.' || entry.title.back() == ',')) {
        entry.title.pop_back();
      }
      static const std::regex comma_sep(R"(,\s*)");
      for (auto& a : split_authors(clean_field(blocks[0]))) {
        const std::string str = a;
        for (std::sregex_token_iterator it(str.begin(), str.end(), comma_sep, -1), e; it != e; ++it) {
          auto name = text::trim(it->str());
          while (!name.empty() && name.back() == '.') name.pop_back();
          if (!name.empty()) entry.authors.push_back(name);
        }
      }
    } else {
      const auto open = body.find("``");
      const auto close = open == std::string_view::npos ? open : body.find("''", open + 2);
      if (close != std::string_view::npos) {
        entry.title = clean_field(body.substr(open + 2, close - open - 2));
        while (!entry.title.empty() && entry.title.back() == ',') entry.title.pop_back();
      }
    }
    entry.year = first_year(entry.raw);
    if (!key.empty() && (!entry.title.empty() || !entry.raw.empty())) {
      bib.entries.emplace(key, std::move(entry));
    }
    i = next;
  }
  return bib;
}

Bibliography parse_bibliography(const ingest::LatexBundle& bundle) {
  if (bundle.main_source.empty()) throw Error(ErrorCode::kBadRequest, "empty main source");
  Bibliography bib;
  auto merge = [&](Bibliography part) {
    for (auto& [k, v] : part.entries) bib.entries.emplace(k, std::move(v));
  };
  for (const auto& src : bundle.bib_sources) {
    if (src.find("\\bibitem") != std::string::npos) {
      merge(parse_thebibliography(src));
    } else {
      merge(parse_bibtex(src));
    }
  }
  const std::string main = strip_comments(bundle.main_source);
  for (std::size_t p = 0; (p = main.find("\\begin{thebibliography}", p)) != std::string::npos;) {
    const auto e = main.find("\\end{thebibliography}", p);
    merge(parse_thebibliography(std::string_view(main).substr(p, e == std::string::npos ? std::string::npos : e - p)));
    p = e == std::string::npos ? main.size() : e;
  }
  if (bib.entries.empty()) throw Error(ErrorCode::kNoBibliography, "no bibliography entries found");
  return bib;
}

}  // namespace novelscope::texparse
