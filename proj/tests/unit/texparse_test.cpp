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

#include <set>

#include "novelscope/ingest/arxiv.hpp"
#include "novelscope/texparse/texparse.hpp"
#include "support.hpp"

namespace ns = novelscope;
using namespace novelscope::texparse;
using nlohmann::json;

namespace {

ns::ingest::LatexBundle bundle_of(std::string main, std::vector<std::string> bibs = {}) {
  ns::ingest::LatexBundle b;
  b.arxiv_id = "test";
  b.main_file = "main.tex";
  b.main_source = std::move(main);
  b.bib_sources = std::move(bibs);
  return b;
}

ns::ingest::LatexBundle corpus_bundle() {
  const auto bytes = ns::text::read_file(testsupport::fixture("latex_corpus.tar.gz").string());
  return ns::ingest::bundle_from_eprint("corpus", bytes, {});
}

Bibliography bib_with(std::initializer_list<const char*> keys) {
  Bibliography b;
  for (const char* k : keys) b.entries[k] = BibEntry{std::string("Title ") + k, {}, 2020, ""};
  return b;
}

}  // namespace

TEST(Segmentation, HandAnnotatedCases) {
  const auto cases = json::parse(ns::text::read_file(testsupport::fixture("sentences/segmentation.json").string()));
  ASSERT_EQ(cases.size(), 50u);
  int agree = 0;
  for (const auto& c : cases) {
    const auto got = segment_sentences(c["text"].get<std::string>());
    const auto want = c["sentences"].get<std::vector<std::string>>();
    EXPECT_EQ(got, want) << c["text"];
    agree += got == want;
  }
  EXPECT_EQ(agree, 50);
}

TEST(Segmentation, OutputsAreTrimmedAndNonEmpty) {
  for (const char* p : {"  One.   Two!  ", "...", "A?B. C", "", "e.g. this. Then that."}) {
    for (const auto& s : segment_sentences(p)) {
      EXPECT_FALSE(s.empty());
      EXPECT_EQ(s, ns::text::trim(s));
    }
  }
}

TEST(Segmentation, ConcatenationRecoversTheParagraph) {
  const std::string p = "First one, with e.g. an example. Second one!  Third? Fourth via J. Smith.";
  const auto s = segment_sentences(p);
  ASSERT_EQ(s.size(), 4u);
  std::string joined;
  for (const auto& x : s) joined += (joined.empty() ? "" : " ") + x;
  EXPECT_EQ(ns::text::collapse_whitespace(joined), ns::text::collapse_whitespace(p));
}

TEST(CiteTokens, RoundTrip) {
  const std::string t = "a " + cite_token("x1") + " b " + cite_token("y:2") + cite_token("x1");
  EXPECT_EQ(find_cite_keys(t), (std::vector<std::string>{"x1", "y:2", "x1"}));
  EXPECT_TRUE(find_cite_keys("plain").empty());
}

TEST(Comments, StripKeepsEscapedPercent) {
  EXPECT_EQ(strip_comments("a 50\\% b % gone\nc"), "a 50\\% b \nc");
  EXPECT_EQ(strip_comments("x\n% whole line\ny"), "x\ny");
}

TEST(Contexts, OneContextPerCitingSentence) {
  const auto doc = to_plain_text(bundle_of("\\begin{document}A \\cite{x}. B.\\end{document}"));
  const auto ctx = extract_citation_contexts(doc, bib_with({"x"}));
  ASSERT_EQ(ctx.size(), 1u);
  EXPECT_EQ(ctx[0].citation_key, "x");
  EXPECT_EQ(ctx[0].sentence, "A " + cite_token("x") + ".");
}

TEST(Contexts, DuplicateKeyInOneSentenceIsOneContext) {
  const auto doc = to_plain_text(
      bundle_of("\\begin{document}We \\cite{x} and \\citep{x,y} again. Later \\cite{x}.\\end{document}"));
  const auto ctx = extract_citation_contexts(doc, bib_with({"x", "y"}));
  std::multiset<std::string> keys;
  for (const auto& c : ctx) keys.insert(c.citation_key);
  EXPECT_EQ(keys.count("x"), 2u);
  EXPECT_EQ(keys.count("y"), 1u);
}

TEST(Contexts, UnknownKeysAreWarnedOnce) {
  const auto doc =
      to_plain_text(bundle_of("\\begin{document}A \\cite{ghost}. B \\cite{ghost}.\\end{document}"));
  std::vector<std::string> warnings;
  EXPECT_TRUE(extract_citation_contexts(doc, bib_with({"x"}), default_config(), &warnings).empty());
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(Contexts, PositionAddressesTheSentence) {
  const auto bundle = corpus_bundle();
  const auto doc = to_plain_text(bundle);
  const auto ctx = extract_citation_contexts(doc, parse_bibliography(bundle));
  ASSERT_FALSE(ctx.empty());
  for (const auto& c : ctx) {
    EXPECT_EQ(doc.sentence_at(c.position, default_config()), c.sentence);
    EXPECT_EQ(doc.sections.at(c.position.section).heading, c.section_heading);
  }
}

TEST(Contexts, PlantedCorpusRecallAndNoCommentedKeys) {
  const auto planted = json::parse(ns::text::read_file(testsupport::fixture("latex_corpus_planted.json").string()));
  const auto bundle = corpus_bundle();
  const auto doc = to_plain_text(bundle);
  const auto ctx = extract_citation_contexts(doc, parse_bibliography(bundle));
  int found = 0;
  for (const auto& p : planted["planted"]) {
    const auto key = p["key"].get<std::string>();
    const auto fragment = p["fragment"].get<std::string>();
    const bool hit = std::any_of(ctx.begin(), ctx.end(), [&](const CitationContext& c) {
      return c.citation_key == key && c.sentence.find(fragment) != std::string::npos;
    });
    EXPECT_TRUE(hit) << key;
    found += hit;
  }
  EXPECT_EQ(found, 12);
  for (const auto& k : planted["commented_keys"]) {
    for (const auto& c : ctx) EXPECT_NE(c.citation_key, k.get<std::string>());
  }
}

TEST(PlainText, SectionsAndIncludedFiles) {
  const auto doc = to_plain_text(corpus_bundle());
  std::vector<std::string> headings;
  for (const auto& s : doc.sections) headings.push_back(s.heading);
  EXPECT_NE(std::find(headings.begin(), headings.end(), "Discussion"), headings.end());
  EXPECT_EQ(doc.render_markdown().find("omega1999"), std::string::npos);
}

TEST(PlainText, MathAndFormattingAreFlattened) {
  const auto doc = to_plain_text(bundle_of(
      "\\begin{document}\\section{Intro}We get \\textbf{bold} and $x^2$ here.\n\n"
      "\\begin{equation}E=mc^2\\end{equation}Next paragraph.\\end{document}"));
  ASSERT_FALSE(doc.sections.empty());
  const auto md = doc.render_markdown();
  EXPECT_NE(md.find("# Intro"), std::string::npos);
  EXPECT_NE(md.find("bold"), std::string::npos);
  EXPECT_EQ(md.find("\\textbf"), std::string::npos);
}

TEST(PlainText, UnbalancedBracesWarn) {
  const auto doc = to_plain_text(bundle_of("\\begin{document}Text \\textbf{never closed\\end{document}"));
  EXPECT_FALSE(doc.warnings.empty());
}

TEST(Bibliography, BibtexFields) {
  const auto bib = parse_bibtex(
      "@article{k1, title={{The} Title}, author={Doe, Jane and John Roe}, year={2019}}\n"
      "@misc{k2, title = \"Second\", year = 2021 }\n@comment{ignored}\n");
  ASSERT_EQ(bib.entries.size(), 2u);
  EXPECT_EQ(bib.entries.at("k1").title, "The Title");
  EXPECT_EQ(bib.entries.at("k1").year, 2019);
  EXPECT_EQ(bib.entries.at("k1").authors.size(), 2u);
  EXPECT_EQ(bib.entries.at("k2").title, "Second");
}

TEST(Bibliography, ThebibliographyNewblock) {
  const auto bib = parse_thebibliography(
      "\\begin{thebibliography}{9}\\bibitem{a} A. Author.\n\\newblock Paper title here.\n\\newblock In "
      "Venue, 2020.\n\\bibitem[X]{b} Free form text 2018.\\end{thebibliography}");
  ASSERT_EQ(bib.entries.size(), 2u);
  EXPECT_EQ(bib.entries.at("a").title, "Paper title here");
  EXPECT_EQ(bib.entries.at("a").year, 2020);
  EXPECT_NE(bib.entries.at("b").raw.find("Free form"), std::string::npos);
}

TEST(Bibliography, MissingIsNoBibliography) {
  try {
    parse_bibliography(bundle_of("\\begin{document}x\\end{document}"));
    FAIL();
  } catch (const ns::Error& e) {
    EXPECT_EQ(e.code(), ns::ErrorCode::kNoBibliography);
  }
}

TEST(Serialization, ContextRoundTrip) {
  const CitationContext c{"k", "s", "h", Position{1, 2, 3}};
  const CitationContext back = json(c).get<CitationContext>();
  EXPECT_EQ(back.citation_key, "k");
  EXPECT_EQ(back.position, c.position);
}
