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

#include "novelscope/assess/assess.hpp"
#include "novelscope/server/mock_responders.hpp"
#include "support.hpp"

namespace ns = novelscope;
using namespace novelscope::assess;
using nlohmann::json;
namespace llm = novelscope::llm;
namespace rt = novelscope::retrieval;
namespace graph = novelscope::graph;

namespace {

rt::RelatedPaper related(std::string id, rt::Source source, rt::RelationClass rel, double sim) {
  rt::RelatedPaper p;
  p.record.id = id;
  p.record.title = "Title " + id;
  p.source = source;
  p.relation = rel;
  p.raw_similarity = sim;
  p.similarity = std::max(0.0, sim);
  p.summary = "Summary of " + id + ".";
  return p;
}

ns::ingest::PaperRecord paper() {
  ns::ingest::PaperRecord r;
  r.id = "arxiv:0000.00001";
  r.title = "A Paper";
  r.abstract = "We propose sparse adapters for low-resource speech recognition and evaluate them.";
  return r;
}

// Vote responder that answers sample i (seed i) with votes[i].
void script_votes(llm::MockProvider& p, std::vector<int> votes) {
  p.set_responder("novelty_vote.v1", [votes](const llm::ProviderCall& c) {
    return json{{"label", votes.at(static_cast<std::size_t>(c.seed.value())) ? "novel" : "not_novel"}};
  });
}

}  // namespace

TEST(Scoring, MeanAndThresholdOverEveryVoteVector) {
  for (int len = 1; len <= 8; ++len) {
    for (int mask = 0; mask < (1 << len); ++mask) {
      std::vector<int> votes;
      for (int i = 0; i < len; ++i) votes.push_back(mask >> i & 1);
      const int novel = __builtin_popcount(static_cast<unsigned>(mask));
      testsupport::MockLlm m;
      script_votes(*m.provider, votes);
      ScoringOptions opts;
      opts.k_samples = static_cast<std::size_t>(len);
      const auto r = score_novelty("graph", "evidence", m.handle(), opts);
      ASSERT_EQ(r.samples, votes);
      ASSERT_EQ(r.score, static_cast<double>(novel) / len);
      ASSERT_EQ(label_for(r.score) == Label::kNovel, 2 * novel >= len) << "len=" << len << " mask=" << mask;
    }
  }
}

TEST(Scoring, ThresholdEdges) {
  EXPECT_EQ(label_for(0.5), Label::kNovel);
  EXPECT_EQ(label_for(std::nextafter(0.5, 0.0)), Label::kNotNovel);
  EXPECT_EQ(mean_vote({1, 0, 1, 0}), 0.5);
  EXPECT_THROW(mean_vote({}), ns::Error);
}

TEST(Scoring, InvalidSamplesAreDropped) {
  testsupport::MockLlm m;
  script_votes(*m.provider, {1, 1, 0, 1, 0});
  // three bad answers exhaust the retries of whichever sample gets them first
  m.provider->script("novelty_vote.v1", {llm::MockProvider::Outcome::raw("{}"), llm::MockProvider::Outcome::raw("{}"),
                                         llm::MockProvider::Outcome::raw("{}")});
  ScoringOptions opts;
  opts.parallelism = 1;
  const auto r = score_novelty("g", "e", m.handle(), opts);
  EXPECT_EQ(r.samples, (std::vector<int>{1, 0, 1, 0}));
  EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(Scoring, AllSamplesFailingIsScoringFailed) {
  testsupport::MockLlm m;
  m.provider->set_responder("novelty_vote.v1", [](const llm::ProviderCall&) { return json{{"label", "maybe"}}; });
  try {
    score_novelty("g", "e", m.handle());
    FAIL();
  } catch (const ns::Error& e) {
    EXPECT_EQ(e.code(), ns::ErrorCode::kScoringFailed);
  }
}

TEST(Scoring, SamplesAreSeededByIndexAtTemperatureOne) {
  testsupport::MockLlm m;
  script_votes(*m.provider, {0, 1, 0});
  ScoringOptions opts;
  opts.k_samples = 3;
  score_novelty("g", "e", m.handle(), opts);
  std::set<std::int64_t> seeds;
  for (const auto& c : m.provider->history()) {
    seeds.insert(*c.seed);
    EXPECT_EQ(c.temperature, 1.0);
  }
  EXPECT_EQ(seeds, (std::set<std::int64_t>{0, 1, 2}));
}

TEST(Evidence, OrderAndText) {
  using rt::RelationClass;
  using rt::Source;
  const std::vector<rt::RelatedPaper> rel = {related("s2", Source::kSemantic, RelationClass::kTarget, 0.9),
                                             related("c2", Source::kCitation, RelationClass::kSupporting, 0.1),
                                             related("c1", Source::kCitation, RelationClass::kContrasting, 0.1),
                                             related("c3", Source::kCitation, RelationClass::kSupporting, 0.7)};
  std::vector<std::string> ids;
  for (const auto& p : evidence_order(rel)) ids.push_back(p.record.id);
  EXPECT_EQ(ids, (std::vector<std::string>{"c3", "c1", "c2", "s2"}));
  const auto text = build_evidence_text(rel);
  EXPECT_EQ(text.rfind("[c3] Title c3 (citation, supporting): Summary of c3.", 0), 0u);
  EXPECT_NE(text.find("\n\n[s2] Title s2 (semantic, target): "), std::string::npos);
  EXPECT_EQ(build_evidence_text({}), kNoRelatedMarker);
}

TEST(Report, UnknownEvidenceIdsAreDropped) {
  testsupport::MockLlm m;
  script_votes(*m.provider, {1, 1, 1, 0, 0});
  m.provider->set_responder("novelty_report.v1", [](const llm::ProviderCall&) {
    return json{{"summary", " Novel enough. "},
                {"supporting", {{{"related_id", "c1"}, {"explanation", "differs"}},
                                {{"related_id", "ghost"}, {"explanation", "?"}}}},
                {"contradictory", json::array()}};
  });
  m.provider->set_responder("keywords.v1",
                            [](const llm::ProviderCall&) { return json{{"keywords", {"Sparse", "sparse", "speech", "adapters"}}}; });
  graph::PaperGraph g;
  g.nodes = {{"t", graph::NodeKind::kTitle, "A Paper", "", false}};
  const auto r = generate_report(paper(), g, {related("c1", rt::Source::kCitation, rt::RelationClass::kContrasting, 0.3)},
                                 m.handle());
  EXPECT_EQ(r.score, 0.6);
  EXPECT_EQ(r.label, Label::kNovel);
  EXPECT_EQ(r.summary, "Novel enough.");
  ASSERT_EQ(r.supporting.size(), 1u);
  EXPECT_EQ(r.supporting[0].related_id, "c1");
  EXPECT_EQ(r.keywords, (std::vector<std::string>{"sparse", "speech", "adapters"}));
  EXPECT_FALSE(r.abstract_only);
  EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(Report, WithoutGraphIsAbstractOnly) {
  testsupport::MockLlm m;
  ns::server::install_mock_responders(*m.provider);
  const auto r = generate_report(paper(), std::nullopt, {}, m.handle());
  EXPECT_TRUE(r.abstract_only);
  EXPECT_TRUE(r.supporting.empty() && r.contradictory.empty());
  int report_calls = 0;
  for (const auto& c : m.provider->history()) {
    if (c.schema_id != "novelty_report.v1") continue;
    ++report_calls;
    EXPECT_NE(c.original_user().find(kNoRelatedMarker), std::string::npos);
  }
  EXPECT_EQ(report_calls, 1);
}

TEST(Report, ModelFailureIsReportFailed) {
  testsupport::MockLlm m;
  script_votes(*m.provider, {1, 1, 1, 1, 1});
  m.provider->set_responder("novelty_report.v1", [](const llm::ProviderCall&) { return json{{"summary", ""}}; });
  try {
    generate_report(paper(), std::nullopt, {}, m.handle());
    FAIL();
  } catch (const ns::Error& e) {
    EXPECT_EQ(e.code(), ns::ErrorCode::kReportFailed);
  }
}

TEST(Keywords, TooFewGiveEmptyListWithWarning) {
  testsupport::MockLlm m;
  m.provider->set_responder("keywords.v1", [](const llm::ProviderCall&) { return json{{"keywords", {"a", "A "}}}; });
  std::vector<std::string> warnings;
  EXPECT_TRUE(extract_keywords(paper(), m.handle(), &warnings).empty());
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(Keywords, CappedAtEight) {
  testsupport::MockLlm m;
  m.provider->set_responder("keywords.v1", [](const llm::ProviderCall&) {
    json k = json::array();
    for (int i = 0; i < 12; ++i) k.push_back("k" + std::to_string(i));
    return json{{"keywords", k}};
  });
  EXPECT_EQ(extract_keywords(paper(), m.handle()).size(), 8u);
}

TEST(Rubric, BundledRubricIsNonEmpty) { EXPECT_GT(default_rubric().size(), 100u); }

TEST(Serialization, ReportRoundTrip) {
  NoveltyReport r;
  r.paper_id = "p";
  r.score = 0.4;
  r.samples = {1, 0, 1, 0, 0};
  r.supporting = {{"x", "why", EvidencePolarity::kSupports}};
  r.contradictory = {{"y", "why not", EvidencePolarity::kContradicts}};
  const json j = r;
  EXPECT_EQ(json(j.get<NoveltyReport>()), j);
  EXPECT_EQ(j["label"], "not_novel");
}
