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
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "novelscope/assess/assess.hpp"
#include "novelscope/llm/handle.hpp"

namespace novelscope::evalharness {

using assess::Label;

// ---- ground truth -------------------------------------------------------

struct Binarized {
  double median = 0.0;
  Label label = Label::kNotNovel;
};

// Midpoint median; novel iff median >= 4. kEmptyScores, kOutOfRange.
Binarized binarize(const std::vector<int>& scores);

struct GroundTruth {
  std::string paper_id;
  std::vector<int> originality_scores;
  double median = 0.0;
  Label label = Label::kNotNovel;
  std::string venue;
  std::optional<int> year;
  std::optional<std::string> arxiv_id;
};

// One JSON object per line: {"id", "scores", "venue", "year", "arxiv_id"?}.
// Blank lines are ignored; a malformed line throws kBadRequest with its
// line number.
std::vector<GroundTruth> parse_ground_truth(std::string_view jsonl);
std::vector<GroundTruth> load_ground_truth(const std::string& path);

struct YearRow {
  std::string year;  // "Total" for the summary row
  long long count = 0;
  long long novel = 0;
};

// Per-year counts in ascending year order followed by a "Total" row. Records
// without a year are only counted in the total.
std::vector<YearRow> distribution_by_year(const std::vector<GroundTruth>& data);
std::string format_distribution_table(const std::vector<YearRow>& rows);

// ---- classification metrics ---------------------------------------------

struct Confusion {
  long long tp = 0, fp = 0, fn = 0, tn = 0;
  bool operator==(const Confusion&) const = default;
};

struct Metrics {
  double precision = 0, recall = 0, f1 = 0, accuracy = 0;
  Confusion confusion;
};

// Positive class is novel. kLengthMismatch, kBadRequest on empty input.
Metrics compute_metrics(const std::vector<Label>& predictions, const std::vector<Label>& truth);

// Rows in insertion order: "name | Precision | Recall | F1 | Accuracy".
std::string format_metrics_table(const std::string& first_column,
                                 const std::vector<std::pair<std::string, Metrics>>& rows);

// ---- Bradley-Terry --------------------------------------------------------

enum class Dimension { kClarity, kFaithfulness, kFactuality, kSpecificity, kContributions };

std::string_view to_string(Dimension d);
Dimension parse_dimension(std::string_view s);
const std::vector<Dimension>& all_dimensions();

struct DimensionDefinition {
  Dimension dimension;
  std::string definition;
};

// Loaded from the rationale dimensions config asset.
std::vector<DimensionDefinition> default_dimension_definitions();

enum class Winner { kA, kB };

struct PairwiseJudgment {
  Dimension dimension = Dimension::kClarity;
  std::string system_a;  // presented first
  std::string system_b;
  Winner winner = Winner::kA;
};

struct Rating {
  double strength = 1.0;  // normalized to mean 1 within the dimension
  double display = 1500.0;
};

double display_rating(double strength);  // 1500 + 400 log10(strength)

struct BTOptions {
  double tolerance = 1e-10;  // on the largest relative change per iteration
  int max_iterations = 10000;
  // Every system plays one virtual game against a fixed strength-1 opponent
  // and is credited half a win, keeping estimates finite under shutouts.
  double phantom_games = 1.0;
};

struct DimensionFit {
  std::map<std::string, Rating> ratings;
  int iterations = 0;
  bool converged = false;
  // Regularized log-likelihood before the first update and after each one.
  std::vector<double> log_likelihood;
};

// Fits judgments of a single dimension (the dimension field is ignored).
// kNoJudgments when empty, kDisconnectedGraph when the comparisons split the
// systems into more than one group.
DimensionFit fit_dimension(const std::vector<PairwiseJudgment>& judgments, const BTOptions& options = {});

struct BTRatings {
  std::map<Dimension, DimensionFit> dimensions;
  std::map<Dimension, std::string> errors;  // dimensions that could not be fitted
};

// Fits each dimension present in `judgments` independently. kNoJudgments
// when the list is empty.
BTRatings fit_bradley_terry(const std::vector<PairwiseJudgment>& judgments, const BTOptions& options = {});

// Systems as rows, dimensions as columns, rounded display ratings.
std::string format_ratings_table(const BTRatings& ratings);

enum class PairingScheme { kBothOrders, kSingleOrder };

// For every dimension and unordered pair of systems, asks the judge to
// compare the two rationales; kBothOrders asks again with the order swapped.
// Judgments whose output fails validation are skipped with a warning.
std::vector<PairwiseJudgment> run_tournament(const std::map<std::string, std::string>& rationales,
                                             const std::vector<DimensionDefinition>& dimensions,
                                             const llm::LlmHandle& llm,
                                             PairingScheme scheme = PairingScheme::kBothOrders,
                                             std::size_t parallelism = 4,
                                             std::vector<std::string>* warnings = nullptr);

void to_json(nlohmann::json& j, const Metrics& m);
void to_json(nlohmann::json& j, const PairwiseJudgment& p);
void from_json(const nlohmann::json& j, PairwiseJudgment& p);
void to_json(nlohmann::json& j, const BTRatings& r);

}  // namespace novelscope::evalharness
