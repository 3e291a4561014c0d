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

#include "novelscope/evalharness/evalharness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "novelscope/common/assets.hpp"
#include "novelscope/common/error.hpp"
#include "novelscope/common/parallel.hpp"
#include "novelscope/common/text.hpp"

namespace novelscope::evalharness {

namespace {

double ratio(long long num, long long den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

// Left-aligned first column, right-aligned rest, '|' separated, with a rule
// under the header.
std::string render_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    width.resize(std::max(width.size(), r.size()), 0);
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  auto line = [&](const std::vector<std::string>& r) {
    std::string s;
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c > 0) s += " | ";
      const std::string pad(width[c] - r[c].size(), ' ');
      s += c == 0 ? r[c] + pad : pad + r[c];
    }
    return s + "\n";
  };
  std::string out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out += line(rows[i]);
    if (i == 0) {
      std::string rule;
      for (std::size_t c = 0; c < width.size(); ++c) {
        if (c > 0) rule += "-+-";
        rule += std::string(width[c], '-');
      }
      out += rule + "\n";
    }
  }
  return out;
}

std::string capitalized(std::string_view s) {
  std::string out(s);
  if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

}  // namespace

// ---- ground truth -------------------------------------------------------

Binarized binarize(const std::vector<int>& scores) {
  if (scores.empty()) throw Error(ErrorCode::kEmptyScores, "no originality scores");
  for (int s : scores) {
    if (s < 1 || s > 5) throw Error(ErrorCode::kOutOfRange, "score " + std::to_string(s) + " outside [1, 5]");
  }
  std::vector<int> sorted = scores;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double median = n % 2 == 1 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
  return {median, median >= 4.0 ? Label::kNovel : Label::kNotNovel};
}

std::vector<GroundTruth> parse_ground_truth(std::string_view jsonl) {
  std::vector<GroundTruth> out;
  std::size_t line_no = 0;
  for (const auto& line : text::split(jsonl, '\n')) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      GroundTruth g;
      g.paper_id = j.at("id").get<std::string>();
      g.originality_scores = j.at("scores").get<std::vector<int>>();
      auto b = binarize(g.originality_scores);
      g.median = b.median;
      g.label = b.label;
      g.venue = j.value("venue", std::string{});
      if (j.contains("year") && !j["year"].is_null()) g.year = j["year"].get<int>();
      if (j.contains("arxiv_id") && j["arxiv_id"].is_string()) g.arxiv_id = j["arxiv_id"].get<std::string>();
      out.push_back(std::move(g));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kBadRequest,
                  "ground truth line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<GroundTruth> load_ground_truth(const std::string& path) {
  return parse_ground_truth(text::read_file(path));
}

std::vector<YearRow> distribution_by_year(const std::vector<GroundTruth>& data) {
  std::map<int, YearRow> by_year;
  YearRow total{"Total", 0, 0};
  for (const auto& g : data) {
    const long long novel = g.label == Label::kNovel ? 1 : 0;
    total.count += 1;
    total.novel += novel;
    if (!g.year) continue;
    auto& row = by_year[*g.year];
    row.year = std::to_string(*g.year);
    row.count += 1;
    row.novel += novel;
  }
  std::vector<YearRow> out;
  for (auto& [_, row] : by_year) out.push_back(row);
  out.push_back(total);
  return out;
}

std::string format_distribution_table(const std::vector<YearRow>& rows) {
  long long total = 0;
  for (const auto& r : rows) {
    if (r.year == "Total") total = r.count;
  }
  std::vector<std::vector<std::string>> cells = {{"Year", "Count", "Count %", "Novel", "Novel %"}};
  for (const auto& r : rows) {
    cells.push_back({r.year, std::to_string(r.count), fixed(100.0 * ratio(r.count, total), 1) + "%",
                     std::to_string(r.novel), fixed(100.0 * ratio(r.novel, r.count), 1) + "%"});
  }
  return render_table(cells);
}

// ---- classification metrics ---------------------------------------------

Metrics compute_metrics(const std::vector<Label>& predictions, const std::vector<Label>& truth) {
  if (predictions.size() != truth.size()) {
    throw Error(ErrorCode::kLengthMismatch, std::to_string(predictions.size()) + " predictions for " +
                                                std::to_string(truth.size()) + " labels");
  }
  if (predictions.empty()) throw Error(ErrorCode::kBadRequest, "no predictions to score");
  Metrics m;
  auto& c = m.confusion;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool p = predictions[i] == Label::kNovel;
    const bool t = truth[i] == Label::kNovel;
    if (p && t) ++c.tp;
    else if (p && !t) ++c.fp;
    else if (!p && t) ++c.fn;
    else ++c.tn;
  }
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.recall = ratio(c.tp, c.tp + c.fn);
  m.f1 = ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn);
  m.accuracy = ratio(c.tp + c.tn, c.tp + c.fp + c.fn + c.tn);
  return m;
}

std::string format_metrics_table(const std::string& first_column,
                                 const std::vector<std::pair<std::string, Metrics>>& rows) {
  std::vector<std::vector<std::string>> cells = {{first_column, "Precision", "Recall", "F1", "Accuracy"}};
  for (const auto& [name, m] : rows) {
    cells.push_back({name, fixed(m.precision, 4), fixed(m.recall, 4), fixed(m.f1, 4), fixed(m.accuracy, 4)});
  }
  return render_table(cells);
}

// ---- Bradley-Terry --------------------------------------------------------

std::string_view to_string(Dimension d) {
  switch (d) {
    case Dimension::kClarity: return "clarity";
    case Dimension::kFaithfulness: return "faithfulness";
    case Dimension::kFactuality: return "factuality";
    case Dimension::kSpecificity: return "specificity";
    case Dimension::kContributions: return "contributions";
  }
  return "";
}

Dimension parse_dimension(std::string_view s) {
  for (auto d : all_dimensions()) {
    if (to_string(d) == s) return d;
  }
  throw Error(ErrorCode::kBadRequest, "unknown dimension '" + std::string(s) + "'");
}

const std::vector<Dimension>& all_dimensions() {
  static const std::vector<Dimension> dims = {Dimension::kClarity, Dimension::kFaithfulness,
                                              Dimension::kFactuality, Dimension::kSpecificity,
                                              Dimension::kContributions};
  return dims;
}

std::vector<DimensionDefinition> default_dimension_definitions() {
  auto j = nlohmann::json::parse(text::read_file(asset_path("config/rationale_dimensions.json")));
  std::vector<DimensionDefinition> out;
  for (const auto& d : j.at("dimensions")) {
    out.push_back({parse_dimension(d.at("name").get<std::string>()), d.at("definition").get<std::string>()});
  }
  return out;
}

double display_rating(double strength) { return 1500.0 + 400.0 * std::log10(strength); }

DimensionFit fit_dimension(const std::vector<PairwiseJudgment>& judgments, const BTOptions& options) {
  if (judgments.empty()) throw Error(ErrorCode::kNoJudgments, "no judgments to fit");
  std::vector<std::string> names;
  {
    std::set<std::string> s;
    for (const auto& j : judgments) {
      if (j.system_a == j.system_b) throw Error(ErrorCode::kBadRequest, "system compared with itself");
      s.insert(j.system_a);
      s.insert(j.system_b);
    }
    names.assign(s.begin(), s.end());
  }
  const std::size_t n = names.size();
  auto index = [&](const std::string& name) {
    return static_cast<std::size_t>(std::lower_bound(names.begin(), names.end(), name) - names.begin());
  };

  std::vector<double> wins(n, 0.0);
  std::vector<std::vector<double>> games(n, std::vector<double>(n, 0.0));
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  // Directed win counts for the likelihood.
  std::vector<std::vector<double>> beat(n, std::vector<double>(n, 0.0));
  for (const auto& j : judgments) {
    const std::size_t a = index(j.system_a), b = index(j.system_b);
    const std::size_t w = j.winner == Winner::kA ? a : b;
    const std::size_t l = j.winner == Winner::kA ? b : a;
    wins[w] += 1;
    beat[w][l] += 1;
    games[a][b] += 1;
    games[b][a] += 1;
    parent[find(a)] = find(b);
  }

  std::map<std::size_t, std::vector<std::string>> components;
  for (std::size_t i = 0; i < n; ++i) components[find(i)].push_back(names[i]);
  if (components.size() > 1) {
    std::vector<std::string> groups;
    for (const auto& [_, members] : components) groups.push_back("{" + text::join(members, ", ") + "}");
    throw Error(ErrorCode::kDisconnectedGraph, "comparison graph splits into " + text::join(groups, " "));
  }

  const double phantom = options.phantom_games;
  auto log_likelihood = [&](const std::vector<double>& s) {
    double ll = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        if (beat[i][k] > 0) ll += beat[i][k] * std::log(s[i] / (s[i] + s[k]));
      }
      if (phantom > 0) ll += 0.5 * phantom * (std::log(s[i] / (s[i] + 1.0)) + std::log(1.0 / (s[i] + 1.0)));
    }
    return ll;
  };

  DimensionFit fit;
  std::vector<double> s(n, 1.0);
  fit.log_likelihood.push_back(log_likelihood(s));
  for (int it = 0; it < options.max_iterations; ++it) {
    std::vector<double> next(n);
    double max_change = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double denom = phantom / (s[i] + 1.0);
      for (std::size_t k = 0; k < n; ++k) {
        if (games[i][k] > 0) denom += games[i][k] / (s[i] + s[k]);
      }
      next[i] = (wins[i] + 0.5 * phantom) / denom;
      max_change = std::max(max_change, std::abs(next[i] - s[i]) / s[i]);
    }
    s = std::move(next);
    fit.iterations = it + 1;
    fit.log_likelihood.push_back(log_likelihood(s));
    if (max_change < options.tolerance) {
      fit.converged = true;
      break;
    }
  }

  const double mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double strength = s[i] / mean;
    fit.ratings[names[i]] = {strength, display_rating(strength)};
  }
  return fit;
}

BTRatings fit_bradley_terry(const std::vector<PairwiseJudgment>& judgments, const BTOptions& options) {
  if (judgments.empty()) throw Error(ErrorCode::kNoJudgments, "no judgments to fit");
  std::map<Dimension, std::vector<PairwiseJudgment>> by_dim;
  for (const auto& j : judgments) by_dim[j.dimension].push_back(j);
  std::vector<Dimension> dims;
  for (const auto& [d, _] : by_dim) dims.push_back(d);

  std::vector<std::optional<DimensionFit>> fits(dims.size());
  std::vector<std::string> errors(dims.size());
  parallel_for(dims.size(), dims.size(), [&](std::size_t i) {
    try {
      fits[i] = fit_dimension(by_dim[dims[i]], options);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });
  BTRatings out;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (fits[i]) {
      out.dimensions[dims[i]] = std::move(*fits[i]);
    } else {
      out.errors[dims[i]] = errors[i];
    }
  }
  return out;
}

std::string format_ratings_table(const BTRatings& ratings) {
  std::set<std::string> systems;
  for (const auto& [_, fit] : ratings.dimensions) {
    for (const auto& [name, __] : fit.ratings) systems.insert(name);
  }
  std::vector<std::string> header = {"Model"};
  for (auto d : all_dimensions()) header.push_back(capitalized(to_string(d)));
  std::vector<std::vector<std::string>> cells = {header};
  for (const auto& name : systems) {
    std::vector<std::string> row = {name};
    for (auto d : all_dimensions()) {
      auto fit = ratings.dimensions.find(d);
      if (fit == ratings.dimensions.end() || !fit->second.ratings.contains(name)) {
        row.push_back("-");
      } else {
        row.push_back(fixed(std::round(fit->second.ratings.at(name).display), 0));
      }
    }
    cells.push_back(row);
  }
  return render_table(cells);
}

std::vector<PairwiseJudgment> run_tournament(const std::map<std::string, std::string>& rationales,
                                             const std::vector<DimensionDefinition>& dimensions,
                                             const llm::LlmHandle& llm, PairingScheme scheme,
                                             std::size_t parallelism, std::vector<std::string>* warnings) {
  if (rationales.size() < 2) throw Error(ErrorCode::kBadRequest, "a tournament needs at least two systems");
  std::vector<std::string> systems;
  for (const auto& [name, _] : rationales) systems.push_back(name);

  std::vector<PairwiseJudgment> jobs;
  for (const auto& dim : dimensions) {
    for (std::size_t i = 0; i < systems.size(); ++i) {
      for (std::size_t k = i + 1; k < systems.size(); ++k) {
        jobs.push_back({dim.dimension, systems[i], systems[k], Winner::kA});
        if (scheme == PairingScheme::kBothOrders) jobs.push_back({dim.dimension, systems[k], systems[i], Winner::kA});
      }
    }
  }
  std::map<Dimension, std::string> definitions;
  for (const auto& d : dimensions) definitions[d.dimension] = d.definition;

  std::vector<std::optional<Winner>> winners(jobs.size());
  std::vector<std::string> failures(jobs.size());
  parallel_for(jobs.size(), parallelism, [&](std::size_t n) {
    const auto& job = jobs[n];
    llm::AskOptions opts;
    opts.stage = "judge";
    opts.max_output_tokens = 256;
    try {
      auto out = llm.ask("pairwise_judgment.v1",
                         {{"dimension", capitalized(to_string(job.dimension))},
                          {"definition", definitions[job.dimension]},
                          {"first", rationales.at(job.system_a)},
                          {"second", rationales.at(job.system_b)}},
                         opts);
      winners[n] = out.content.at("winner").get<std::string>() == "first" ? Winner::kA : Winner::kB;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSchemaFailure) throw;
      failures[n] = e.what();
    }
  });

  std::vector<PairwiseJudgment> out;
  for (std::size_t n = 0; n < jobs.size(); ++n) {
    if (!winners[n]) {
      if (warnings) {
        warnings->push_back("judgment " + jobs[n].system_a + " vs " + jobs[n].system_b + " on " +
                            std::string(to_string(jobs[n].dimension)) + " skipped: " + failures[n]);
      }
      continue;
    }
    PairwiseJudgment j = jobs[n];
    j.winner = *winners[n];
    out.push_back(std::move(j));
  }
  return out;
}

void to_json(nlohmann::json& j, const Metrics& m) {
  j = {{"precision", m.precision},
       {"recall", m.recall},
       {"f1", m.f1},
       {"accuracy", m.accuracy},
       {"confusion", {{"tp", m.confusion.tp}, {"fp", m.confusion.fp}, {"fn", m.confusion.fn}, {"tn", m.confusion.tn}}}};
}

void to_json(nlohmann::json& j, const PairwiseJudgment& p) {
  j = {{"dimension", to_string(p.dimension)},
       {"system_a", p.system_a},
       {"system_b", p.system_b},
       {"winner", p.winner == Winner::kA ? "a" : "b"}};
}

void from_json(const nlohmann::json& j, PairwiseJudgment& p) {
  p.dimension = parse_dimension(j.at("dimension").get<std::string>());
  p.system_a = j.at("system_a").get<std::string>();
  p.system_b = j.at("system_b").get<std::string>();
  const auto w = j.at("winner").get<std::string>();
  if (w != "a" && w != "b") throw Error(ErrorCode::kBadRequest, "winner must be 'a' or 'b'");
  p.winner = w == "a" ? Winner::kA : Winner::kB;
}

void to_json(nlohmann::json& j, const BTRatings& r) {
  j = nlohmann::json::object();
  for (const auto& [d, fit] : r.dimensions) {
    nlohmann::json systems = nlohmann::json::object();
    for (const auto& [name, rating] : fit.ratings) {
      systems[name] = {{"strength", rating.strength}, {"display_rating", rating.display}};
    }
    j[std::string(to_string(d))] = {{"ratings", systems}, {"iterations", fit.iterations}, {"converged", fit.converged}};
  }
  for (const auto& [d, err] : r.errors) j[std::string(to_string(d))] = {{"error", err}};
}

}  // namespace novelscope::evalharness
