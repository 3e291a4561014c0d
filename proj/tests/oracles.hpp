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

// Reference implementations the tests compare production code against. They
// favour directness over speed and share no code with the library.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "novelscope/evalharness/evalharness.hpp"
#include "novelscope/retrieval/embedding.hpp"
#include "novelscope/retrieval/related.hpp"

namespace oracle {

namespace eh = novelscope::evalharness;
namespace rt = novelscope::retrieval;

inline double dot_cosine(const std::vector<double>& a, const std::vector<double>& b) {
  long double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += static_cast<long double>(a[i]) * b[i];
    aa += static_cast<long double>(a[i]) * a[i];
    bb += static_cast<long double>(b[i]) * b[i];
  }
  return static_cast<double>(ab / std::sqrt(aa * bb));
}

struct Ranked {
  std::string id;
  double score;
};

// Sort every candidate by score, then id, and keep the first k. Scores closer
// than `eps` are treated as equal so rounding in the oracle's own arithmetic
// cannot reorder true ties.
inline std::vector<Ranked> top_k(std::vector<Ranked> all, std::size_t k, double eps = 1e-12) {
  std::sort(all.begin(), all.end(), [eps](const Ranked& a, const Ranked& b) {
    if (std::abs(a.score - b.score) > eps) return a.score > b.score;
    return a.id < b.id;
  });
  if (all.size() > k) all.resize(k);
  return all;
}

inline std::vector<Ranked> citation_ranking(const novelscope::ingest::PaperRecord& main,
                                            const std::vector<novelscope::ingest::PaperRecord>& cited,
                                            std::size_t k, rt::EmbeddingProvider& embedder) {
  const auto anchor = embedder.embed(main.abstract.empty() ? main.title : main.title + "\n\n" + main.abstract);
  std::map<std::string, double> best;  // first occurrence of an id
  for (const auto& r : cited) {
    if (best.contains(r.id)) continue;
    const auto v = embedder.embed(r.abstract.empty() ? r.title : r.title + "\n\n" + r.abstract);
    best[r.id] = dot_cosine(anchor.values, v.values);
  }
  std::vector<Ranked> all;
  for (const auto& [id, s] : best) all.push_back({id, s});
  return top_k(all, k);
}

struct SemanticPick {
  std::string id;
  double score;
  rt::RelationClass relation;
};

// Best of the two same-role pairings; background on ties.
inline std::vector<SemanticPick> semantic_ranking(const rt::TermDecomposition& main,
                                                  const std::vector<rt::DecomposedCandidate>& candidates,
                                                  std::size_t k, rt::EmbeddingProvider& embedder) {
  std::vector<Ranked> all;
  std::map<std::string, rt::RelationClass> relation;
  for (const auto& c : candidates) {
    std::vector<std::pair<double, rt::RelationClass>> options;
    if (!main.background.empty() && !c.terms.background.empty()) {
      options.push_back({dot_cosine(embedder.embed(main.background).values, embedder.embed(c.terms.background).values),
                         rt::RelationClass::kBackground});
    }
    if (!main.target.empty() && !c.terms.target.empty()) {
      options.push_back({dot_cosine(embedder.embed(main.target).values, embedder.embed(c.terms.target).values),
                         rt::RelationClass::kTarget});
    }
    if (options.empty()) continue;
    auto pick = options[0];
    if (options.size() == 2 && options[1].first > options[0].first) pick = options[1];
    all.push_back({c.record.id, pick.first});
    relation[c.record.id] = pick.second;
  }
  std::vector<SemanticPick> out;
  for (const auto& r : top_k(all, k)) out.push_back({r.id, r.score, relation[r.id]});
  return out;
}

// Confusion counts by explicit enumeration of the four cases.
inline eh::Confusion count_confusion(const std::vector<eh::Label>& pred, const std::vector<eh::Label>& truth) {
  eh::Confusion c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred[i] == eh::Label::kNovel, t = truth[i] == eh::Label::kNovel;
    if (p && t) ++c.tp;
    if (p && !t) ++c.fp;
    if (!p && t) ++c.fn;
    if (!p && !t) ++c.tn;
  }
  return c;
}

// Regularized Bradley-Terry MLE by Newton's method on log-strengths.
// With phantom == 0 the first system is pinned at log-strength 0, which
// needs a strongly connected comparison graph. Returns strengths scaled to
// mean 1, keyed by system name.
inline std::map<std::string, double> bt_mle(const std::vector<eh::PairwiseJudgment>& js, double phantom) {
  std::map<std::string, std::size_t> at;
  for (const auto& j : js) {
    at.emplace(j.system_a, 0);
    at.emplace(j.system_b, 0);
  }
  std::vector<std::string> names;
  for (auto& [name, i] : at) {
    i = names.size();
    names.push_back(name);
  }
  const std::size_t n = names.size();
  std::vector<std::vector<double>> beat(n, std::vector<double>(n, 0));
  for (const auto& j : js) {
    const auto a = at[j.system_a], b = at[j.system_b];
    if (j.winner == eh::Winner::kA) beat[a][b] += 1; else beat[b][a] += 1;
  }
  auto sigma = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
  auto objective = [&](const std::vector<double>& t) {
    double ll = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) ll += beat[i][k] * std::log(sigma(t[i] - t[k]));
      ll += 0.5 * phantom * (std::log(sigma(t[i])) + std::log(sigma(-t[i])));
    }
    return ll;
  };
  std::vector<double> theta(n, 0.0);
  const std::size_t first = phantom > 0 ? 0 : 1;  // pinned coordinates are skipped
  for (int iter = 0; iter < 200; ++iter) {
    const std::size_t m = n - first;
    std::vector<double> g(m, 0);
    std::vector<std::vector<double>> h(m, std::vector<double>(m, 0));
    for (std::size_t i = 0; i < n; ++i) {
      double gi = 0, hii = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i) continue;
        const double games = beat[i][k] + beat[k][i];
        if (games == 0) continue;
        const double p = sigma(theta[i] - theta[k]);
        gi += beat[i][k] - games * p;
        hii -= games * p * (1 - p);
        if (i >= first && k >= first) h[i - first][k - first] += games * p * (1 - p);
      }
      const double q = sigma(theta[i]);
      gi += 0.5 * phantom - phantom * q;
      hii -= phantom * q * (1 - q);
      if (i >= first) {
        g[i - first] = gi;
        h[i - first][i - first] = hii;
      }
    }
    // Solve h * step = -g by Gaussian elimination with partial pivoting.
    std::vector<double> step(m);
    {
      auto a = h;
      std::vector<double> rhs(m);
      for (std::size_t i = 0; i < m; ++i) rhs[i] = -g[i];
      for (std::size_t c = 0; c < m; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < m; ++r)
          if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        std::swap(rhs[c], rhs[piv]);
        for (std::size_t r = c + 1; r < m; ++r) {
          const double f = a[r][c] / a[c][c];
          for (std::size_t cc = c; cc < m; ++cc) a[r][cc] -= f * a[c][cc];
          rhs[r] -= f * rhs[c];
        }
      }
      for (std::size_t c = m; c-- > 0;) {
        double s = rhs[c];
        for (std::size_t cc = c + 1; cc < m; ++cc) s -= a[c][cc] * step[cc];
        step[c] = s / a[c][c];
      }
    }
    // Backtrack until the objective does not decrease.
    const double before = objective(theta);
    double scale = 1.0;
    std::vector<double> trial = theta;
    for (int b = 0; b < 60; ++b) {
      for (std::size_t i = first; i < n; ++i) trial[i] = theta[i] + scale * step[i - first];
      if (objective(trial) >= before - 1e-15) break;
      scale /= 2;
    }
    double biggest = 0;
    for (std::size_t i = first; i < n; ++i) biggest = std::max(biggest, std::abs(trial[i] - theta[i]));
    theta = trial;
    if (biggest < 1e-13) break;
  }
  double mean = 0;
  for (double t : theta) mean += std::exp(t);
  mean /= static_cast<double>(n);
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < n; ++i) out[names[i]] = std::exp(theta[i]) / mean;
  return out;
}

}  // namespace oracle
