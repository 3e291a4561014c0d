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

#include "novelscope/llm/cost.hpp"

#include <cmath>

#include "novelscope/common/error.hpp"
#include "novelscope/common/text.hpp"

namespace novelscope::llm {

namespace {

constexpr double kPicoPerUsd = 1e12;

// USD per million tokens -> picodollars per token.
Picodollars per_token(double usd_per_million) {
  if (!(usd_per_million >= 0) || !std::isfinite(usd_per_million)) {
    throw Error(ErrorCode::kBadRequest, "price must be a nonnegative number");
  }
  return static_cast<Picodollars>(std::llround(usd_per_million * 1e6));
}

nlohmann::json totals_json(const CostTotals& t) {
  return {{"calls", t.calls},
          {"input_tokens", t.input_tokens},
          {"output_tokens", t.output_tokens},
          {"usd", t.usd()}};
}

void add(CostTotals& t, const CostEntry& e) {
  t.calls += 1;
  t.input_tokens += e.input_tokens;
  t.output_tokens += e.output_tokens;
  t.cost += e.cost;
}

}  // namespace

double to_usd(Picodollars p) { return static_cast<double>(p) / kPicoPerUsd; }
double CostEntry::usd() const { return to_usd(cost); }
double CostTotals::usd() const { return to_usd(cost); }

PricingTable PricingTable::load(const std::string& path) {
  return from_json(nlohmann::json::parse(text::read_file(path)));
}

PricingTable PricingTable::from_json(const nlohmann::json& j) {
  PricingTable table;
  for (const auto& [id, p] : j.at("models").items()) {
    table.set(id, p.at("input_per_million").get<double>(), p.at("output_per_million").get<double>());
  }
  return table;
}

void PricingTable::set(const std::string& model_id, double input_per_million,
                       double output_per_million) {
  prices_[model_id] = ModelPrice{per_token(input_per_million), per_token(output_per_million)};
}

const ModelPrice& PricingTable::get(const std::string& model_id) const {
  auto it = prices_.find(model_id);
  if (it == prices_.end()) throw Error(ErrorCode::kUnknownModel, "no pricing for model " + model_id);
  return it->second;
}

std::vector<std::string> PricingTable::models() const {
  std::vector<std::string> out;
  for (const auto& [id, _] : prices_) out.push_back(id);
  return out;
}

CostLedger::CostLedger(PricingTable pricing) : pricing_(std::move(pricing)) {}

CostEntry CostLedger::record(const std::string& model_id, Usage usage, const std::string& stage) {
  const ModelPrice& price = pricing_.get(model_id);
  if (usage.input_tokens < 0 || usage.output_tokens < 0) {
    throw Error(ErrorCode::kBadRequest, "token counts must be nonnegative");
  }
  CostEntry e{model_id, usage.input_tokens, usage.output_tokens,
              usage.input_tokens * price.input_per_token + usage.output_tokens * price.output_per_token,
              stage};
  std::lock_guard lock(mu_);
  entries_.push_back(e);
  return e;
}

std::vector<CostEntry> CostLedger::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

std::map<std::string, CostTotals> CostLedger::totals_by_model() const {
  std::lock_guard lock(mu_);
  std::map<std::string, CostTotals> out;
  for (const auto& e : entries_) add(out[e.model_id], e);
  return out;
}

std::map<std::string, CostTotals> CostLedger::totals_by_stage() const {
  std::lock_guard lock(mu_);
  std::map<std::string, CostTotals> out;
  for (const auto& e : entries_) add(out[e.stage], e);
  return out;
}

CostTotals CostLedger::total() const {
  std::lock_guard lock(mu_);
  CostTotals t;
  for (const auto& e : entries_) add(t, e);
  return t;
}

nlohmann::json CostLedger::snapshot() const {
  nlohmann::json models = nlohmann::json::object();
  for (const auto& [id, t] : totals_by_model()) models[id] = totals_json(t);
  nlohmann::json stages = nlohmann::json::object();
  for (const auto& [s, t] : totals_by_stage()) stages[s] = totals_json(t);
  nlohmann::json out = totals_json(total());
  out["by_model"] = std::move(models);
  out["by_stage"] = std::move(stages);
  return out;
}

}  // namespace novelscope::llm
