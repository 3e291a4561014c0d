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

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"

namespace novelscope::llm {

// Costs are stored as integer picodollars (1e-12 USD) so ledger totals are
// exact and independent of the order entries arrive in.
using Picodollars = std::int64_t;

struct ModelPrice {
  Picodollars input_per_token = 0;
  Picodollars output_per_token = 0;
};

// Per-model prices. The config file quotes USD per million tokens:
//   {"models": {"<id>": {"input_per_million": 0.1, "output_per_million": 0.4}}}
class PricingTable {
 public:
  static PricingTable load(const std::string& path);
  static PricingTable from_json(const nlohmann::json& j);

  void set(const std::string& model_id, double input_per_million, double output_per_million);
  bool has(const std::string& model_id) const { return prices_.contains(model_id); }
  const ModelPrice& get(const std::string& model_id) const;  // kUnknownModel
  std::vector<std::string> models() const;

 private:
  std::map<std::string, ModelPrice> prices_;
};

struct Usage {
  std::int64_t input_tokens = 0;
  std::int64_t output_tokens = 0;
};

struct CostEntry {
  std::string model_id;
  std::int64_t input_tokens = 0;
  std::int64_t output_tokens = 0;
  Picodollars cost = 0;
  std::string stage;

  double usd() const;
};

struct CostTotals {
  std::int64_t calls = 0;
  std::int64_t input_tokens = 0;
  std::int64_t output_tokens = 0;
  Picodollars cost = 0;

  double usd() const;
};

double to_usd(Picodollars p);

// Thread-safe append-only ledger.
class CostLedger {
 public:
  explicit CostLedger(PricingTable pricing);

  // Throws kUnknownModel when the pricing table has no entry for model_id.
  CostEntry record(const std::string& model_id, Usage usage, const std::string& stage = "");

  std::vector<CostEntry> entries() const;
  std::map<std::string, CostTotals> totals_by_model() const;
  std::map<std::string, CostTotals> totals_by_stage() const;
  CostTotals total() const;
  const PricingTable& pricing() const { return pricing_; }

  // Aggregates only, keyed and sorted by name, so the snapshot of a run is
  // byte-stable even when calls finish in a different order.
  nlohmann::json snapshot() const;

 private:
  PricingTable pricing_;
  mutable std::mutex mu_;
  std::vector<CostEntry> entries_;
};

}  // namespace novelscope::llm
