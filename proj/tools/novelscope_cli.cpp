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

#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "novelscope/common/assets.hpp"
#include "novelscope/common/error.hpp"
#include "novelscope/common/text.hpp"
#include "novelscope/evalharness/evalharness.hpp"
#include "novelscope/server/app.hpp"
#include "novelscope/server/http_server.hpp"

namespace ns = novelscope;
namespace srv = novelscope::server;
namespace eh = novelscope::evalharness;
using nlohmann::json;

namespace {

srv::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

void emit(const json& j, const std::string& out_path) {
  const std::string body = j.dump(2) + "\n";
  if (out_path.empty() || out_path == "-") {
    std::cout << body;
  } else {
    ns::text::write_file(out_path, body);
  }
}

void emit_text(const std::string& s, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << s;
  } else {
    ns::text::write_file(out_path, s);
  }
}

std::map<std::string, std::string> read_rationales(const std::string& path) {
  const auto j = json::parse(ns::text::read_file(path));
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : j.items()) out[k] = v.get<std::string>();
  return out;
}

// One prediction per line: {"id", "label"}.
std::map<std::string, ns::assess::Label> read_predictions(const std::string& path) {
  std::map<std::string, ns::assess::Label> out;
  for (const auto& line : ns::text::split(ns::text::read_file(path), '\n')) {
    if (ns::text::trim(line).empty()) continue;
    const auto j = json::parse(line);
    out[j.at("id").get<std::string>()] =
        j.at("label").get<std::string>() == "novel" ? ns::assess::Label::kNovel : ns::assess::Label::kNotNovel;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"novelscope: novelty assessment service and evaluation harness"};
  cli.require_subcommand(1);

  srv::AppConfig cfg;
  std::string data_dir = cfg.data_dir.string(), fixtures, library;
  cli.add_option("--data-dir", data_dir, "Cache and result directory")->capture_default_str();
  cli.add_option("--fixtures", fixtures, "Serve upstream requests from a recorded fixture directory");
  cli.add_option("--library", library, "Library directory (default: <data-dir>/results)");
  cli.add_option("--provider", cfg.provider, "Model provider: mock or live")
      ->check(CLI::IsMember({"mock", "live"}))
      ->capture_default_str();
  cli.add_option("--models", cfg.models_path, "Model roster file");
  cli.add_option("--pricing", cfg.pricing_path, "Pricing file");
  cli.add_option("--embedding-url", cfg.embedding_url, "Remote embedding endpoint (default: local hashing)");
  cli.add_flag("--fake-clock", cfg.fake_clock, "Use a fixed clock (byte-stable output)");
  cli.add_option("--max-concurrent", cfg.max_concurrent, "Evaluations running at once")->capture_default_str();

  // serve
  auto* serve = cli.add_subcommand("serve", "Run the HTTP service");
  std::string host = "127.0.0.1", static_dir;
  int port = 8080;
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port)->capture_default_str();
  serve->add_option("--static-dir", static_dir, "Built frontend to serve at /");

  // evaluate
  auto* evaluate = cli.add_subcommand("evaluate", "Evaluate one arXiv paper headless");
  srv::EvaluateRequest ereq;
  srv::Ablation ablation;
  std::string out_path, events_path;
  evaluate->add_option("--arxiv-id", ereq.arxiv_id)->required();
  evaluate->add_option("--title", ereq.title);
  evaluate->add_option("--k-citations", ereq.k_citations)->capture_default_str();
  evaluate->add_option("--k-recommended", ereq.k_recommended)->capture_default_str();
  evaluate->add_option("--k-related", ereq.k_related)->capture_default_str();
  evaluate->add_option("--k-samples", ereq.k_samples)->capture_default_str();
  evaluate->add_option("--model", ereq.model_id)->capture_default_str();
  evaluate->add_flag("--before-publication", ereq.filter_by_date, "Only related papers published up to the paper's year");
  evaluate->add_flag("--no-citation", ablation.no_citation);
  evaluate->add_flag("--no-semantic", ablation.no_semantic);
  evaluate->add_flag("--no-related", ablation.no_related);
  evaluate->add_flag("--no-graph", ablation.no_graph);
  evaluate->add_option("-o,--out", out_path, "Result file (default stdout)");
  evaluate->add_option("--events", events_path, "Write progress events as JSON lines");

  // abstract
  auto* abstract = cli.add_subcommand("abstract", "Evaluate a title and abstract");
  srv::AbstractRequest areq;
  std::string abstract_file;
  abstract->add_option("--title", areq.title)->required();
  auto* abs_text = abstract->add_option("--abstract", areq.abstract);
  abstract->add_option("--abstract-file", abstract_file)->excludes(abs_text);
  abstract->add_option("--k-recommended", areq.k_recommended)->capture_default_str();
  abstract->add_option("--k-related", areq.k_related)->capture_default_str();
  abstract->add_option("--k-samples", areq.k_samples)->capture_default_str();
  abstract->add_option("--model", areq.model_id)->capture_default_str();
  abstract->add_option("-o,--out", out_path);

  // search
  auto* search = cli.add_subcommand("search", "Search arXiv by title");
  std::string query;
  int limit = 10;
  search->add_option("query", query)->required();
  search->add_option("--limit", limit)->capture_default_str();

  // harness
  auto* harness = cli.add_subcommand("harness", "Evaluation harness");
  harness->require_subcommand(1);
  std::string truth_path, preds_path, dataset = "dataset";
  auto* dist = harness->add_subcommand("distribution", "Ground-truth distribution by year");
  dist->add_option("--truth", truth_path)->required();

  auto* metrics = harness->add_subcommand("metrics", "Classification metrics for prediction files");
  std::vector<std::string> pred_files;
  bool all_novel = false;
  metrics->add_option("--truth", truth_path)->required();
  metrics->add_option("--predictions", pred_files, "name=path pairs, JSON lines {id, label}");
  metrics->add_flag("--all-novel", all_novel, "Add the predictor that always answers novel");
  metrics->add_option("-o,--out", out_path);
  bool as_json = false;
  metrics->add_flag("--json", as_json);

  auto* batch = harness->add_subcommand("batch", "Run the pipeline over a ground-truth file with ablations");
  std::vector<std::string> variants = {"full", "no-citation", "no-semantic", "no-related", "no-graph"};
  batch->add_option("--truth", truth_path)->required();
  batch->add_option("--dataset", dataset, "Name used in the table header")->capture_default_str();
  batch->add_option("--variants", variants)->capture_default_str();
  batch->add_option("--model", ereq.model_id)->capture_default_str();
  batch->add_option("--k-samples", ereq.k_samples)->capture_default_str();
  batch->add_option("-o,--out", out_path);
  batch->add_flag("--json", as_json);

  auto* tournament = harness->add_subcommand("tournament", "Pairwise rationale tournament with Bradley-Terry ratings");
  std::string rationales_path, judgments_in, judgments_out, judge_model = srv::kDefaultModel;
  bool single_order = false;
  auto* rat_opt = tournament->add_option("--rationales", rationales_path, "JSON object: system id -> rationale");
  tournament->add_option("--judgments", judgments_in, "Fit recorded judgments (JSON array) instead")->excludes(rat_opt);
  tournament->add_option("--save-judgments", judgments_out);
  tournament->add_option("--model", judge_model)->capture_default_str();
  tournament->add_flag("--single-order", single_order, "Ask each pair in one presentation order only");
  tournament->add_option("-o,--out", out_path);
  tournament->add_flag("--json", as_json);

  CLI11_PARSE(cli, argc, argv);

  try {
    cfg.data_dir = data_dir;
    if (!fixtures.empty()) cfg.fixtures_dir = fixtures;
    if (!library.empty()) cfg.library_dir = library;

    if (*dist) {
      std::cout << eh::format_distribution_table(eh::distribution_by_year(eh::load_ground_truth(truth_path)));
      return 0;
    }
    if (*metrics) {
      const auto truth = eh::load_ground_truth(truth_path);
      std::vector<ns::assess::Label> gold;
      for (const auto& g : truth) gold.push_back(g.label);
      std::vector<std::pair<std::string, eh::Metrics>> rows;
      for (const auto& spec : pred_files) {
        const auto eq = spec.find('=');
        const std::string name = eq == std::string::npos ? spec : spec.substr(0, eq);
        const auto preds = read_predictions(eq == std::string::npos ? spec : spec.substr(eq + 1));
        std::vector<ns::assess::Label> p;
        for (const auto& g : truth) {
          auto it = preds.find(g.paper_id);
          if (it == preds.end()) throw ns::Error(ns::ErrorCode::kBadRequest, name + ": no prediction for " + g.paper_id);
          p.push_back(it->second);
        }
        rows.emplace_back(name, eh::compute_metrics(p, gold));
      }
      if (all_novel) {
        rows.emplace_back("All novel", eh::compute_metrics(std::vector(gold.size(), ns::assess::Label::kNovel), gold));
      }
      if (as_json) {
        json j = json::object();
        for (const auto& [n, m] : rows) j[n] = m;
        emit(j, out_path);
      } else {
        emit_text(eh::format_metrics_table("Model", rows), out_path);
      }
      return 0;
    }

    auto app = srv::build_app(cfg);

    if (*serve) {
      srv::HttpOptions hopts;
      hopts.library_dir = app.config.library_dir;
      if (!static_dir.empty()) hopts.static_dir = static_dir;
      srv::HttpServer server(app.service, app.arxiv, hopts);
      if (!server.bind(host, port)) {
        std::cerr << "cannot bind " << host << ":" << port << "\n";
        return 1;
      }
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "listening on http://" << host << ":" << port << "\n";
      server.listen_after_bind();
      return 0;
    }
    if (*evaluate) {
      app.service->validate(ereq);
      std::ofstream events;
      if (!events_path.empty()) events.open(events_path);
      json result;
      std::string failure;
      const auto id = app.service->new_id();
      const auto last = app.service->run(
          id, ereq,
          [&](const srv::ProgressEvent& e) {
            if (events.is_open()) {
              json line = srv::to_json(e);
              if (e.stage == srv::Stage::kDone) line.erase("data");
              events << line.dump() << "\n";
            }
            std::cerr << "[" << srv::to_string(e.stage) << " " << e.percent << "%] " << e.message << "\n";
            if (e.stage == srv::Stage::kDone) result = e.data;
            if (e.stage == srv::Stage::kError) failure = e.data.dump();
          },
          ablation);
      if (last != srv::Stage::kDone) {
        std::cerr << "evaluation ended with " << srv::to_string(last) << " " << failure << "\n";
        return 2;
      }
      emit(result, out_path);
      return 0;
    }
    if (*abstract) {
      if (!abstract_file.empty()) areq.abstract = ns::text::read_file(abstract_file);
      emit(app.service->evaluate_abstract(areq), out_path);
      return 0;
    }
    if (*search) {
      json out = json::array();
      for (const auto& r : app.arxiv->search(query, limit)) out.push_back(r);
      emit(out, "");
      return 0;
    }
    if (*batch) {
      const auto truth = eh::load_ground_truth(truth_path);
      std::vector<ns::assess::Label> gold;
      for (const auto& g : truth) gold.push_back(g.label);
      std::vector<std::pair<std::string, eh::Metrics>> rows;
      for (const auto& v : variants) {
        srv::Ablation ab;
        if (v == "no-citation") ab.no_citation = true;
        else if (v == "no-semantic") ab.no_semantic = true;
        else if (v == "no-related") ab.no_related = true;
        else if (v == "no-graph") ab.no_graph = true;
        else if (v != "full") throw ns::Error(ns::ErrorCode::kBadRequest, "unknown variant " + v);
        std::vector<ns::assess::Label> preds;
        for (const auto& g : truth) {
          if (!g.arxiv_id) throw ns::Error(ns::ErrorCode::kBadRequest, g.paper_id + " has no arxiv_id");
          srv::EvaluateRequest r = ereq;
          r.arxiv_id = *g.arxiv_id;
          json result;
          const auto last = app.service->run(app.service->new_id(), r,
                                             [&](const srv::ProgressEvent& e) {
                                               if (e.stage == srv::Stage::kDone) result = e.data;
                                             },
                                             ab);
          if (last != srv::Stage::kDone) {
            throw ns::Error(ns::ErrorCode::kBadRequest, "evaluation of " + *g.arxiv_id + " did not finish");
          }
          preds.push_back(result.at("report").at("label").get<std::string>() == "novel" ? ns::assess::Label::kNovel
                                                                                        : ns::assess::Label::kNotNovel);
        }
        rows.emplace_back(v, eh::compute_metrics(preds, gold));
      }
      if (as_json) {
        json j = json::object();
        for (const auto& [n, m] : rows) j[n] = m;
        emit({{"dataset", dataset}, {"variants", j}}, out_path);
      } else {
        emit_text(dataset + "\n" + eh::format_metrics_table("Variants", rows), out_path);
      }
      return 0;
    }
    if (*tournament) {
      std::vector<eh::PairwiseJudgment> judgments;
      std::vector<std::string> warnings;
      if (!judgments_in.empty()) {
        judgments = json::parse(ns::text::read_file(judgments_in)).get<std::vector<eh::PairwiseJudgment>>();
      } else if (!rationales_path.empty()) {
        ns::llm::PromptLibrary prompts(ns::asset_path("prompts"));
        auto ledger = std::make_shared<ns::llm::CostLedger>(*app.pricing);
        ns::llm::LlmHandle handle{app.gateway.get(), &prompts, judge_model, {ledger, {}}};
        judgments = eh::run_tournament(read_rationales(rationales_path), eh::default_dimension_definitions(), handle,
                                       single_order ? eh::PairingScheme::kSingleOrder : eh::PairingScheme::kBothOrders,
                                       4, &warnings);
        std::cerr << "judge cost: $" << ledger->total().usd() << "\n";
      } else {
        throw ns::Error(ns::ErrorCode::kBadRequest, "pass --rationales or --judgments");
      }
      for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
      if (!judgments_out.empty()) ns::text::write_file(judgments_out, json(judgments).dump(2) + "\n");
      const auto ratings = eh::fit_bradley_terry(judgments);
      for (const auto& [d, e] : ratings.errors) std::cerr << "warning: " << eh::to_string(d) << ": " << e << "\n";
      if (as_json) {
        emit(ratings, out_path);
      } else {
        emit_text(eh::format_ratings_table(ratings), out_path);
      }
      return 0;
    }
  } catch (const ns::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
