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

#include "novelscope/server/service.hpp"

#include "novelscope/common/error.hpp"

namespace novelscope::server {

class EvaluationService::SlotGuard {
 public:
  SlotGuard(EvaluationService& s, const CancellationToken& cancel) : s_(s) { s_.acquire_slot(cancel); }
  ~SlotGuard() { s_.release_slot(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  EvaluationService& s_;
};

EvaluationService::EvaluationService(std::shared_ptr<Pipeline> pipeline, std::shared_ptr<ResultStore> store,
                                     ServiceOptions options)
    : pipeline_(std::move(pipeline)), store_(std::move(store)), options_(options) {}

void EvaluationService::validate(const EvaluateRequest& r) const { pipeline_->validate(r, options_.limits); }

std::string EvaluationService::new_id() {
  std::string id = "ev-" + std::to_string(next_id_.fetch_add(1));
  std::lock_guard lock(mu_);
  live_.emplace(id, CancellationToken{});
  return id;
}

bool EvaluationService::cancel(const std::string& id) {
  std::lock_guard lock(mu_);
  auto it = live_.find(id);
  if (it == live_.end()) return false;
  it->second.cancel();
  slot_cv_.notify_all();
  return true;
}

void EvaluationService::acquire_slot(const CancellationToken& cancel) {
  std::unique_lock lock(mu_);
  while (running_ >= options_.max_concurrent) {
    slot_cv_.wait_for(lock, std::chrono::milliseconds(50));
    cancel.throw_if_cancelled();
  }
  ++running_;
}

void EvaluationService::release_slot() {
  {
    std::lock_guard lock(mu_);
    --running_;
  }
  slot_cv_.notify_all();
}

Stage EvaluationService::run(const std::string& id, const EvaluateRequest& request, const EventSink& sink,
                             const Ablation& ablation) {
  CancellationToken cancel;
  {
    std::lock_guard lock(mu_);
    auto it = live_.find(id);
    if (it == live_.end()) it = live_.emplace(id, CancellationToken{}).first;
    cancel = it->second;
  }
  auto clock = pipeline_->deps().clock;
  double last_percent = 0;
  Stage last_stage = Stage::kFetchPaper;
  auto finish = [&](Stage stage, std::string message, nlohmann::json data) {
    {
      std::lock_guard lock(mu_);
      live_.erase(id);
    }
    const double percent = stage == Stage::kDone ? 100.0 : last_percent;
    sink({stage, percent, std::move(message), clock->now(), std::move(data)});
    return stage;
  };

  const std::string key = evaluation_cache_key(request, pipeline_->deps().pipeline_version, ablation);
  if (auto cached = store_->get(key)) return finish(Stage::kDone, "Loaded from cache", std::move(*cached));

  try {
    SlotGuard slot(*this, cancel);
    EvaluationResult result = pipeline_->evaluate(
        request,
        [&](const ProgressEvent& e) {
          last_percent = e.percent;
          last_stage = e.stage;
          sink(e);
        },
        cancel, ablation);
    nlohmann::json j = to_json(result);
    cancel.throw_if_cancelled();
    store_->put(key, j);
    return finish(Stage::kDone, "Evaluation complete", std::move(j));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kCancelled) return finish(Stage::kCancelled, "Evaluation cancelled", nullptr);
    return finish(Stage::kError, e.what(),
                  {{"code", to_string(e.code())}, {"failed_stage", to_string(last_stage)}});
  } catch (const std::exception& e) {
    return finish(Stage::kError, e.what(),
                  {{"code", to_string(ErrorCode::kInternal)}, {"failed_stage", to_string(last_stage)}});
  }
}

nlohmann::json EvaluationService::evaluate_abstract(const AbstractRequest& request) {
  pipeline_->validate(request, options_.limits);
  const std::string key = abstract_cache_key(request, pipeline_->deps().pipeline_version);
  if (auto cached = store_->get(key)) return *cached;
  CancellationToken cancel;
  SlotGuard slot(*this, cancel);
  nlohmann::json j = to_json(pipeline_->evaluate_abstract(request, cancel));
  store_->put(key, j);
  return j;
}

}  // namespace novelscope::server
