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

#include <atomic>
#include <condition_variable>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "json.hpp"
#include "novelscope/server/pipeline.hpp"
#include "novelscope/server/store.hpp"

namespace novelscope::server {

struct ServiceOptions {
  int max_concurrent = 2;  // evaluations running at once, across all clients
  RequestLimits limits;
};

// Owns evaluation ids, cancellation, the global concurrency cap and the
// result cache. Transport-agnostic: the HTTP layer and the CLI both use it.
class EvaluationService {
 public:
  using EventSink = std::function<void(const ProgressEvent&)>;

  EvaluationService(std::shared_ptr<Pipeline> pipeline, std::shared_ptr<ResultStore> store,
                    ServiceOptions options = {});

  // kBadRequest when the request is invalid.
  void validate(const EvaluateRequest& r) const;

  // Reserves an id ("ev-1", "ev-2", ...) that cancel() accepts right away.
  std::string new_id();

  // Runs one evaluation, sending every event (the terminal one included) to
  // `sink`. A cached result yields a single done event. Returns the terminal
  // stage. Never throws for pipeline failures; they become error events.
  Stage run(const std::string& id, const EvaluateRequest& request, const EventSink& sink,
            const Ablation& ablation = {});

  // Returns false for unknown or finished ids.
  bool cancel(const std::string& id);

  // Cached by request. Throws like the pipeline does.
  nlohmann::json evaluate_abstract(const AbstractRequest& request);

  const Pipeline& pipeline() const { return *pipeline_; }
  const std::shared_ptr<ResultStore>& store() const { return store_; }

 private:
  class SlotGuard;
  void acquire_slot(const CancellationToken& cancel);
  void release_slot();

  std::shared_ptr<Pipeline> pipeline_;
  std::shared_ptr<ResultStore> store_;
  ServiceOptions options_;
  std::atomic<long long> next_id_{1};
  std::mutex mu_;
  std::condition_variable slot_cv_;
  int running_ = 0;
  std::map<std::string, CancellationToken> live_;
};

}  // namespace novelscope::server
