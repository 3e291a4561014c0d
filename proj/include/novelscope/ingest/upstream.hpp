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
#include <deque>
#include <memory>
#include <mutex>
#include <random>
#include <string>

#include "novelscope/common/clock.hpp"
#include "novelscope/ingest/cache.hpp"
#include "novelscope/ingest/transport.hpp"

namespace novelscope::ingest {

// Admits at most `requests_per_second` calls in any one-second window.
// acquire() sleeps on the injected clock until a slot frees up.
class RateLimiter {
 public:
  RateLimiter(int requests_per_second, std::shared_ptr<Clock> clock);

  void acquire();
  int limit() const { return limit_; }

 private:
  int limit_;
  std::shared_ptr<Clock> clock_;
  std::mutex mu_;
  std::deque<TimePoint> recent_;
};

struct RetryPolicy {
  int max_attempts = 3;
  Duration base_delay = std::chrono::seconds(1);
  double jitter = 0.25;  // delay *= 1 + U[0, jitter)
  std::uint64_t seed = 0x5eed;
};

// Cache -> rate limiter -> transport, with retries on transient failures.
// Only 2xx responses are cached. Status mapping: 404 -> kNotFound,
// 429 -> kRateLimited, 5xx -> kUpstreamUnavailable, other 4xx -> kBadRequest.
class UpstreamClient {
 public:
  UpstreamClient(std::shared_ptr<Transport> transport, std::shared_ptr<DiskCache> cache,
                 std::shared_ptr<RateLimiter> limiter, std::shared_ptr<Clock> clock,
                 RetryPolicy retry = {}, std::string pipeline_version = "v1");

  // Returns the body of a successful response.
  std::string fetch(const std::string& endpoint, const HttpRequest& request);

  const std::string& pipeline_version() const { return pipeline_version_; }
  const std::shared_ptr<Clock>& clock() const { return clock_; }

 private:
  HttpResponse send_once(const HttpRequest& request);

  std::shared_ptr<Transport> transport_;
  std::shared_ptr<DiskCache> cache_;
  std::shared_ptr<RateLimiter> limiter_;
  std::shared_ptr<Clock> clock_;
  RetryPolicy retry_;
  std::string pipeline_version_;
  std::mutex rng_mu_;
  std::mt19937_64 rng_;
};

}  // namespace novelscope::ingest
