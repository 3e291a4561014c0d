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

#include "novelscope/ingest/upstream.hpp"

#include <cmath>

#include "novelscope/common/error.hpp"

namespace novelscope::ingest {

RateLimiter::RateLimiter(int requests_per_second, std::shared_ptr<Clock> clock)
    : limit_(requests_per_second < 1 ? 1 : requests_per_second), clock_(std::move(clock)) {}

void RateLimiter::acquire() {
  std::lock_guard lock(mu_);
  constexpr auto kWindow = std::chrono::seconds(1);
  while (true) {
    const auto now = clock_->now();
    while (!recent_.empty() && recent_.front() <= now - kWindow) recent_.pop_front();
    if (static_cast<int>(recent_.size()) < limit_) {
      recent_.push_back(now);
      return;
    }
    clock_->sleep_for(recent_.front() + kWindow - now);
  }
}

UpstreamClient::UpstreamClient(std::shared_ptr<Transport> transport,
                               std::shared_ptr<DiskCache> cache,
                               std::shared_ptr<RateLimiter> limiter,
                               std::shared_ptr<Clock> clock, RetryPolicy retry,
                               std::string pipeline_version)
    : transport_(std::move(transport)),
      cache_(std::move(cache)),
      limiter_(std::move(limiter)),
      clock_(std::move(clock)),
      retry_(retry),
      pipeline_version_(std::move(pipeline_version)),
      rng_(retry.seed) {}

HttpResponse UpstreamClient::send_once(const HttpRequest& request) {
  if (limiter_) limiter_->acquire();
  HttpResponse response = transport_->send(request);
  const int s = response.status;
  if (s >= 200 && s < 300) return response;
  if (s == 404) throw Error(ErrorCode::kNotFound, request.url);
  if (s == 429) throw Error(ErrorCode::kRateLimited, request.url);
  if (s >= 500) {
    throw Error(ErrorCode::kUpstreamUnavailable,
                request.url + " returned " + std::to_string(s));
  }
  throw Error(ErrorCode::kBadRequest, request.url + " returned " + std::to_string(s));
}

std::string UpstreamClient::fetch(const std::string& endpoint, const HttpRequest& request) {
  const auto key = canonical_request_key(endpoint, request.method, request.url,
                                         request.body, pipeline_version_);
  if (cache_) {
    if (auto hit = cache_->get(key)) return std::move(*hit);
  }
  for (int attempt = 1;; ++attempt) {
    try {
      HttpResponse response = send_once(request);
      if (cache_) cache_->put(key, response.body);
      return std::move(response.body);
    } catch (const Error& e) {
      if (!is_transient(e.code()) || attempt >= retry_.max_attempts) throw;
      double factor = 0.0;
      {
        std::lock_guard lock(rng_mu_);
        factor = std::uniform_real_distribution<double>(0.0, retry_.jitter)(rng_);
      }
      const auto delay = std::chrono::duration_cast<Duration>(
          retry_.base_delay * std::pow(2.0, attempt - 1) * (1.0 + factor));
      clock_->sleep_for(delay);
    }
  }
}

}  // namespace novelscope::ingest
