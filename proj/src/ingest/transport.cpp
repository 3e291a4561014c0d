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

#include "novelscope/ingest/transport.hpp"

#include "json.hpp"
#include "novelscope/common/error.hpp"
#include "novelscope/common/text.hpp"

namespace novelscope::ingest {

namespace {

std::string entry_key(const std::string& method, const std::string& url) {
  return method + " " + url;
}

}  // namespace

FixtureTransport::FixtureTransport(const std::filesystem::path& dir) : dir_(dir) {
  const auto index = nlohmann::json::parse(text::read_file((dir / "index.json").string()));
  for (const auto& e : index.at("entries")) {
    Entry entry{e.value("status", 200), dir / e.at("body_file").get<std::string>(),
                e.value("headers", std::map<std::string, std::string>{})};
    entries_.emplace(entry_key(e.value("method", std::string("GET")),
                               e.at("url").get<std::string>()),
                     std::move(entry));
  }
}

bool FixtureTransport::has(const std::string& method, const std::string& url) const {
  return entries_.contains(entry_key(method, url));
}

HttpResponse FixtureTransport::send(const HttpRequest& request) {
  if (offline_) {
    throw Error(ErrorCode::kUpstreamUnavailable, "offline: " + request.url);
  }
  auto it = entries_.find(entry_key(request.method, request.url));
  if (it == entries_.end()) {
    throw Error(ErrorCode::kUpstreamUnavailable, "no fixture for " + request.url);
  }
  HttpResponse response;
  response.status = it->second.status;
  response.headers = it->second.headers;
  response.body = text::read_file(it->second.body_file.string());
  return response;
}

CountingTransport::CountingTransport(std::shared_ptr<Transport> inner)
    : inner_(std::move(inner)) {}

HttpResponse CountingTransport::send(const HttpRequest& request) {
  {
    std::lock_guard lock(mu_);
    urls_.push_back(request.url);
  }
  return inner_->send(request);
}

std::size_t CountingTransport::count() const {
  std::lock_guard lock(mu_);
  return urls_.size();
}

std::vector<std::string> CountingTransport::urls() const {
  std::lock_guard lock(mu_);
  return urls_;
}

void CountingTransport::reset() {
  std::lock_guard lock(mu_);
  urls_.clear();
}

}  // namespace novelscope::ingest
