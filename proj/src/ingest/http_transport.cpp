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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"
#include "novelscope/common/error.hpp"
#include "novelscope/ingest/transport.hpp"

namespace novelscope::ingest {

namespace {

// Splits "https://host:port/path?q" into ("https://host:port", "/path?q").
std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kBadRequest, "not an absolute URL: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

HttpTransport::HttpTransport(int timeout_seconds) : timeout_seconds_(timeout_seconds) {}

HttpResponse HttpTransport::send(const HttpRequest& request) {
  const auto [origin, path] = split_url(request.url);
  httplib::Client client(origin);
  client.set_follow_location(true);
  client.set_connection_timeout(timeout_seconds_, 0);
  client.set_read_timeout(timeout_seconds_, 0);
  client.set_write_timeout(timeout_seconds_, 0);

  httplib::Headers headers;
  std::string content_type = "application/json";
  for (const auto& [k, v] : request.headers) {
    if (k == "Content-Type") {
      content_type = v;
    } else {
      headers.emplace(k, v);
    }
  }

  httplib::Result result = request.method == "POST"
                               ? client.Post(path, headers, request.body, content_type)
                               : client.Get(path, headers);
  if (!result) {
    throw Error(ErrorCode::kUpstreamUnavailable,
                request.url + ": " + httplib::to_string(result.error()));
  }
  HttpResponse response;
  response.status = result->status;
  response.body = result->body;
  for (const auto& [k, v] : result->headers) response.headers[k] = v;
  return response;
}

}  // namespace novelscope::ingest
