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
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace novelscope::ingest {

struct HttpRequest {
  std::string method = "GET";
  std::string url;
  std::map<std::string, std::string> headers;
  std::string body;
};

struct HttpResponse {
  int status = 0;
  std::string body;
  std::map<std::string, std::string> headers;
};

// The single seam for network access. Implementations throw
// Error(kUpstreamUnavailable) when no response could be obtained at all;
// HTTP error statuses are returned, not thrown.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse send(const HttpRequest& request) = 0;
};

// Real network transport backed by cpp-httplib.
class HttpTransport final : public Transport {
 public:
  explicit HttpTransport(int timeout_seconds = 60);
  HttpResponse send(const HttpRequest& request) override;

 private:
  int timeout_seconds_;
};

// Serves recorded responses from a directory holding index.json:
//   {"entries": [{"method": "GET", "url": "...", "status": 200,
//                 "body_file": "relative/path", "headers": {...}}]}
// Requests with no recorded entry fail as if the network were down.
class FixtureTransport final : public Transport {
 public:
  explicit FixtureTransport(const std::filesystem::path& dir);

  HttpResponse send(const HttpRequest& request) override;

  // Simulates an outage: every request fails with kUpstreamUnavailable.
  void set_offline(bool offline) { offline_ = offline; }
  bool has(const std::string& method, const std::string& url) const;

 private:
  struct Entry {
    int status;
    std::filesystem::path body_file;
    std::map<std::string, std::string> headers;
  };
  std::filesystem::path dir_;
  std::map<std::string, Entry> entries_;
  std::atomic<bool> offline_{false};
};

// Decorator that counts and logs the requests reaching the inner transport.
class CountingTransport final : public Transport {
 public:
  explicit CountingTransport(std::shared_ptr<Transport> inner);

  HttpResponse send(const HttpRequest& request) override;

  std::size_t count() const;
  std::vector<std::string> urls() const;
  void reset();

 private:
  std::shared_ptr<Transport> inner_;
  mutable std::mutex mu_;
  std::vector<std::string> urls_;
};

}  // namespace novelscope::ingest
