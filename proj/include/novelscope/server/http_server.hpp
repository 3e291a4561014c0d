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

#include <filesystem>
#include <memory>
#include <string>

#include "novelscope/common/error.hpp"
#include "novelscope/ingest/arxiv.hpp"
#include "novelscope/server/service.hpp"

namespace novelscope::server {

// HTTP status for a library error code.
int http_status(ErrorCode code);

// "event: <name>\ndata: <single-line json>\n\n"; name is progress for
// running stages and the stage name for terminal ones.
std::string sse_frame(const ProgressEvent& e);

struct HttpOptions {
  std::filesystem::path library_dir;
  std::filesystem::path static_dir;  // optional built frontend
  int search_default_limit = 10;
};

// Routes:
//   GET  /search?q=&limit=   arXiv title search
//   POST /evaluate           JSON request -> SSE stream; id in X-Evaluation-Id
//   POST /cancel/{id}
//   POST /abstract           JSON request -> JSON result
//   GET  /library            stored result summaries
//   GET  /library/{id}       one stored result
//   GET  /health
class HttpServer {
 public:
  HttpServer(std::shared_ptr<EvaluationService> service, std::shared_ptr<ingest::ArxivClient> arxiv,
             HttpOptions options);
  ~HttpServer();

  // Binds to an ephemeral port and returns it; -1 on failure.
  int bind_any(const std::string& host = "127.0.0.1");
  bool bind(const std::string& host, int port);
  // Blocks until stop().
  void listen_after_bind();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace novelscope::server
