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
#include "novelscope/server/http_server.hpp"

#include <condition_variable>
#include <deque>
#include <thread>

#include "httplib.h"
#include "novelscope/common/text.hpp"

namespace novelscope::server {

namespace {

void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const Error& e) {
  send_json(res, http_status(e.code()), {{"error", to_string(e.code())}, {"message", e.what()}});
}

// Frames produced by the evaluation thread, consumed by the HTTP writer.
struct Channel {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<std::string> frames;
  bool closed = false;

  void push(std::string frame) {
    {
      std::lock_guard lock(mu);
      frames.push_back(std::move(frame));
    }
    cv.notify_all();
  }

  void close() {
    {
      std::lock_guard lock(mu);
      closed = true;
    }
    cv.notify_all();
  }
};

struct Stream {
  std::shared_ptr<Channel> channel = std::make_shared<Channel>();
  std::thread worker;
  bool started = false;
};

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBadRequest:
    case ErrorCode::kEmptyQuery:
    case ErrorCode::kBadId:
    case ErrorCode::kUnknownModel:
      return 400;
    case ErrorCode::kNotFound:
    case ErrorCode::kSourceUnavailable:
      return 404;
    case ErrorCode::kRateLimited:
      return 429;
    case ErrorCode::kUpstreamUnavailable:
    case ErrorCode::kProviderUnavailable:
      return 502;
    case ErrorCode::kTimeout:
      return 504;
    default:
      return 500;
  }
}

std::string sse_frame(const ProgressEvent& e) {
  const std::string name = is_terminal(e.stage) ? std::string(to_string(e.stage)) : "progress";
  return "event: " + name + "\ndata: " + to_json(e).dump() + "\n\n";
}

struct HttpServer::Impl {
  std::shared_ptr<EvaluationService> service;
  std::shared_ptr<ingest::ArxivClient> arxiv;
  HttpOptions options;
  httplib::Server svr;

  void routes() {
    svr.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                             {"Access-Control-Expose-Headers", "X-Evaluation-Id"}});
    svr.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });
    if (!options.static_dir.empty() && std::filesystem::is_directory(options.static_dir)) {
      svr.set_mount_point("/", options.static_dir.string());
    }

    svr.Get("/health", [](const httplib::Request&, httplib::Response& res) { send_json(res, 200, {{"status", "ok"}}); });

    svr.Get("/search", [this](const httplib::Request& req, httplib::Response& res) {
      try {
        int limit = options.search_default_limit;
        if (req.has_param("limit")) {
          try {
            limit = std::stoi(req.get_param_value("limit"));
          } catch (const std::exception&) {
            throw Error(ErrorCode::kBadRequest, "limit must be an integer");
          }
        }
        nlohmann::json out = arxiv->search(req.get_param_value("q"), limit);
        send_json(res, 200, out);
      } catch (const Error& e) {
        send_error(res, e);
      }
    });

    svr.Post("/evaluate", [this](const httplib::Request& req, httplib::Response& res) { evaluate(req, res); });

    svr.Post(R"(/cancel/([A-Za-z0-9-]+))", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      if (service->cancel(id)) {
        send_json(res, 200, {{"id", id}, {"cancelled", true}});
      } else {
        send_json(res, 404, {{"error", "NotFound"}, {"message", "no running evaluation " + id}});
      }
    });

    svr.Post("/abstract", [this](const httplib::Request& req, httplib::Response& res) {
      try {
        auto body = nlohmann::json::parse(req.body, nullptr, false);
        if (body.is_discarded()) throw Error(ErrorCode::kBadRequest, "request body is not JSON");
        send_json(res, 200, service->evaluate_abstract(parse_abstract_request(body)));
      } catch (const Error& e) {
        send_error(res, e);
      }
    });

    svr.Get("/library", [this](const httplib::Request&, httplib::Response& res) {
      nlohmann::json out = nlohmann::json::array();
      for (const auto& e : list_library(options.library_dir)) out.push_back(to_json(e));
      send_json(res, 200, out);
    });

    svr.Get(R"(/library/([A-Za-z0-9._-]+))", [this](const httplib::Request& req, httplib::Response& res) {
      if (auto item = load_library_item(options.library_dir, req.matches[1])) {
        send_json(res, 200, *item);
      } else {
        send_json(res, 404, {{"error", "NotFound"}, {"message", "no library entry " + std::string(req.matches[1])}});
      }
    });
  }

  void evaluate(const httplib::Request& req, httplib::Response& res) {
    EvaluateRequest request;
    try {
      auto body = nlohmann::json::parse(req.body, nullptr, false);
      if (body.is_discarded()) throw Error(ErrorCode::kBadRequest, "request body is not JSON");
      request = parse_evaluate_request(body);
      service->validate(request);
    } catch (const Error& e) {
      send_error(res, e);
      return;
    }
    const std::string id = service->new_id();
    res.set_header("X-Evaluation-Id", id);
    res.set_header("Cache-Control", "no-cache");

    auto stream = std::make_shared<Stream>();
    auto svc = service;
    res.set_chunked_content_provider(
        "text/event-stream",
        [stream, svc, id, request](std::size_t, httplib::DataSink& sink) {
          if (!stream->started) {
            stream->started = true;
            auto channel = stream->channel;
            stream->worker = std::thread([svc, id, request, channel] {
              svc->run(id, request, [&](const ProgressEvent& e) { channel->push(sse_frame(e)); });
              channel->close();
            });
          }
          auto& ch = *stream->channel;
          std::unique_lock lock(ch.mu);
          while (ch.frames.empty() && !ch.closed) {
            ch.cv.wait_for(lock, std::chrono::milliseconds(100));
            if (!sink.is_writable()) {
              lock.unlock();
              svc->cancel(id);
              return false;
            }
          }
          while (!ch.frames.empty()) {
            std::string frame = std::move(ch.frames.front());
            ch.frames.pop_front();
            if (!sink.write(frame.data(), frame.size())) {
              lock.unlock();
              svc->cancel(id);
              return false;
            }
          }
          if (ch.closed) sink.done();
          return true;
        },
        [stream, svc, id](bool success) {
          if (!success) svc->cancel(id);
          if (stream->worker.joinable()) stream->worker.join();
        });
  }
};

HttpServer::HttpServer(std::shared_ptr<EvaluationService> service, std::shared_ptr<ingest::ArxivClient> arxiv,
                       HttpOptions options)
    : impl_(std::make_unique<Impl>()) {
  impl_->service = std::move(service);
  impl_->arxiv = std::move(arxiv);
  impl_->options = std::move(options);
  impl_->routes();
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind_any(const std::string& host) { return impl_->svr.bind_to_any_port(host); }

bool HttpServer::bind(const std::string& host, int port) { return impl_->svr.bind_to_port(host, port); }

void HttpServer::listen_after_bind() { impl_->svr.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->svr.stop();
}

}  // namespace novelscope::server
