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

#include <gtest/gtest.h>

#include <httplib.h>

#include <thread>

#include "novelscope/server/http_server.hpp"
#include "server_support.hpp"

namespace ns = novelscope;
using namespace novelscope::server;
using nlohmann::json;

namespace {

// Server on an ephemeral port, stopped on destruction.
struct LiveServer {
  App app;
  std::unique_ptr<HttpServer> server;
  std::thread thread;
  int port = -1;

  explicit LiveServer(const std::string& name) : app(testsupport::fixture_app(name)) {
    HttpOptions opts;
    opts.library_dir = app.store->dir();
    server = std::make_unique<HttpServer>(app.service, app.arxiv, opts);
    port = server->bind_any();
    thread = std::thread([this] { server->listen_after_bind(); });
  }
  ~LiveServer() {
    server->stop();
    thread.join();
  }
  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port);
    c.set_read_timeout(30, 0);
    return c;
  }
};

}  // namespace

TEST(Http, Health) {
  LiveServer s("http-health");
  ASSERT_GT(s.port, 0);
  auto res = s.client().Get("/health");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
}

TEST(Http, SearchStatusCodes) {
  LiveServer s("http-search");
  auto c = s.client();
  auto ok = c.Get("/search?q=sparse%20adapters&limit=5");
  ASSERT_TRUE(ok);
  EXPECT_EQ(ok->status, 200);
  const auto body = json::parse(ok->body);
  ASSERT_EQ(body.size(), 5u);
  EXPECT_EQ(body[0]["arxiv_id"], "2403.01234");

  auto empty = c.Get("/search?q=");
  ASSERT_TRUE(empty);
  EXPECT_EQ(empty->status, 400);
  EXPECT_EQ(json::parse(empty->body)["error"], "EmptyQuery");

  auto bad_limit = c.Get("/search?q=x&limit=abc");
  ASSERT_TRUE(bad_limit);
  EXPECT_EQ(bad_limit->status, 400);

  std::dynamic_pointer_cast<ns::ingest::FixtureTransport>(s.app.transport)->set_offline(true);
  auto down = c.Get("/search?q=claim%20graphs");
  ASSERT_TRUE(down);
  EXPECT_EQ(down->status, 502);
}

TEST(Http, EvaluateStreamsByteStableSse) {
  std::string streams[2];
  for (int i = 0; i < 2; ++i) {
    LiveServer s("http-sse" + std::to_string(i));
    auto res = s.client().Post("/evaluate", R"({"arxiv_id": "2403.01234"})", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(res->get_header_value("Content-Type"), "text/event-stream");
    EXPECT_EQ(res->get_header_value("X-Evaluation-Id"), "ev-1");
    streams[i] = res->body;
  }
  EXPECT_EQ(streams[0], streams[1]);
  std::vector<std::string> names;
  for (const auto& line : ns::text::split(streams[0], '\n')) {
    if (line.rfind("event: ", 0) == 0) names.push_back(line.substr(7));
  }
  EXPECT_EQ(names, (std::vector<std::string>{"progress", "progress", "progress", "progress", "progress",
                                             "progress", "done"}));
}

TEST(Http, EvaluateRejectsBadRequestsBeforeStreaming) {
  LiveServer s("http-evalbad");
  auto c = s.client();
  auto res = c.Post("/evaluate", R"({"arxiv_id": "not-an-id"})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  res = c.Post("/evaluate", "{", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
}

TEST(Http, ErrorEventForUnknownPaper) {
  LiveServer s("http-evalerr");
  auto res = s.client().Post("/evaluate", R"({"arxiv_id": "2409.09999"})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_NE(res->body.find("event: error\n"), std::string::npos);
  EXPECT_NE(res->body.find("\"code\":\"NotFound\""), std::string::npos);
}

TEST(Http, CancelUnknownIdIs404) {
  LiveServer s("http-cancel");
  auto res = s.client().Post("/cancel/ev-99", "", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);
}

TEST(Http, AbstractEndpoint) {
  LiveServer s("http-abstract");
  auto c = s.client();
  auto bad = c.Post("/abstract", R"({"title": "T"})", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  const auto body = ns::text::read_file(testsupport::fixture("requests/draft_abstract.json").string());
  auto ok = c.Post("/abstract", body, "application/json");
  ASSERT_TRUE(ok);
  ASSERT_EQ(ok->status, 200) << ok->body;
  EXPECT_TRUE(json::parse(ok->body)["report"]["abstract_only"].get<bool>());
}

TEST(Http, LibraryRoutes) {
  LiveServer s("http-library");
  auto c = s.client();
  auto empty = c.Get("/library");
  ASSERT_TRUE(empty);
  EXPECT_EQ(json::parse(empty->body), json::array());
  ASSERT_TRUE(c.Post("/evaluate", R"({"arxiv_id": "2405.05678"})", "application/json"));
  const auto lib = json::parse(c.Get("/library")->body);
  ASSERT_EQ(lib.size(), 1u);
  auto item = c.Get("/library/" + lib[0]["id"].get<std::string>());
  ASSERT_TRUE(item);
  EXPECT_EQ(item->status, 200);
  EXPECT_EQ(json::parse(item->body)["paper"]["arxiv_id"], "2405.05678");
  EXPECT_EQ(c.Get("/library/nothing")->status, 404);
}

TEST(Sse, FrameFormat) {
  ProgressEvent e{Stage::kParse, 15.0, "msg", ns::from_unix_ms(1700000000000), nullptr};
  EXPECT_EQ(sse_frame(e), "event: progress\ndata: " + to_json(e).dump() + "\n\n");
  e.stage = Stage::kCancelled;
  EXPECT_EQ(sse_frame(e).rfind("event: cancelled\n", 0), 0u);
  EXPECT_EQ(http_status(ns::ErrorCode::kNotFound), 404);
  EXPECT_EQ(http_status(ns::ErrorCode::kUpstreamUnavailable), 502);
}
