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

#include <atomic>
#include <set>

#include "novelscope/common/cancel.hpp"
#include "novelscope/common/clock.hpp"
#include "novelscope/common/error.hpp"
#include "novelscope/common/parallel.hpp"
#include "novelscope/common/text.hpp"

namespace ns = novelscope;
using namespace novelscope::text;

TEST(Text, TrimLowerCollapse) {
  EXPECT_EQ(trim("  a b \n"), "a b");
  EXPECT_EQ(trim(""), "");
  EXPECT_EQ(to_lower("AbC"), "abc");
  EXPECT_EQ(collapse_whitespace("  a \t\n b  c "), "a b c");
}

TEST(Text, SplitJoinRoundTrip) {
  const auto parts = split("a,,b,", ',');
  ASSERT_EQ(parts.size(), 4u);
  EXPECT_EQ(join(parts, ","), "a,,b,");
}

TEST(Text, NormalizeTitleIgnoresCaseAndPunctuation) {
  EXPECT_EQ(normalize_title("Attention: Is All  You Need!"), normalize_title("attention is all you need"));
}

TEST(Text, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Text, Fnv1aKnownVector) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cull);
}

TEST(Text, UrlEncode) {
  EXPECT_EQ(url_encode("arXiv:2403.01234"), "arXiv%3A2403.01234");
  EXPECT_EQ(url_encode("a b~"), "a%20b~");
}

TEST(Text, ReadMissingFileIsNotFound) {
  try {
    read_file("/nonexistent/novelscope");
    FAIL();
  } catch (const ns::Error& e) {
    EXPECT_EQ(e.code(), ns::ErrorCode::kNotFound);
  }
}

TEST(Clock, FakeClockAdvancesOnSleep) {
  ns::FakeClock c;
  const auto t0 = c.now();
  c.sleep_for(std::chrono::seconds(3));
  EXPECT_EQ(c.now() - t0, std::chrono::seconds(3));
}

TEST(Clock, Iso8601) {
  EXPECT_EQ(ns::format_iso8601(ns::from_unix_ms(1700000000123)), "2023-11-14T22:13:20.123Z");
  EXPECT_EQ(ns::to_unix_ms(ns::from_unix_ms(42)), 42);
}

TEST(Cancel, CopiesShareTheFlag) {
  ns::CancellationToken a;
  auto b = a;
  EXPECT_NO_THROW(b.throw_if_cancelled());
  a.cancel();
  EXPECT_TRUE(b.cancelled());
  try {
    b.throw_if_cancelled();
    FAIL();
  } catch (const ns::Error& e) {
    EXPECT_EQ(e.code(), ns::ErrorCode::kCancelled);
  }
}

TEST(Error, TransientCodes) {
  EXPECT_TRUE(ns::is_transient(ns::ErrorCode::kUpstreamUnavailable));
  EXPECT_TRUE(ns::is_transient(ns::ErrorCode::kRateLimited));
  EXPECT_TRUE(ns::is_transient(ns::ErrorCode::kProviderUnavailable));
  EXPECT_TRUE(ns::is_transient(ns::ErrorCode::kTimeout));
  EXPECT_FALSE(ns::is_transient(ns::ErrorCode::kNotFound));
  EXPECT_FALSE(ns::is_transient(ns::ErrorCode::kBadId));
  EXPECT_EQ(ns::to_string(ns::ErrorCode::kDisconnectedGraph), "DisconnectedGraph");
}

TEST(Parallel, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(100);
  ns::parallel_for(hits.size(), 7, [&](std::size_t i) { ++hits[i]; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(Parallel, RethrowsAfterAllWorkersFinish) {
  std::atomic<int> done{0};
  EXPECT_THROW(ns::parallel_for(20, 4,
                                [&](std::size_t i) {
                                  ++done;
                                  if (i == 3) throw ns::Error(ns::ErrorCode::kInternal, "boom");
                                }),
               ns::Error);
  EXPECT_EQ(done.load(), 20);
}
