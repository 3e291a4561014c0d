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

#include <chrono>
#include <mutex>
#include <string>

namespace novelscope {

using TimePoint = std::chrono::system_clock::time_point;
using Duration = std::chrono::system_clock::duration;

// Injectable time source. Everything that sleeps or compares timestamps goes
// through a Clock so tests can run against FakeClock.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual TimePoint now() const = 0;
  virtual void sleep_for(Duration d) = 0;
};

class SystemClock final : public Clock {
 public:
  TimePoint now() const override;
  void sleep_for(Duration d) override;
};

// Manual clock. sleep_for advances time instead of blocking.
class FakeClock final : public Clock {
 public:
  explicit FakeClock(TimePoint start = TimePoint{std::chrono::seconds{1700000000}});

  TimePoint now() const override;
  void sleep_for(Duration d) override;
  void advance(Duration d);

 private:
  mutable std::mutex mu_;
  TimePoint now_;
};

// Milliseconds since the Unix epoch.
long long to_unix_ms(TimePoint t);
TimePoint from_unix_ms(long long ms);

// ISO-8601 UTC timestamp with millisecond precision.
std::string format_iso8601(TimePoint t);

}  // namespace novelscope
