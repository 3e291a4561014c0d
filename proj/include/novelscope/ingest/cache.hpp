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
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "novelscope/common/clock.hpp"

namespace novelscope::ingest {

struct CacheOptions {
  Duration ttl = std::chrono::hours(24 * 7);
  std::uintmax_t max_bytes = 512ull * 1024 * 1024;
};

struct CacheStats {
  std::size_t hits = 0;
  std::size_t misses = 0;
  std::size_t corrupt = 0;
  std::size_t evicted = 0;
};

// On-disk response cache, one file per key. Each file stores the expiry time,
// a SHA-256 of the payload and the full key, so a checksum mismatch or a hash
// collision reads as a miss. When the directory grows past max_bytes the
// least recently used entries (by file mtime, refreshed on hit) are removed.
class DiskCache {
 public:
  DiskCache(std::filesystem::path dir, std::shared_ptr<Clock> clock,
            CacheOptions options = {});

  std::optional<std::string> get(const std::string& key);
  void put(const std::string& key, std::string_view value);
  void put(const std::string& key, std::string_view value, Duration ttl);

  CacheStats stats() const;
  std::filesystem::path path_for(const std::string& key) const;

 private:
  void evict_to_fit();

  std::filesystem::path dir_;
  std::shared_ptr<Clock> clock_;
  CacheOptions options_;
  mutable std::mutex mu_;
  CacheStats stats_;
};

// Canonical cache key for an upstream request: a compact JSON object with
// sorted fields covering endpoint, method, URL, body and pipeline version.
std::string canonical_request_key(std::string_view endpoint, std::string_view method,
                                  std::string_view url, std::string_view body,
                                  std::string_view pipeline_version);

}  // namespace novelscope::ingest
