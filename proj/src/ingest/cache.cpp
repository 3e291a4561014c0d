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

#include "novelscope/ingest/cache.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <thread>
#include <vector>

#include "json.hpp"
#include "novelscope/common/text.hpp"

namespace novelscope::ingest {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kMagic = "NSCACHE1";

fs::file_time_type to_file_time(TimePoint t) {
  return std::chrono::file_clock::from_sys(t);
}

struct ParsedEntry {
  long long expires_ms = 0;
  std::string checksum;
  std::string key;
  std::string payload;
};

std::optional<ParsedEntry> parse_entry(const std::string& raw) {
  // Layout: magic \n expires_ms \n sha256 \n key_len \n key payload
  std::size_t pos = 0;
  auto next_line = [&](std::string& out) {
    const auto nl = raw.find('\n', pos);
    if (nl == std::string::npos) return false;
    out = raw.substr(pos, nl - pos);
    pos = nl + 1;
    return true;
  };
  std::string magic, expires, checksum, key_len;
  if (!next_line(magic) || magic != kMagic) return std::nullopt;
  if (!next_line(expires) || !next_line(checksum) || !next_line(key_len)) {
    return std::nullopt;
  }
  ParsedEntry e;
  try {
    e.expires_ms = std::stoll(expires);
    const auto klen = static_cast<std::size_t>(std::stoull(key_len));
    if (pos + klen > raw.size()) return std::nullopt;
    e.key = raw.substr(pos, klen);
    e.payload = raw.substr(pos + klen);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  e.checksum = checksum;
  return e;
}

}  // namespace

DiskCache::DiskCache(fs::path dir, std::shared_ptr<Clock> clock, CacheOptions options)
    : dir_(std::move(dir)), clock_(std::move(clock)), options_(options) {
  fs::create_directories(dir_);
}

fs::path DiskCache::path_for(const std::string& key) const {
  return dir_ / (text::sha256_hex(key) + ".entry");
}

std::optional<std::string> DiskCache::get(const std::string& key) {
  std::lock_guard lock(mu_);
  const auto path = path_for(key);
  std::error_code ec;
  if (!fs::exists(path, ec)) {
    ++stats_.misses;
    return std::nullopt;
  }
  std::string raw;
  try {
    raw = text::read_file(path.string());
  } catch (const std::exception&) {
    ++stats_.misses;
    return std::nullopt;
  }
  auto entry = parse_entry(raw);
  if (!entry || entry->key != key || text::sha256_hex(entry->payload) != entry->checksum) {
    ++stats_.corrupt;
    ++stats_.misses;
    fs::remove(path, ec);
    return std::nullopt;
  }
  const auto now = clock_->now();
  if (to_unix_ms(now) >= entry->expires_ms) {
    ++stats_.misses;
    fs::remove(path, ec);
    return std::nullopt;
  }
  fs::last_write_time(path, to_file_time(now), ec);
  ++stats_.hits;
  return std::move(entry->payload);
}

void DiskCache::put(const std::string& key, std::string_view value) {
  put(key, value, options_.ttl);
}

void DiskCache::put(const std::string& key, std::string_view value, Duration ttl) {
  std::lock_guard lock(mu_);
  const auto now = clock_->now();
  std::ostringstream body;
  body << kMagic << '\n'
       << to_unix_ms(now + ttl) << '\n'
       << text::sha256_hex(value) << '\n'
       << key.size() << '\n'
       << key << value;
  const auto path = path_for(key);
  // Write-then-rename keeps readers from observing a half-written entry.
  auto tmp = path;
  tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  text::write_file(tmp.string(), body.str());
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    return;
  }
  fs::last_write_time(path, to_file_time(now), ec);
  evict_to_fit();
}

void DiskCache::evict_to_fit() {
  struct Item {
    fs::path path;
    fs::file_time_type mtime;
    std::uintmax_t size;
  };
  std::vector<Item> items;
  std::uintmax_t total = 0;
  std::error_code ec;
  for (const auto& de : fs::directory_iterator(dir_, ec)) {
    if (!de.is_regular_file() || de.path().extension() != ".entry") continue;
    Item item{de.path(), de.last_write_time(ec), de.file_size(ec)};
    total += item.size;
    items.push_back(std::move(item));
  }
  if (total <= options_.max_bytes) return;
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    return a.mtime != b.mtime ? a.mtime < b.mtime : a.path < b.path;
  });
  for (const auto& item : items) {
    if (total <= options_.max_bytes) break;
    fs::remove(item.path, ec);
    total -= item.size;
    ++stats_.evicted;
  }
}

CacheStats DiskCache::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

std::string canonical_request_key(std::string_view endpoint, std::string_view method,
                                  std::string_view url, std::string_view body,
                                  std::string_view pipeline_version) {
  nlohmann::json j{{"endpoint", endpoint},
                   {"method", method},
                   {"url", url},
                   {"body", body},
                   {"version", pipeline_version}};
  return j.dump();
}

}  // namespace novelscope::ingest
