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

#include "novelscope/ingest/archive.hpp"

#include <zlib.h>

#include <algorithm>
#include <filesystem>
#include <set>

#include "novelscope/common/error.hpp"

namespace novelscope::ingest {

namespace {

constexpr std::size_t kBlock = 512;
constexpr int kMaxIncludeDepth = 16;

std::string c_string(std::string_view field) {
  const auto nul = field.find('\0');
  return std::string(field.substr(0, nul));
}

std::size_t parse_octal(std::string_view field) {
  std::size_t value = 0;
  for (char c : field) {
    if (c == '\0' || c == ' ') {
      if (value != 0) break;
      continue;
    }
    if (c < '0' || c > '7') break;
    value = value * 8 + static_cast<std::size_t>(c - '0');
  }
  return value;
}

std::string normalize_path(const std::string& p) {
  auto norm = std::filesystem::path(p).lexically_normal().generic_string();
  while (norm.rfind("./", 0) == 0) norm.erase(0, 2);
  return norm;
}

// Position of the first unescaped '%' in a line, or npos.
std::size_t comment_start(std::string_view line) {
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '%') {
      std::size_t backslashes = 0;
      for (std::size_t j = i; j > 0 && line[j - 1] == '\\'; --j) ++backslashes;
      if (backslashes % 2 == 0) return i;
    }
  }
  return std::string_view::npos;
}

bool has_document_begin(std::string_view source) {
  std::size_t start = 0;
  while (start <= source.size()) {
    auto end = source.find('\n', start);
    if (end == std::string_view::npos) end = source.size();
    auto line = source.substr(start, end - start);
    line = line.substr(0, std::min(line.size(), comment_start(line)));
    if (line.find("\\begin{document}") != std::string_view::npos) return true;
    start = end + 1;
  }
  return false;
}

const std::string* lookup(const std::map<std::string, std::string>& files,
                          const std::string& raw, std::string* resolved) {
  const auto base = normalize_path(raw);
  for (const auto& candidate : {base, base + ".tex"}) {
    auto it = files.find(candidate);
    if (it != files.end()) {
      *resolved = candidate;
      return &it->second;
    }
  }
  return nullptr;
}

void flatten_into(const std::string& source, const std::map<std::string, std::string>& files,
                  int depth, std::set<std::string>& stack, FlattenResult& out) {
  static const std::string_view kDirectives[] = {"\\input{", "\\include{", "\\subfile{"};
  std::size_t start = 0;
  while (start < source.size()) {
    auto end = source.find('\n', start);
    const bool has_newline = end != std::string::npos;
    if (!has_newline) end = source.size();
    const std::string_view line(source.data() + start, end - start);
    const std::size_t limit = std::min(line.size(), comment_start(line));

    std::size_t cursor = 0;
    while (true) {
      std::size_t best = std::string_view::npos;
      std::size_t best_len = 0;
      for (auto d : kDirectives) {
        const auto pos = line.find(d, cursor);
        if (pos < best && pos < limit) {
          best = pos;
          best_len = d.size();
        }
      }
      if (best == std::string_view::npos) break;
      const auto close = line.find('}', best + best_len);
      if (close == std::string_view::npos) break;
      out.source.append(line.substr(cursor, best - cursor));
      const std::string target(line.substr(best + best_len, close - best - best_len));
      std::string resolved;
      const std::string* content = lookup(files, target, &resolved);
      if (content == nullptr) {
        out.warnings.push_back("missing include: " + target);
      } else if (depth >= kMaxIncludeDepth || stack.contains(resolved)) {
        out.warnings.push_back("recursive include skipped: " + resolved);
      } else {
        stack.insert(resolved);
        out.source.push_back('\n');
        flatten_into(*content, files, depth + 1, stack, out);
        out.source.push_back('\n');
        stack.erase(resolved);
      }
      cursor = close + 1;
    }
    out.source.append(line.substr(cursor));
    if (has_newline) out.source.push_back('\n');
    start = end + 1;
  }
}

}  // namespace

bool is_gzip(std::string_view data) {
  return data.size() >= 2 && static_cast<unsigned char>(data[0]) == 0x1f &&
         static_cast<unsigned char>(data[1]) == 0x8b;
}

bool is_tar(std::string_view data) {
  return data.size() >= kBlock && data.substr(257, 5) == "ustar";
}

std::string gunzip(std::string_view data) {
  z_stream zs{};
  if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK) {
    throw Error(ErrorCode::kInternal, "inflateInit2 failed");
  }
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  std::string out;
  char buf[64 * 1024];
  int rc = Z_OK;
  do {
    zs.next_out = reinterpret_cast<Bytef*>(buf);
    zs.avail_out = sizeof(buf);
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      throw Error(ErrorCode::kSourceUnavailable, "corrupt gzip stream");
    }
    out.append(buf, sizeof(buf) - zs.avail_out);
  } while (rc != Z_STREAM_END && zs.avail_in > 0);
  inflateEnd(&zs);
  if (rc != Z_STREAM_END) throw Error(ErrorCode::kSourceUnavailable, "truncated gzip stream");
  return out;
}

std::map<std::string, std::string> untar(std::string_view data) {
  std::map<std::string, std::string> files;
  std::size_t pos = 0;
  std::string long_name;
  while (pos + kBlock <= data.size()) {
    const auto header = data.substr(pos, kBlock);
    if (header.find_first_not_of('\0') == std::string_view::npos) break;
    std::string name = c_string(header.substr(0, 100));
    const std::string prefix = c_string(header.substr(345, 155));
    if (!prefix.empty()) name = prefix + "/" + name;
    const std::size_t size = parse_octal(header.substr(124, 12));
    const char type = header[156];
    pos += kBlock;
    if (pos + size > data.size()) {
      throw Error(ErrorCode::kSourceUnavailable, "truncated tar archive");
    }
    const auto payload = data.substr(pos, size);
    pos += (size + kBlock - 1) / kBlock * kBlock;

    if (type == 'L') {
      long_name = c_string(payload);
      continue;
    }
    if (!long_name.empty()) {
      name = long_name;
      long_name.clear();
    }
    if (type == '0' || type == '\0') files[normalize_path(name)] = std::string(payload);
  }
  return files;
}

std::string resolve_main_file(const std::map<std::string, std::string>& files) {
  std::string best;
  std::size_t best_size = 0;
  for (const auto& [path, content] : files) {
    if (std::filesystem::path(path).extension() != ".tex") continue;
    if (!has_document_begin(content)) continue;
    if (best.empty() || content.size() > best_size) {
      best = path;
      best_size = content.size();
    }
  }
  return best;
}

FlattenResult flatten_includes(const std::string& main_path,
                               const std::map<std::string, std::string>& files) {
  FlattenResult out;
  auto it = files.find(main_path);
  if (it == files.end()) return out;
  std::set<std::string> stack{main_path};
  flatten_into(it->second, files, 0, stack, out);
  return out;
}

}  // namespace novelscope::ingest
