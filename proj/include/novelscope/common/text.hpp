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
#include <string>
#include <string_view>
#include <vector>

namespace novelscope::text {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

// Collapses runs of ASCII whitespace to one space and trims the ends.
std::string collapse_whitespace(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool contains_icase(std::string_view haystack, std::string_view needle);

// Lowercased alphanumeric word tokens.
std::vector<std::string> word_tokens(std::string_view s);

// Lowercased alphanumeric tokens joined by single spaces; used to compare
// titles from different providers.
std::string normalize_title(std::string_view s);

std::string sha256_hex(std::string_view data);
std::uint64_t fnv1a64(std::string_view data);

std::string url_encode(std::string_view s);

// Reads a whole file; throws Error(kNotFound) when it cannot be opened.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

// Non-empty, non-comment ('#') trimmed lines of a plain-text config file.
std::vector<std::string> read_config_lines(const std::string& path);

}  // namespace novelscope::text
