// Copyright 2026 The dqbench Authors.
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

#include "dqbench/kv_text.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "dqbench/errors.h"

namespace dqbench {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  size_t b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

namespace {

std::string_view strip_comment(std::string_view line) {
  size_t hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

}  // namespace

std::vector<KvEntry> parse_kv_lines(std::string_view text) {
  std::vector<KvEntry> out;
  int lineno = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                      : nl - pos);
    ++lineno;
    std::string_view line = trim(strip_comment(raw));
    if (!line.empty()) {
      size_t eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw InvalidConfig("line " + std::to_string(lineno) +
                            ": expected 'key = value'");
      }
      std::string key(trim(line.substr(0, eq)));
      std::string value(trim(line.substr(eq + 1)));
      if (key.empty()) {
        throw InvalidConfig("line " + std::to_string(lineno) + ": empty key");
      }
      out.push_back({std::move(key), std::move(value), lineno});
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_record(
    std::string_view line) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in{std::string(trim(strip_comment(line)))};
  std::string token;
  while (in >> token) {
    size_t eq = token.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw InvalidArgument("malformed token '" + token + "'");
    }
    out.emplace_back(token.substr(0, eq), token.substr(eq + 1));
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double parse_double(std::string_view s, std::string_view what) {
  s = trim(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw InvalidArgument(std::string(what) + ": not a number '" +
                          std::string(s) + "'");
  }
  return v;
}

long long parse_int(std::string_view s, std::string_view what) {
  s = trim(s);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw InvalidArgument(std::string(what) + ": not an integer '" +
                          std::string(s) + "'");
  }
  return v;
}

std::vector<double> parse_double_list(std::string_view s,
                                      std::string_view what) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t comma = s.find(',', pos);
    std::string_view item = s.substr(
        pos, comma == std::string_view::npos ? s.size() - pos : comma - pos);
    out.push_back(parse_double(item, what));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace dqbench
