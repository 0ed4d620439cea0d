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

// Small readers for the line-oriented key/value text used by the catalog
// and config files. '#' starts a comment; blank lines are ignored.

#ifndef DQBENCH_KV_TEXT_H_
#define DQBENCH_KV_TEXT_H_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dqbench {

struct KvEntry {
  std::string key;
  std::string value;
  int line = 0;
};

// "key = value" per line.
std::vector<KvEntry> parse_kv_lines(std::string_view text);

// Whitespace-separated "key=value" tokens on one line.
std::vector<std::pair<std::string, std::string>> parse_record(
    std::string_view line);

std::string read_text_file(const std::string& path);

// Strict numeric parsing; throws InvalidArgument naming `what`.
double parse_double(std::string_view s, std::string_view what);
long long parse_int(std::string_view s, std::string_view what);
std::vector<double> parse_double_list(std::string_view s,
                                      std::string_view what);

std::string_view trim(std::string_view s);

}  // namespace dqbench

#endif  // DQBENCH_KV_TEXT_H_
