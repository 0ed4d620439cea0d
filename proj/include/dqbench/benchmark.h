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

// Seeded multi-episode benchmark runs with a worker pool.

#ifndef DQBENCH_BENCHMARK_H_
#define DQBENCH_BENCHMARK_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dqbench/episode.h"
#include "dqbench/metrics.h"

namespace dqbench {

enum class SplitChoice { kSeen, kUnseen, kBoth };

std::string_view to_string(SplitChoice s);
// Throws InvalidArgument.
SplitChoice parse_split_choice(std::string_view s);

struct BenchmarkOptions {
  std::vector<int> levels = {1, 2, 3, 4};
  // Fixed episode count per level; when unset, episodes run until the
  // decision-step budget is used up.
  std::optional<int> episodes_per_level;
  int step_budget = 5000;
  SplitChoice split = SplitChoice::kBoth;
  uint64_t seed = 0;
  int workers = 1;
};

struct BenchmarkResult {
  BenchmarkOptions options;
  MetricsReport report;          // per level: "all", then each category
  std::vector<EpisodeLog> logs;  // ordered by (level, episode index)

  static constexpr std::string_view kCsvHeader =
      "level,split,category,n_episodes,gsr,ossr,ossr_alt,tsc,seed";
  std::string csv() const;
  // One JSON object per line.
  std::string logs_jsonl() const;
};

uint64_t episode_seed(uint64_t bench_seed, int level, int index);

// Objects eligible under the split, in catalog order. Throws
// InvalidArgument when none are.
std::vector<std::string> object_pool(const std::vector<ObjectSpec>& catalog,
                                     SplitChoice split);

// Throws InvalidArgument for an empty or out-of-range level set.
BenchmarkResult run_benchmark(const BenchmarkOptions& options,
                              const Environment& env);

}  // namespace dqbench

#endif  // DQBENCH_BENCHMARK_H_
