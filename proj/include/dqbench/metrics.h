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

// Benchmark metrics over finished episodes.

#ifndef DQBENCH_METRICS_H_
#define DQBENCH_METRICS_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dqbench/episode.h"

namespace dqbench {

// GSR and OSSR are percentages over all episodes; ossr_alt divides by the
// successes instead. tsc is the mean success step over successes only.
struct MetricsRow {
  int level = 0;
  std::string split;
  std::string category;
  int n_episodes = 0;
  int n_successes = 0;
  int n_one_shot = 0;
  double gsr = 0.0;
  double ossr = 0.0;
  std::optional<double> ossr_alt;
  std::optional<double> tsc;

  bool operator==(const MetricsRow&) const = default;
};

struct MetricsReport {
  std::vector<MetricsRow> rows;

  // Throws NotFound.
  const MetricsRow& row(int level, std::string_view category = "all") const;
};

// One episode reduced to what the metrics need.
struct EpisodeOutcome {
  int level = 0;
  std::string split;
  std::string category;
  bool success = false;
  bool one_shot = false;  // first close event produced the success
  std::optional<int> success_step;
};

EpisodeOutcome summarize(const EpisodeLog& log);

// Aggregates a set of episodes into one row. Throws InvalidArgument for an
// empty set.
MetricsRow aggregate(std::span<const EpisodeOutcome> outcomes, int level,
                     std::string split, std::string category);

// One "all" row per level, in ascending level order. Throws
// InvalidArgument for an empty log set.
MetricsReport compute_metrics(std::span<const EpisodeLog> logs);

}  // namespace dqbench

#endif  // DQBENCH_METRICS_H_
