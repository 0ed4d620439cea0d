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

// Synthetic episode logs and a hand-counting metrics oracle.

#ifndef DQBENCH_TESTS_REFERENCE_METRICS_ORACLE_H_
#define DQBENCH_TESTS_REFERENCE_METRICS_ORACLE_H_

#include <map>
#include <random>
#include <string>
#include <vector>

#include "dqbench/episode.h"

namespace dqbench::reference {

// close_successes holds the success flag of each close event in order.
EpisodeLog make_log(int level, bool success, std::vector<bool> close_successes,
                    int success_step = 0, std::string category = "ball");

// Up to 60 logs over random levels; successes carry exactly one successful
// close event at a random position.
std::vector<EpisodeLog> random_logs(std::mt19937_64& rng);

struct Tally {
  int n = 0;
  int wins = 0;
  int first = 0;
  long long steps = 0;
};

// Single pass over the raw logs, keyed by level.
std::map<int, Tally> count_outcomes(const std::vector<EpisodeLog>& logs);

}  // namespace dqbench::reference

#endif  // DQBENCH_TESTS_REFERENCE_METRICS_ORACLE_H_
