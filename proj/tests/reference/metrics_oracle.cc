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

#include "reference/metrics_oracle.h"

namespace dqbench::reference {

EpisodeLog make_log(int level, bool success, std::vector<bool> close_successes,
                    int success_step, std::string category) {
  EpisodeLog log;
  log.config.level = level;
  log.split = "seen";
  log.category = std::move(category);
  log.outcome.phase = success ? Phase::kSuccess : Phase::kFailedTimeout;
  log.outcome.attempt_count = static_cast<int>(close_successes.size());
  if (success) log.outcome.success_step = success_step;
  int step = 1;
  for (bool ok : close_successes) log.close_events.push_back({step++, ok});
  return log;
}

std::vector<EpisodeLog> random_logs(std::mt19937_64& rng) {
  std::vector<EpisodeLog> logs;
  int n = 1 + static_cast<int>(rng() % 60);
  for (int i = 0; i < n; ++i) {
    int level = 1 + static_cast<int>(rng() % 4);
    bool success = rng() % 3 != 0;
    int closes = static_cast<int>(rng() % 4) + (success ? 1 : 0);
    std::vector<bool> flags(closes, false);
    if (success) flags[rng() % closes] = true;
    logs.push_back(
        make_log(level, success, flags, 1 + static_cast<int>(rng() % 300)));
  }
  return logs;
}

std::map<int, Tally> count_outcomes(const std::vector<EpisodeLog>& logs) {
  std::map<int, Tally> out;
  for (const EpisodeLog& log : logs) {
    Tally& t = out[log.config.level];
    ++t.n;
    if (log.outcome.phase == Phase::kSuccess) {
      ++t.wins;
      t.steps += *log.outcome.success_step;
      if (log.close_events[0].success) ++t.first;
    }
  }
  return out;
}

}  // namespace dqbench::reference
