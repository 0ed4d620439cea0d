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

#include "dqbench/metrics.h"

#include <map>

#include "dqbench/errors.h"

namespace dqbench {

const MetricsRow& MetricsReport::row(int level,
                                     std::string_view category) const {
  for (const MetricsRow& r : rows) {
    if (r.level == level && r.category == category) return r;
  }
  throw NotFound("no metrics row for level " + std::to_string(level) +
                 " category '" + std::string(category) + "'");
}

EpisodeOutcome summarize(const EpisodeLog& log) {
  EpisodeOutcome o;
  o.level = log.config.level;
  o.split = log.split;
  o.category = log.category;
  o.success = log.success();
  o.one_shot = o.success && !log.close_events.empty() &&
               log.close_events.front().success;
  o.success_step = o.success ? log.outcome.success_step : std::nullopt;
  return o;
}

MetricsRow aggregate(std::span<const EpisodeOutcome> outcomes, int level,
                     std::string split, std::string category) {
  if (outcomes.empty()) {
    throw InvalidArgument("metrics: no episodes to aggregate");
  }
  MetricsRow r;
  r.level = level;
  r.split = std::move(split);
  r.category = std::move(category);
  long long step_sum = 0;
  for (const EpisodeOutcome& o : outcomes) {
    ++r.n_episodes;
    if (o.success) {
      ++r.n_successes;
      step_sum += o.success_step.value_or(0);
    }
    if (o.one_shot) ++r.n_one_shot;
  }
  r.gsr = 100.0 * r.n_successes / r.n_episodes;
  r.ossr = 100.0 * r.n_one_shot / r.n_episodes;
  if (r.n_successes > 0) {
    r.ossr_alt = 100.0 * r.n_one_shot / r.n_successes;
    r.tsc = static_cast<double>(step_sum) / r.n_successes;
  }
  return r;
}

MetricsReport compute_metrics(std::span<const EpisodeLog> logs) {
  if (logs.empty()) throw InvalidArgument("compute_metrics: empty log set");
  std::map<int, std::vector<EpisodeOutcome>> by_level;
  std::map<int, std::string> split_of;
  for (const EpisodeLog& log : logs) {
    EpisodeOutcome o = summarize(log);
    auto [it, fresh] = split_of.emplace(o.level, o.split);
    if (!fresh && it->second != o.split) it->second = "both";
    by_level[o.level].push_back(std::move(o));
  }
  MetricsReport report;
  for (const auto& [level, outcomes] : by_level) {
    report.rows.push_back(aggregate(outcomes, level, split_of[level], "all"));
  }
  return report;
}

}  // namespace dqbench
