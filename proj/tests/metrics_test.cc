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
#include <random>

#include <gtest/gtest.h>

#include "dqbench/errors.h"
#include "reference/metrics_oracle.h"

namespace dqbench {
namespace {

using reference::make_log;

TEST(Metrics, HandExamples) {
  std::vector<EpisodeLog> logs;
  // 5 one-shot successes, 2 successes on a retry, 3 failures.
  for (int i = 0; i < 5; ++i) logs.push_back(make_log(1, true, {true}, 30));
  logs.push_back(make_log(1, true, {false, true}, 40));
  logs.push_back(make_log(1, true, {false, false, true}, 40));
  for (int i = 0; i < 3; ++i) logs.push_back(make_log(1, false, {false}));
  MetricsReport r = compute_metrics(logs);
  ASSERT_EQ(r.rows.size(), 1u);
  const MetricsRow& row = r.row(1);
  EXPECT_EQ(row.n_episodes, 10);
  EXPECT_EQ(row.n_successes, 7);
  EXPECT_DOUBLE_EQ(row.gsr, 70.0);
  EXPECT_DOUBLE_EQ(row.ossr, 50.0);
  EXPECT_DOUBLE_EQ(*row.ossr_alt, 100.0 * 5 / 7);
  EXPECT_DOUBLE_EQ(*row.tsc, (5 * 30 + 2 * 40) / 7.0);
}

TEST(Metrics, TscMean) {
  std::vector<EpisodeLog> logs = {make_log(2, true, {true}, 30),
                                  make_log(2, true, {true}, 40),
                                  make_log(2, false, {})};
  EXPECT_DOUBLE_EQ(*compute_metrics(logs).row(2).tsc, 35.0);
}

TEST(Metrics, NoSuccessLeavesTscUnset) {
  std::vector<EpisodeLog> logs = {make_log(3, false, {false})};
  const MetricsRow& row = compute_metrics(logs).row(3);
  EXPECT_EQ(row.gsr, 0.0);
  EXPECT_FALSE(row.tsc.has_value());
  EXPECT_FALSE(row.ossr_alt.has_value());
}

TEST(Metrics, Rejects) {
  EXPECT_THROW(compute_metrics(std::vector<EpisodeLog>{}), InvalidArgument);
  std::vector<EpisodeLog> logs = {make_log(1, true, {true}, 3)};
  EXPECT_THROW(compute_metrics(logs).row(4), NotFound);
}

TEST(Metrics, SeparatesLevels) {
  std::vector<EpisodeLog> logs = {make_log(4, true, {true}, 9),
                                  make_log(1, false, {false}),
                                  make_log(4, false, {})};
  MetricsReport r = compute_metrics(logs);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0].level, 1);
  EXPECT_EQ(r.rows[1].level, 4);
  EXPECT_DOUBLE_EQ(r.row(4).gsr, 50.0);
}

TEST(Metrics, MatchesCountingOracle) {
  std::mt19937_64 rng(50);
  for (int set = 0; set < 50; ++set) {
    std::vector<EpisodeLog> logs = reference::random_logs(rng);
    std::map<int, reference::Tally> oracle = reference::count_outcomes(logs);
    MetricsReport r = compute_metrics(logs);
    ASSERT_EQ(r.rows.size(), oracle.size());
    for (const auto& [level, t] : oracle) {
      const MetricsRow& row = r.row(level);
      EXPECT_EQ(row.n_episodes, t.n);
      EXPECT_NEAR(row.gsr, 100.0 * t.wins / t.n, 1e-12);
      EXPECT_NEAR(row.ossr, 100.0 * t.first / t.n, 1e-12);
      if (t.wins) EXPECT_NEAR(*row.tsc, double(t.steps) / t.wins, 1e-12);
      EXPECT_LE(row.ossr, row.gsr);
      EXPECT_GE(row.ossr, 0.0);
      EXPECT_LE(row.gsr, 100.0);
    }
  }
}

}  // namespace
}  // namespace dqbench
