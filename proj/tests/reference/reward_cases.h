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

// Hand-evaluated reward inputs with every term's expected raw value and
// weight, worked out by hand from the reward tables.

#ifndef DQBENCH_TESTS_REFERENCE_REWARD_CASES_H_
#define DQBENCH_TESTS_REFERENCE_REWARD_CASES_H_

#include <string>
#include <vector>

#include "dqbench/rewards.h"

namespace dqbench::reference {

struct ExpectedTerm {
  std::string name;
  double raw = 0.0;
  double weight = 0.0;
};

HighLevelRewardInput high_level_hand_input();
std::vector<ExpectedTerm> high_level_hand_terms();

LowLevelState low_level_hand_state();
std::vector<ExpectedTerm> low_level_hand_terms();

// Sum of raw * weight over the breakdown's terms.
double manual_total(const RewardBreakdown& b);

}  // namespace dqbench::reference

#endif  // DQBENCH_TESTS_REFERENCE_REWARD_CASES_H_
