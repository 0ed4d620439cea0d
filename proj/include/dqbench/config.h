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

// Harness settings read from "key = value" text. Every key is optional and
// overrides the default listed in README.md.

#ifndef DQBENCH_CONFIG_H_
#define DQBENCH_CONFIG_H_

#include <string>
#include <string_view>

#include "dqbench/teacher.h"

namespace dqbench {

inline constexpr const char* kConfigEnvVar = "DQBENCH_CONFIG";

struct HarnessConfig {
  double physics_dt = 0.02;
  double decision_dt = 0.1;
  int timeout_steps = 300;

  TeacherConfig teacher;

  double camera_hfov_deg = 87.0;
  double base_camera_pitch_deg = 15.0;
  double mask_flip_prob = 0.0;
  bool render = true;

  int candidate_count = 200;
  int bank_size = 30;
  std::string gfm_weights;  // weight file; empty selects the built-in set

  std::string catalog;  // catalog file; empty selects the built-in one

  int step_budget = 5000;
  int workers = 1;

  // Throws InvalidConfig naming the offending key.
  void validate() const;

  bool operator==(const HarnessConfig&) const = default;
};

// Unknown keys and malformed values throw InvalidConfig with the line.
HarnessConfig parse_config(std::string_view text,
                           const HarnessConfig& base = {});
HarnessConfig load_config(const std::string& path,
                          const HarnessConfig& base = {});
// Reads the file named by DQBENCH_CONFIG when set, else the defaults.
HarnessConfig config_from_environment();

std::string format_config(const HarnessConfig& cfg);

}  // namespace dqbench

#endif  // DQBENCH_CONFIG_H_
