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

// Closed-loop episode runner: render, delay, stack, act, execute, score,
// check status.

#ifndef DQBENCH_EPISODE_H_
#define DQBENCH_EPISODE_H_

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dqbench/catalog.h"
#include "dqbench/config.h"
#include "dqbench/grasp.h"
#include "dqbench/nn/tensor.h"
#include "dqbench/perception.h"
#include "dqbench/robot.h"
#include "dqbench/scene.h"

namespace dqbench {

// Everything an episode needs besides its EpisodeConfig. Shared read-only
// across workers.
struct ObjectGrasps {
  std::vector<GraspCandidate> candidates;
  GraspMemoryBank bank;
  ObjectFeature feature;
};

ObjectGrasps prepare_grasps(const ObjectSpec& spec, int candidate_count,
                            int bank_size);

struct Environment {
  std::vector<ObjectSpec> catalog;
  HarnessConfig config;
  GfmWeights gfm;
  std::map<std::string, ObjectGrasps> grasps;  // filled by from_config

  // Built-in catalog and hand-built GFM weights unless the config names
  // files.
  static Environment from_config(const HarnessConfig& config);

  EpisodeConfig episode(int level, const std::string& object_id,
                        uint64_t seed) const;
};

struct StepRecord {
  int step = 0;  // 1-based decision step
  Pose6 platform_pose;
  Pose6 object_pose;
  Attachment attached_to = Attachment::kPlatform;
  Pose6 base_pose;
  Pose6 ee_pose;
  bool gripper_closed = false;
  Vec8 action = Vec8::Zero();
  bool gripper_close = false;
  double reward = 0.0;
  Phase phase = Phase::kApproaching;
};

struct CloseEvent {
  int step = 0;
  bool success = false;  // this close produced the episode's success
};

struct EpisodeLog {
  EpisodeConfig config;
  std::string split;
  std::string category;
  std::vector<StepRecord> steps;
  std::vector<CloseEvent> close_events;
  EpisodeStatus outcome;

  int decision_steps() const { return static_cast<int>(steps.size()); }
  bool success() const { return outcome.phase == Phase::kSuccess; }

  // Compact single-line JSON with a fixed key order.
  std::string to_json() const;
};

struct StepObservation {
  int step = 0;
  const nn::Tensor& observation;     // [12, 54, 96]
  std::span<const float> proprio;    // kProprioSize
  const HighLevelAction& action;
};

using StepObserver = std::function<void(const StepObservation&)>;

// Errors from the modules are rethrown as EpisodeError naming the level,
// object, seed and step.
EpisodeLog run_episode(const EpisodeConfig& config, const Environment& env,
                       const StepObserver& observer = {});

}  // namespace dqbench

#endif  // DQBENCH_EPISODE_H_
