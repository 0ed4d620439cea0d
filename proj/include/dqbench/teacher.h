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

// Scripted privileged controller. It sees the object pose and velocity
// directly and produces the same high-level action a learned policy would.

#ifndef DQBENCH_TEACHER_H_
#define DQBENCH_TEACHER_H_

#include "dqbench/grasp.h"
#include "dqbench/robot.h"
#include "dqbench/scene.h"

namespace dqbench {

struct TeacherConfig {
  double standoff = 0.6;
  double align_pos_tol = 0.025;
  double align_ori_tol = 0.26;
  double max_rel_speed_at_close = 0.2;
  double intercept_horizon = 0.5;
  // false aims at the object centroid instead of the fused grasp.
  bool use_gfm = true;
  double decision_dt = 0.1;

  // Throws InvalidConfig when a field is not positive.
  void validate() const;

  bool operator==(const TeacherConfig&) const = default;
};

struct TeacherPlan {
  HighLevelAction action;
  Vec3 intercept = Vec3::Zero();        // predicted object position
  Vec3 approach_point = Vec3::Zero();   // planar base goal, z = 0
  Pose6 grasp_target;                   // world frame
  double position_error = 0.0;          // ee to grasp target
  double orientation_error = 0.0;
  double relative_speed = 0.0;
};

// Largest yaw the teacher steers away from the reference heading.
inline constexpr double kTeacherMaxTurn = 1.0;
// Height above the grasp at which a held object counts as lifted enough.
inline constexpr double kTeacherLiftHeight = 0.3;

TeacherPlan plan_teacher(const SceneState& scene, const RobotState& robot,
                         const GraspMemoryBank& bank,
                         const ObjectFeature& feature,
                         const GfmWeights& gfm_weights,
                         const TeacherConfig& cfg);

// Throws EmptyBank when the bank is empty and GFM guidance is on.
HighLevelAction teacher_step(const SceneState& scene, const RobotState& robot,
                             const GraspMemoryBank& bank,
                             const GfmWeights& gfm_weights,
                             const TeacherConfig& cfg);

}  // namespace dqbench

#endif  // DQBENCH_TEACHER_H_
