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

// Floating-platform scene: terrain, platform trajectories for the four
// benchmark levels, the carried object, and the episode status machine.

#ifndef DQBENCH_SCENE_H_
#define DQBENCH_SCENE_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dqbench/catalog.h"
#include "dqbench/robot.h"
#include "dqbench/se3.h"
#include "dqbench/terrain.h"

namespace dqbench {

inline constexpr double kPlatformMinHeight = 0.2;
inline constexpr double kPlatformMaxHeight = 0.7;
inline constexpr double kPlatformMargin = 0.02;
inline constexpr double kPlatformThickness = 0.04;
inline constexpr double kPlatformMaxAccel = 0.5;
inline constexpr double kSpawnMinDistance = 1.5;
inline constexpr double kSpawnMaxDistance = 2.5;
inline constexpr double kTerrainExtent = 40.0;
inline constexpr double kTerrainCellSize = 0.5;

inline constexpr double kLiftThreshold = 0.15;
inline constexpr int kLiftHoldSteps = 10;
inline constexpr double kYawTerminationDeg = 70.0;

enum class MotionMode { kLinear, kArc, kRandom };
enum class ZPolicy { kFixed, kFree };

struct SpeedRange {
  double lo = 0.0;
  double hi = 0.0;
};

// Level speed ranges in m/s: L1 [0, 0.15], L2 [0.15, 0.30], L3/L4 [0, 0.30].
SpeedRange level_speed_range(int level);

struct PlatformTrajectory {
  int level = 1;
  MotionMode mode = MotionMode::kLinear;
  SpeedRange speed_range;
  ZPolicy z_policy = ZPolicy::kFixed;
  double z_min = kPlatformMinHeight;
  double z_max = kPlatformMaxHeight;

  // Linear / arc: constant speed along an initial heading. Arcs turn with
  // curvature 1 / arc_radius, counter-clockwise when arc_direction > 0.
  double speed = 0.0;
  double heading = 0.0;
  double arc_radius = 0.0;
  int arc_direction = 1;

  // Random: mean-reverting (Ornstein-Uhlenbeck) velocity, acceleration
  // bounded by max_accel, speed hard-clipped to speed_range.
  double ou_theta = 1.0;
  double ou_sigma = 0.12;
  double max_accel = kPlatformMaxAccel;
};

// Throws InvalidArgument for a level outside 1..4.
PlatformTrajectory make_trajectory(int level, uint64_t seed);

// Stationary trajectory: the platform never moves.
PlatformTrajectory stationary_trajectory();

enum class Attachment { kPlatform, kGripper, kFree };

std::string_view to_string(Attachment a);

struct SceneState {
  double time = 0.0;
  Pose6 platform_pose;  // centre of the platform's top surface
  Twist platform_twist;
  Pose6 object_pose;
  Twist object_twist;
  Attachment attached_to = Attachment::kPlatform;
  Pose6 mount_offset;   // object in the platform frame
  Pose6 grasp_offset;   // object in the end-effector frame
  Vec3 platform_half_extents = Vec3::Zero();
  double object_rest_height = 0.0;  // object origin above its support
  ObjectSpec object;
  std::shared_ptr<const TerrainField> terrain;
  std::mt19937_64 rng;

  bool operator==(const SceneState& o) const;
};

struct EpisodeConfig {
  int level = 1;
  std::string object_id;
  uint64_t seed = 0;
  double physics_dt = 0.02;
  double decision_dt = 0.1;
  int timeout_steps = 300;

  int physics_steps_per_decision() const;
  // Throws InvalidArgument when the invariants do not hold.
  void validate() const;
};

// Seed of the platform trajectory used by reset_episode for `config`.
uint64_t trajectory_seed(const EpisodeConfig& config);
PlatformTrajectory trajectory_for(const EpisodeConfig& config);

// Places the platform 1.5-2.5 m ahead of the robot spawn (origin, facing
// +x), platform top in [0.2, 0.7] m, object resting on it. Throws NotFound
// for an unknown object id.
SceneState reset_episode(const EpisodeConfig& config,
                         const std::vector<ObjectSpec>& catalog);

// Advances the platform along `traj`. The object follows the platform, the
// gripper (`ee_pose`), or falls freely, depending on its attachment.
SceneState step_scene(const SceneState& state, const PlatformTrajectory& traj,
                      double dt, const Pose6& ee_pose = Pose6::Identity());

// Object origin height above its resting position on the platform.
double lift_height(const SceneState& state);
bool object_over_platform(const SceneState& state);

// Attachment transitions.
SceneState attach_to_gripper(const SceneState& state, const Pose6& ee_pose);
// Knocks the object off its support with a horizontal push along `push_dir`.
SceneState knock_object(const SceneState& state, const Vec3& push_dir);

enum class Phase {
  kApproaching,
  kGrasped,
  kLifted,
  kSuccess,
  kFailedTimeout,
  kFailedDropped,
  kFailedYaw,
};

std::string_view to_string(Phase p);
bool is_terminal(Phase p);

struct EpisodeStatus {
  Phase phase = Phase::kApproaching;
  int attempt_count = 0;
  // 1-based decision step at which success was detected.
  std::optional<int> success_step;
  int lift_streak = 0;

  bool operator==(const EpisodeStatus&) const = default;
};

// What happened since the previous status check.
struct StatusEvent {
  int decision_step = 0;  // decision steps completed so far (1-based)
  bool close_event = false;
  bool close_aligned = false;
  bool end_of_decision = false;
};

// Transition rules, in priority order:
//  * a gripper close increments attempt_count; an aligned close while
//    approaching moves to grasped;
//  * a grasped object held >= 0.15 m above its rest height for 10
//    consecutive checks succeeds (success_step recorded);
//  * a free object that leaves the platform footprint fails (dropped);
//  * |yaw - yaw_ref| > 70 deg fails (yaw);
//  * at the end of decision step >= timeout_steps the episode times out.
EpisodeStatus check_status(const SceneState& state, const RobotState& robot,
                           const EpisodeStatus& status,
                           const EpisodeConfig& config,
                           const StatusEvent& event);

}  // namespace dqbench

#endif  // DQBENCH_SCENE_H_
