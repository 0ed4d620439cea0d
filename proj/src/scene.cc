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

#include "dqbench/scene.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dqbench/errors.h"
#include "dqbench/seed.h"

namespace dqbench {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGravity = 9.81;
constexpr double kKnockSpeed = 0.5;
// Keeps sampled speeds strictly inside their level range after rounding.
constexpr double kRangeGuard = 1e-9;

double sinc(double h) {
  if (std::abs(h) < 1e-4) return 1.0 - h * h / 6.0;
  return std::sin(h) / h;
}

void check_level(int level) {
  if (level < 1 || level > 4) {
    throw InvalidArgument("level must be in 1..4, got " +
                          std::to_string(level));
  }
}

Vec3 clip_speed(Vec3 v, double max_speed) {
  double limit = max_speed * (1.0 - 1e-12);
  double n = v.norm();
  if (n > limit) v *= limit / n;
  return v;
}

}  // namespace

SpeedRange level_speed_range(int level) {
  check_level(level);
  switch (level) {
    case 1: return {0.0, 0.15};
    case 2: return {0.15, 0.30};
    default: return {0.0, 0.30};
  }
}

PlatformTrajectory make_trajectory(int level, uint64_t seed) {
  check_level(level);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PlatformTrajectory t;
  t.level = level;
  t.speed_range = level_speed_range(level);
  t.heading = normalize_angle(2.0 * kPi * unit(rng));
  if (level <= 2) {
    t.mode = unit(rng) < 0.5 ? MotionMode::kLinear : MotionMode::kArc;
    t.speed = t.speed_range.lo + kRangeGuard +
              (t.speed_range.hi - t.speed_range.lo - 2.0 * kRangeGuard) *
                  unit(rng);
    t.arc_radius = 1.0 + 2.0 * unit(rng);
    t.arc_direction = unit(rng) < 0.5 ? 1 : -1;
  } else {
    t.mode = MotionMode::kRandom;
    t.z_policy = level == 4 ? ZPolicy::kFree : ZPolicy::kFixed;
  }
  return t;
}

PlatformTrajectory stationary_trajectory() {
  PlatformTrajectory t;
  t.mode = MotionMode::kLinear;
  t.speed = 0.0;
  return t;
}

std::string_view to_string(Attachment a) {
  switch (a) {
    case Attachment::kPlatform: return "platform";
    case Attachment::kGripper: return "gripper";
    case Attachment::kFree: return "free";
  }
  return "?";
}

bool SceneState::operator==(const SceneState& o) const {
  bool terrain_equal = terrain == o.terrain ||
                       (terrain && o.terrain && *terrain == *o.terrain);
  return time == o.time && platform_pose == o.platform_pose &&
         platform_twist == o.platform_twist && object_pose == o.object_pose &&
         object_twist == o.object_twist && attached_to == o.attached_to &&
         mount_offset == o.mount_offset && grasp_offset == o.grasp_offset &&
         platform_half_extents == o.platform_half_extents &&
         object_rest_height == o.object_rest_height && object == o.object &&
         terrain_equal &&
         rng == o.rng;
}

int EpisodeConfig::physics_steps_per_decision() const {
  return static_cast<int>(std::lround(decision_dt / physics_dt));
}

void EpisodeConfig::validate() const {
  check_level(level);
  if (!(physics_dt > 0.0) || !(decision_dt > 0.0)) {
    throw InvalidArgument("physics_dt and decision_dt must be positive");
  }
  double ratio = decision_dt / physics_dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 || std::round(ratio) < 1) {
    throw InvalidArgument("decision_dt must be an integer multiple of "
                          "physics_dt");
  }
  if (timeout_steps <= 0) throw InvalidArgument("timeout_steps must be > 0");
}

uint64_t trajectory_seed(const EpisodeConfig& config) {
  return splitmix64(config.seed ^ 0x5452414a45435459ULL);
}

PlatformTrajectory trajectory_for(const EpisodeConfig& config) {
  return make_trajectory(config.level, trajectory_seed(config));
}

SceneState reset_episode(const EpisodeConfig& config,
                         const std::vector<ObjectSpec>& catalog) {
  config.validate();
  const ObjectSpec& spec = find_object(catalog, config.object_id);
  PlatformTrajectory traj = trajectory_for(config);

  SceneState s;
  s.rng.seed(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  s.terrain = std::make_shared<const TerrainField>(
      sample_terrain(s.rng(), kTerrainExtent, kTerrainCellSize));

  double distance =
      kSpawnMinDistance + (kSpawnMaxDistance - kSpawnMinDistance) * unit(s.rng);
  double bearing = -0.2 + 0.4 * unit(s.rng);
  double top =
      kPlatformMinHeight + (kPlatformMaxHeight - kPlatformMinHeight) *
                               unit(s.rng);
  double object_yaw = normalize_angle(2.0 * kPi * unit(s.rng));

  Vec3 half = half_extents(spec);
  double c = std::abs(std::cos(object_yaw)), sn = std::abs(std::sin(object_yaw));
  s.platform_half_extents =
      Vec3(c * half.x() + sn * half.y() + kPlatformMargin,
           sn * half.x() + c * half.y() + kPlatformMargin,
           0.5 * kPlatformThickness);
  s.object_rest_height = half.z();
  s.object = spec;
  s.mount_offset = Pose6{Vec3(0.0, 0.0, half.z()), Vec3(0.0, 0.0, object_yaw)};

  s.platform_pose.position = Vec3(distance * std::cos(bearing),
                                  distance * std::sin(bearing), top);
  if (traj.mode == MotionMode::kRandom) {
    std::normal_distribution<double> normal(
        0.0, traj.ou_sigma / std::sqrt(2.0 * traj.ou_theta));
    Vec3 v(normal(s.rng), normal(s.rng), 0.0);
    if (traj.z_policy == ZPolicy::kFree) v.z() = normal(s.rng);
    s.platform_twist.linear = clip_speed(v, traj.speed_range.hi);
  } else {
    s.platform_twist.linear =
        traj.speed * Vec3(std::cos(traj.heading), std::sin(traj.heading), 0.0);
  }

  s.attached_to = Attachment::kPlatform;
  s.object_pose = compose(s.platform_pose, s.mount_offset);
  s.object_twist = s.platform_twist;
  return s;
}

SceneState step_scene(const SceneState& state, const PlatformTrajectory& traj,
                      double dt, const Pose6& ee_pose) {
  if (!(dt > 0.0)) throw InvalidArgument("step_scene: dt must be > 0");
  SceneState s = state;
  s.time += dt;

  Vec3 v = state.platform_twist.linear;
  Vec3& p = s.platform_pose.position;
  switch (traj.mode) {
    case MotionMode::kLinear:
      v = Vec3(traj.speed * std::cos(traj.heading),
               traj.speed * std::sin(traj.heading), 0.0);
      p += v * dt;
      break;
    case MotionMode::kArc: {
      double speed = v.head<2>().norm();
      double omega = traj.arc_direction * speed / traj.arc_radius;
      double heading = std::atan2(v.y(), v.x());
      double h = 0.5 * omega * dt;
      double chord = speed * dt * sinc(h);
      p.x() += chord * std::cos(heading + h);
      p.y() += chord * std::sin(heading + h);
      double new_heading = heading + omega * dt;
      v = Vec3(speed * std::cos(new_heading), speed * std::sin(new_heading),
               0.0);
      break;
    }
    case MotionMode::kRandom: {
      std::normal_distribution<double> normal(0.0, 1.0);
      const double sq = traj.ou_sigma * std::sqrt(dt);
      Vec3 noise(normal(s.rng), normal(s.rng), 0.0);
      if (traj.z_policy == ZPolicy::kFree) noise.z() = normal(s.rng);
      Vec3 dv = -traj.ou_theta * v * dt + sq * noise;
      if (traj.z_policy == ZPolicy::kFixed) dv.z() = 0.0;
      double max_dv = traj.max_accel * dt;
      if (dv.norm() > max_dv) dv *= max_dv / dv.norm();
      v = clip_speed(v + dv, traj.speed_range.hi);
      if (traj.z_policy == ZPolicy::kFree) {
        double z_next = p.z() + v.z() * dt;
        if (z_next > traj.z_max) v.z() = (traj.z_max - p.z()) / dt;
        if (z_next < traj.z_min) v.z() = (traj.z_min - p.z()) / dt;
      } else {
        v.z() = 0.0;
      }
      p += v * dt;
      if (traj.z_policy == ZPolicy::kFree) {
        p.z() = std::clamp(p.z(), traj.z_min, traj.z_max);
      }
      break;
    }
  }
  s.platform_twist.linear = v;
  s.platform_twist.angular = Vec3::Zero();

  switch (s.attached_to) {
    case Attachment::kPlatform:
      s.object_pose = compose(s.platform_pose, s.mount_offset);
      s.object_twist = s.platform_twist;
      break;
    case Attachment::kGripper:
      s.object_pose = compose(ee_pose, s.grasp_offset);
      s.object_twist.linear =
          (s.object_pose.position - state.object_pose.position) / dt;
      s.object_twist.angular = Vec3::Zero();
      break;
    case Attachment::kFree: {
      Vec3& ov = s.object_twist.linear;
      ov.z() -= kGravity * dt;
      s.object_pose.position += ov * dt;
      const Vec3& op = s.object_pose.position;
      double floor = s.terrain->height(op.x(), op.y()) + s.object_rest_height;
      if (op.z() <= floor) {
        s.object_pose.position.z() = floor;
        ov = Vec3::Zero();
      }
      break;
    }
  }
  return s;
}

double lift_height(const SceneState& state) {
  return state.object_pose.position.z() -
         (state.platform_pose.position.z() + state.object_rest_height);
}

bool object_over_platform(const SceneState& state) {
  Vec3 d = state.object_pose.position - state.platform_pose.position;
  const Vec3& h = state.platform_half_extents;
  return std::abs(d.x()) <= h.x() && std::abs(d.y()) <= h.y() &&
         d.z() >= state.object_rest_height - 0.01;
}

SceneState attach_to_gripper(const SceneState& state, const Pose6& ee_pose) {
  SceneState s = state;
  s.attached_to = Attachment::kGripper;
  s.grasp_offset = compose(inverse(ee_pose), state.object_pose);
  return s;
}

SceneState knock_object(const SceneState& state, const Vec3& push_dir) {
  SceneState s = state;
  s.attached_to = Attachment::kFree;
  Vec3 dir(push_dir.x(), push_dir.y(), 0.0);
  if (dir.norm() < 1e-9) dir = Vec3::UnitX();
  s.object_twist.linear =
      state.platform_twist.linear + kKnockSpeed * dir.normalized();
  s.object_twist.angular = Vec3::Zero();
  return s;
}

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::kApproaching: return "approaching";
    case Phase::kGrasped: return "grasped";
    case Phase::kLifted: return "lifted";
    case Phase::kSuccess: return "success";
    case Phase::kFailedTimeout: return "failed_timeout";
    case Phase::kFailedDropped: return "failed_dropped";
    case Phase::kFailedYaw: return "failed_yaw";
  }
  return "?";
}

bool is_terminal(Phase p) {
  return p == Phase::kSuccess || p == Phase::kFailedTimeout ||
         p == Phase::kFailedDropped || p == Phase::kFailedYaw;
}

EpisodeStatus check_status(const SceneState& state, const RobotState& robot,
                           const EpisodeStatus& status,
                           const EpisodeConfig& config,
                           const StatusEvent& event) {
  if (is_terminal(status.phase)) return status;
  EpisodeStatus s = status;

  if (event.close_event) {
    ++s.attempt_count;
    if (event.close_aligned && s.phase == Phase::kApproaching) {
      s.phase = Phase::kGrasped;
      s.lift_streak = 0;
    }
  }

  if (s.phase == Phase::kGrasped || s.phase == Phase::kLifted) {
    if (state.attached_to != Attachment::kGripper) {
      s.phase = Phase::kFailedDropped;
      s.lift_streak = 0;
      return s;
    }
    if (lift_height(state) >= kLiftThreshold) {
      ++s.lift_streak;
      s.phase = Phase::kLifted;
      if (s.lift_streak >= kLiftHoldSteps) {
        s.phase = Phase::kSuccess;
        s.success_step = event.decision_step;
        return s;
      }
    } else {
      s.lift_streak = 0;
      s.phase = Phase::kGrasped;
    }
  }

  if (state.attached_to == Attachment::kFree && !object_over_platform(state)) {
    s.phase = Phase::kFailedDropped;
    return s;
  }

  double drift = angle_distance(robot.base_pose.orientation.z(), robot.yaw_ref);
  if (drift > kYawTerminationDeg * kPi / 180.0) {
    s.phase = Phase::kFailedYaw;
    return s;
  }

  if (event.end_of_decision && event.decision_step >= config.timeout_steps) {
    s.phase = Phase::kFailedTimeout;
  }
  return s;
}

}  // namespace dqbench
