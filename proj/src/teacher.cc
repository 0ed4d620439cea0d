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

#include "dqbench/teacher.h"

#include <algorithm>
#include <cmath>

#include "dqbench/errors.h"

namespace dqbench {

namespace {

using Vec2 = Eigen::Vector2d;

constexpr double kYawGain = 2.0;
constexpr double kSpeedGain = 1.5;
constexpr double kReachMargin = 0.12;
constexpr double kLiftStep = 0.05;

Pose6 centroid_target(const Pose6& obj, const Pose6& base) {
  Vec3 d = obj.position - base.position;
  return {obj.position, {0.0, 0.0, std::atan2(d.y(), d.x())}};
}

// Base-frame pose of a world pose after the base has moved for `lead`
// seconds under (v_lin, omega) and the world pose has drifted by `v`.
Pose6 predicted_local(const Pose6& world, const Vec3& v, const Pose6& base,
                      double v_lin, double omega, double lead) {
  Pose6 b = base;
  double yaw = base.orientation.z();
  b.position.x() += v_lin * lead * std::cos(yaw + 0.5 * omega * lead);
  b.position.y() += v_lin * lead * std::sin(yaw + 0.5 * omega * lead);
  b.orientation.z() = normalize_angle(yaw + omega * lead);
  Pose6 w = world;
  w.position += v * lead;
  return compose(inverse(b), w);
}

}  // namespace

void TeacherConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) {
      throw InvalidConfig(std::string("teacher.") + name + " must be > 0");
    }
  };
  positive(standoff, "standoff");
  positive(align_pos_tol, "align_pos_tol");
  positive(align_ori_tol, "align_ori_tol");
  positive(max_rel_speed_at_close, "max_rel_speed_at_close");
  positive(intercept_horizon, "intercept_horizon");
  positive(decision_dt, "decision_dt");
}

TeacherPlan plan_teacher(const SceneState& scene, const RobotState& robot,
                         const GraspMemoryBank& bank,
                         const ObjectFeature& feature,
                         const GfmWeights& gfm_weights,
                         const TeacherConfig& cfg) {
  TeacherPlan plan;
  const Pose6& base = robot.base_pose;
  const Pose6& obj = scene.object_pose;
  const Vec3 v_obj = scene.object_twist.linear;
  const double yaw = base.orientation.z();

  plan.grasp_target = cfg.use_gfm
                          ? select_argmax(bank, obj, feature, gfm_weights)
                          : centroid_target(obj, base);
  plan.position_error =
      (robot.ee_pose.position - plan.grasp_target.position).norm();
  plan.orientation_error =
      rotation_angle_between(robot.ee_pose, plan.grasp_target);
  plan.relative_speed = (robot.ee_twist.linear - v_obj).norm();

  const bool holding = scene.attached_to == Attachment::kGripper &&
                       robot.gripper == Gripper::kClosed;
  if (holding) {
    double dz = lift_height(scene) < kTeacherLiftHeight ? kLiftStep : 0.0;
    plan.intercept = obj.position;
    plan.approach_point = Vec3(base.position.x(), base.position.y(), 0.0);
    plan.action = HighLevelAction(Vec3(0.0, 0.0, dz), Vec3::Zero(), 0.0, 0.0,
                                  true);
    return plan;
  }

  // Intercept and base approach point.
  Vec2 rel = (obj.position - base.position).head<2>();
  double time_to_reach =
      std::max(0.0, rel.norm() - cfg.standoff) / kMaxVLin;
  plan.intercept =
      obj.position + v_obj * std::min(cfg.intercept_horizon, time_to_reach);
  Vec2 to_goal = (plan.intercept - base.position).head<2>();
  Vec2 dir = to_goal.norm() > 1e-9 ? Vec2(to_goal.normalized())
                                   : Vec2(std::cos(yaw), std::sin(yaw));

  double dz = plan.grasp_target.position.z() - base.position.z() -
              kWorkspaceCenterHeight;
  double reach = std::sqrt(std::max(
      0.0, kWorkspaceRadius * kWorkspaceRadius - dz * dz)) - kReachMargin;
  double standoff = std::clamp(reach, 0.2, cfg.standoff);
  Vec2 goal = plan.intercept.head<2>() - standoff * dir;
  plan.approach_point = Vec3(goal.x(), goal.y(), 0.0);

  double desired = std::atan2(dir.y(), dir.x());
  double offset = std::clamp(normalize_angle(desired - robot.yaw_ref),
                             -kTeacherMaxTurn, kTeacherMaxTurn);
  double yaw_err = normalize_angle(robot.yaw_ref + offset - yaw);
  double omega = kYawGain * yaw_err;
  Vec2 heading(std::cos(yaw), std::sin(yaw));
  double along = (goal - base.position.head<2>()).dot(heading);
  double v_lin = kSpeedGain * along + v_obj.head<2>().dot(heading);
  HighLevelAction limits(Vec3::Zero(), Vec3::Zero(), v_lin, omega, false);

  // End-effector target with velocity feed-forward over the tracking lag.
  Pose6 local = predicted_local(plan.grasp_target, v_obj, base, limits.v_lin,
                                limits.omega_yaw, kEeTau);
  Vec3 dp = local.position - robot.ee_target.position;
  Vec3 dr = normalize_angles(local.orientation - robot.ee_target.orientation);

  bool aligned = plan.position_error <= cfg.align_pos_tol &&
                 plan.orientation_error <= cfg.align_ori_tol &&
                 plan.relative_speed <= cfg.max_rel_speed_at_close;
  // A closed but empty gripper reopens before the next try.
  bool close = aligned && robot.gripper == Gripper::kOpen;
  plan.action = HighLevelAction(dp, dr, limits.v_lin, limits.omega_yaw, close);
  return plan;
}

HighLevelAction teacher_step(const SceneState& scene, const RobotState& robot,
                             const GraspMemoryBank& bank,
                             const GfmWeights& gfm_weights,
                             const TeacherConfig& cfg) {
  if (cfg.use_gfm && bank.empty()) {
    throw EmptyBank("teacher_step: empty memory bank for '" + bank.object_id +
                    "'");
  }
  return plan_teacher(scene, robot, bank, object_feature(scene.object),
                      gfm_weights, cfg)
      .action;
}

}  // namespace dqbench
