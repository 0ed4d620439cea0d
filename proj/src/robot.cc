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

#include "dqbench/robot.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "dqbench/errors.h"

namespace dqbench {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kStrideLength = 0.4;  // metres of travel per gait cycle
constexpr double kTurnGaitGain = 0.25;  // metres of "travel" per radian turned

const Vec3 kWorkspaceCenter(0.0, 0.0, kWorkspaceCenterHeight);

double clamp_abs(double v, double limit) {
  return std::clamp(v, -limit, limit);
}

// sin(h)/h, accurate near zero.
double sinc(double h) {
  if (std::abs(h) < 1e-4) return 1.0 - h * h / 6.0;
  return std::sin(h) / h;
}

// Exact solution of x' = sat((target - x) / tau, vmax) over dt. The motion
// is along a fixed line, so only the remaining distance evolves.
Vec3 track_position(const Vec3& x, const Vec3& target, double dt) {
  Vec3 delta = target - x;
  double d = delta.norm();
  if (d == 0.0) return target;
  const double d_sat = kEeMaxSpeed * kEeTau;
  double remaining;
  if (d > d_sat) {
    double t_linear = (d - d_sat) / kEeMaxSpeed;
    remaining = dt <= t_linear
                    ? d - kEeMaxSpeed * dt
                    : d_sat * std::exp(-(dt - t_linear) / kEeTau);
  } else {
    remaining = d * std::exp(-dt / kEeTau);
  }
  return target - delta * (remaining / d);
}

Vec3 track_orientation(const Vec3& rpy, const Vec3& target_rpy, double dt) {
  Eigen::Quaterniond q(euler_to_rotation(rpy));
  Eigen::Quaterniond qt(euler_to_rotation(target_rpy));
  double s = 1.0 - std::exp(-dt / kEeTau);
  return rotation_to_euler(q.slerp(s, qt).toRotationMatrix());
}

Vec12 gait_joints(double distance) {
  const Vec12& q0 = default_joint_positions();
  Vec12 q = q0;
  // Trot: diagonal pairs (FR, RL) and (FL, RR) in anti-phase.
  static constexpr double kLegPhase[4] = {0.0, kPi, kPi, 0.0};
  double theta = 2.0 * kPi * distance / kStrideLength;
  for (int leg = 0; leg < 4; ++leg) {
    double s = std::sin(theta + kLegPhase[leg]);
    q[3 * leg + 1] += 0.25 * s;
    q[3 * leg + 2] -= 0.35 * std::max(0.0, s);
  }
  return q;
}

}  // namespace

HighLevelAction::HighLevelAction(const Vec3& dp_in, const Vec3& dr_in,
                                 double v_lin_in, double omega_yaw_in,
                                 bool gripper_close_in)
    : dp(dp_in),
      dr(dr_in),
      v_lin(clamp_abs(v_lin_in, kMaxVLin)),
      omega_yaw(clamp_abs(omega_yaw_in, kMaxOmegaYaw)),
      gripper_close(gripper_close_in) {
  double n = dp.norm();
  if (n > kMaxDp) dp *= kMaxDp / n;
  for (int i = 0; i < 3; ++i) dr[i] = clamp_abs(dr[i], kMaxDr);
}

Vec8 HighLevelAction::as_vector() const {
  Vec8 v;
  v << dp, dr, v_lin, omega_yaw;
  return v;
}

Vec8 CommandVector::as_vector() const {
  Vec8 v;
  v << p_hat, r_hat, v_lin, omega_yaw;
  return v;
}

const Vec12& default_joint_positions() {
  static const Vec12 q = [] {
    Vec12 v;
    for (int leg = 0; leg < 4; ++leg) v.segment<3>(3 * leg) << 0.0, 0.8, -1.5;
    return v;
  }();
  return q;
}

RobotState make_robot(const TerrainField& terrain, double x, double y,
                      double yaw) {
  RobotState r;
  r.base_pose.position = Vec3(x, y, terrain.height(x, y) + kNominalBaseHeight);
  r.base_pose.orientation = Vec3(0.0, 0.0, normalize_angle(yaw));
  r.ee_target = Pose6{Vec3(0.45, 0.0, 0.25), Vec3::Zero()};
  r.ee_local = r.ee_target;
  r.ee_pose = compose(r.base_pose, r.ee_local);
  r.yaw_ref = r.base_pose.orientation.z();
  r.joint_proxy = gait_joints(0.0);
  return r;
}

Vec3 clamp_to_workspace(const Vec3& p) {
  Vec3 d = p - kWorkspaceCenter;
  double n = d.norm();
  if (n <= kWorkspaceRadius) return p;
  return kWorkspaceCenter + d * (kWorkspaceRadius / n);
}

bool in_workspace(const Vec3& p, double tol) {
  return (p - kWorkspaceCenter).norm() <= kWorkspaceRadius + tol;
}

CommandVector accumulate_command(const RobotState& robot,
                                 const HighLevelAction& a) {
  CommandVector u;
  u.p_hat = clamp_to_workspace(robot.ee_target.position + a.dp);
  u.r_hat = normalize_angles(robot.ee_target.orientation + a.dr);
  u.v_lin = a.v_lin;
  u.omega_yaw = a.omega_yaw;
  return u;
}

RobotState execute_command(const RobotState& robot, const CommandVector& u,
                           const TerrainField& terrain, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("execute_command: dt must be > 0");
  RobotState next = robot;

  // Unicycle, integrated exactly along the arc.
  const double yaw = robot.base_pose.orientation.z();
  const double h = 0.5 * u.omega_yaw * dt;
  const double chord = u.v_lin * dt * sinc(h);
  Vec3 pos = robot.base_pose.position;
  pos.x() += chord * std::cos(yaw + h);
  pos.y() += chord * std::sin(yaw + h);
  const double new_yaw = yaw + u.omega_yaw * dt;

  const double z_target = terrain.height(pos.x(), pos.y()) + kNominalBaseHeight;
  pos.z() = z_target + (robot.base_pose.position.z() - z_target) *
                           std::exp(-dt / kBaseHeightTau);

  next.base_pose.position = pos;
  next.base_pose.orientation = Vec3(0.0, 0.0, normalize_angle(new_yaw));
  next.base_twist.linear =
      Vec3(u.v_lin * std::cos(new_yaw), u.v_lin * std::sin(new_yaw),
           (pos.z() - robot.base_pose.position.z()) / dt);
  next.base_twist.angular = Vec3(0.0, 0.0, u.omega_yaw);

  // End-effector tracks the commanded target in the base frame.
  next.ee_target = u.target();
  next.ee_local.position =
      track_position(robot.ee_local.position, u.p_hat, dt);
  next.ee_local.orientation =
      track_orientation(robot.ee_local.orientation, u.r_hat, dt);
  next.ee_pose = compose(next.base_pose, next.ee_local);
  next.ee_twist.linear = (next.ee_pose.position - robot.ee_pose.position) / dt;
  next.ee_twist.angular = Vec3::Zero();

  next.gait_distance +=
      (std::abs(u.v_lin) + kTurnGaitGain * std::abs(u.omega_yaw)) * dt;
  next.joint_proxy = gait_joints(next.gait_distance);
  return next;
}

Eigen::VectorXd ik_pseudoinverse_step(const Eigen::MatrixXd& jacobian,
                                      const Eigen::VectorXd& error) {
  if (jacobian.rows() != error.size()) {
    throw InvalidArgument("ik_pseudoinverse_step: J has " +
                          std::to_string(jacobian.rows()) + " rows, e has " +
                          std::to_string(error.size()) + " entries");
  }
  Eigen::MatrixXd jjt = jacobian * jacobian.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jjt,
                                                     Eigen::EigenvaluesOnly);
  double lo = eig.eigenvalues().minCoeff();
  double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12) {
    throw SingularJacobian("ik_pseudoinverse_step: J J^T is singular "
                           "(condition number > 1e12)");
  }
  return jacobian.transpose() * jjt.ldlt().solve(error);
}

Vec3 interpolate_target(const Vec3& p, const Vec3& p_end, double t, double T) {
  if (!(T > 0.0)) throw InvalidArgument("interpolate_target: T must be > 0");
  if (!(t >= 0.0 && t <= T)) {
    throw InvalidArgument("interpolate_target: t outside [0, T]");
  }
  double s = t / T;
  return s * p_end + (1.0 - s) * p;
}

}  // namespace dqbench
