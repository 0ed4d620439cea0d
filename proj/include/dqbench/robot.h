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

// Idealized whole-body command executor: unicycle base, first-order
// end-effector tracking inside a spherical workspace, gripper bit, and the
// arm IK / target interpolation formulas.

#ifndef DQBENCH_ROBOT_H_
#define DQBENCH_ROBOT_H_

#include <Eigen/Core>

#include "dqbench/se3.h"
#include "dqbench/terrain.h"

namespace dqbench {

using Vec8 = Eigen::Matrix<double, 8, 1>;
using Vec12 = Eigen::Matrix<double, 12, 1>;

inline constexpr double kWorkspaceRadius = 0.8;
inline constexpr double kWorkspaceCenterHeight = 0.3;
inline constexpr double kNominalBaseHeight = 0.55;
inline constexpr double kBaseHeightTau = 0.2;
inline constexpr double kEeTau = 0.15;
inline constexpr double kEeMaxSpeed = 1.0;

inline constexpr double kMaxDp = 0.05;
inline constexpr double kMaxDr = 0.2;
inline constexpr double kMaxVLin = 0.8;
inline constexpr double kMaxOmegaYaw = 1.0;

enum class Gripper { kOpen, kClosed };

struct RobotState {
  // z is the body height in the world frame.
  Pose6 base_pose;
  Twist base_twist;  // world frame
  Pose6 ee_target;   // base frame
  Pose6 ee_local;    // tracked end-effector pose, base frame
  Pose6 ee_pose;     // world frame
  Twist ee_twist;    // world frame, averaged over the last step
  Gripper gripper = Gripper::kOpen;
  double yaw_ref = 0.0;
  Vec12 joint_proxy = Vec12::Zero();
  double gait_distance = 0.0;

  bool operator==(const RobotState&) const = default;
};

// Inputs are clamped on construction: |dp| <= 0.05 m (norm), |dr_i| <= 0.2
// rad, |v_lin| <= 0.8 m/s, |omega_yaw| <= 1.0 rad/s.
struct HighLevelAction {
  HighLevelAction() = default;
  HighLevelAction(const Vec3& dp, const Vec3& dr, double v_lin,
                  double omega_yaw, bool gripper_close);

  Vec3 dp = Vec3::Zero();
  Vec3 dr = Vec3::Zero();
  double v_lin = 0.0;
  double omega_yaw = 0.0;
  bool gripper_close = false;

  // [dp, dr, v_lin, omega_yaw]
  Vec8 as_vector() const;
};

struct CommandVector {
  Vec3 p_hat = Vec3::Zero();
  Vec3 r_hat = Vec3::Zero();
  double v_lin = 0.0;
  double omega_yaw = 0.0;

  Vec8 as_vector() const;
  Pose6 target() const { return {p_hat, r_hat}; }
};

// Default joint configuration of the 12 leg joints (hip, thigh, calf per leg).
const Vec12& default_joint_positions();

// Spawns the robot at `position` (planar) facing `yaw`, standing at the
// nominal height above the terrain.
RobotState make_robot(const TerrainField& terrain, double x, double y,
                      double yaw);

// Projects a base-frame point onto the workspace ball.
Vec3 clamp_to_workspace(const Vec3& p);
bool in_workspace(const Vec3& p, double tol = 1e-12);

CommandVector accumulate_command(const RobotState& robot,
                                 const HighLevelAction& a);

// Advances the robot by dt. Base and end-effector integrators use exact
// solutions for constant commands, so splitting a step does not change the
// result.
RobotState execute_command(const RobotState& robot, const CommandVector& u,
                           const TerrainField& terrain, double dt);

// Minimum-norm solution J^T (J J^T)^-1 e. Throws SingularJacobian when the
// condition number of J J^T exceeds 1e12.
Eigen::VectorXd ik_pseudoinverse_step(const Eigen::MatrixXd& jacobian,
                                      const Eigen::VectorXd& error);

// (t/T) p_end + (1 - t/T) p for t in [0, T].
Vec3 interpolate_target(const Vec3& p, const Vec3& p_end, double t, double T);

}  // namespace dqbench

#endif  // DQBENCH_ROBOT_H_
