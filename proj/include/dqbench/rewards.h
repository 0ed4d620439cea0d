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

// High-level (grasping) and low-level (locomotion) reward terms as pure
// functions. Each call returns the per-term breakdown and its total.

#ifndef DQBENCH_REWARDS_H_
#define DQBENCH_REWARDS_H_

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "dqbench/robot.h"
#include "dqbench/se3.h"

namespace dqbench {

using Vec4 = Eigen::Vector4d;

struct RewardTerm {
  std::string name;
  double raw = 0.0;
  double weight = 0.0;
  double weighted = 0.0;
};

struct RewardBreakdown {
  std::vector<RewardTerm> terms;
  double total = 0.0;

  // Throws NotFound for an unknown name.
  const RewardTerm& term(std::string_view name) const;
};

enum class RewardPhase { kApproaching, kGrasped, kLifted };

struct HighLevelRewardInput {
  RewardPhase phase = RewardPhase::kApproaching;
  double dist_ee_obj = 0.0;
  double lift_height = 0.0;
  bool completed = false;
  Vec12 q_dot_prev = Vec12::Zero();
  Vec12 q_dot = Vec12::Zero();
  Vec8 a_prev = Vec8::Zero();
  Vec8 a = Vec8::Zero();
  double v_x_star = 0.0;
  Vec3 d_obj = Vec3::UnitX();
  Vec3 d_ee = Vec3::UnitX();
  Vec3 d_base = Vec3::UnitX();
  double x_obj = 0.0;
  double x_base = 0.0;
  double H_c = 0.0;
  double H_t = 0.0;
  double psi_c = 0.0;
  double psi_0 = 0.0;
};

// Default weights. The yaw penalty's raw value is already negative, so its
// weight is stored as a positive magnitude and the weighted term is a
// penalty.
struct HighLevelWeights {
  double approach = 0.5;
  double lift = 0.8;
  double completion = 3.5;
  double acc = -0.001;
  double cmd = 0.05;
  double action = -0.001;
  double ee_orn = 0.01;
  double base_orn = 0.25;
  double base_approach = 0.01;
  double base_h = 0.5;
  double yaw = 0.4;
};

struct HighLevelRewardParams {
  HighLevelWeights weights;
  double standoff = 0.6;
};

struct LowLevelState {
  Vec12 q = Vec12::Zero();
  Vec12 q_dot = Vec12::Zero();
  Vec12 q_ddot = Vec12::Zero();
  Vec12 q_star = Vec12::Zero();
  Vec12 tau = Vec12::Zero();
  Vec3 v_b = Vec3::Zero();
  Vec3 omega_b = Vec3::Zero();
  double v_x_star = 0.0;
  double v_yaw_star = 0.0;
  int n_collision = 0;
  Vec4 f_foot = Vec4::Zero();
  Vec4 v_z_foot = Vec4::Zero();
  Vec4 t_air = Vec4::Zero();
  double h_b = 0.0;
  double h_b_target = 0.0;
  Vec12 q_default = Vec12::Zero();
  Vec4 contact_cmd = Vec4::Zero();
};

struct LowLevelWeights {
  double lin_vel_tracking = 1.0;
  double yaw_vel_tracking = 0.5;
  double ang_vel_penalty = 0.05;
  double torques = 0.00002;
  double action_rate = 0.25;
  double collisions = 0.001;
  double feet_air_time = 2.0;
  double default_joint = 1.0;
  double lin_vel_z = -1.5;
  double base_height = -5.0;
  double swing_force = -0.2;
  double stance_velocity = -0.2;
};

struct LowLevelRewardParams {
  LowLevelWeights weights;
  double sigma_cf = 100.0;  // N^2
  double sigma_cv = 0.05;   // (m/s)^2
};

inline constexpr double kDefaultSigmaTrack = 0.25;

// Task terms: exactly one of approach / lift / completion is active.
//   approach   = exp(-2 * dist_ee_obj)                 while approaching
//   lift       = exp(-10 * max(0, 0.15 - lift_height)) while grasped/lifted
//   completion = 1                                     once completed
// Throws InvalidArgument on NaN input or non-unit direction vectors.
RewardBreakdown high_level_reward(const HighLevelRewardInput& in,
                                  const HighLevelRewardParams& params = {});

// 0 when the wrapped |psi_c - psi_0| <= pi/3, else -tanh(|psi_c - psi_0|).
double yaw_penalty(double psi_c, double psi_0);

// Throws InvalidArgument on NaN input or sigma_track <= 0.
RewardBreakdown low_level_reward(const LowLevelState& s,
                                 double sigma_track = kDefaultSigmaTrack,
                                 const LowLevelRewardParams& params = {});

}  // namespace dqbench

#endif  // DQBENCH_REWARDS_H_
