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

#include "dqbench/rewards.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dqbench/errors.h"

namespace dqbench {

namespace {

constexpr double kPi = std::numbers::pi;

void add(RewardBreakdown& b, std::string name, double raw, double weight) {
  double weighted = raw * weight;
  b.terms.push_back({std::move(name), raw, weight, weighted});
  b.total += weighted;
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (!m.allFinite()) {
    throw InvalidArgument(std::string("reward input '") + what +
                          "' is not finite");
  }
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw InvalidArgument(std::string("reward input '") + what +
                          "' is not finite");
  }
}

void require_unit(const Vec3& v, const char* what) {
  require_finite(v, what);
  if (std::abs(v.norm() - 1.0) > 1e-6) {
    throw InvalidArgument(std::string("reward input '") + what +
                          "' must be a unit vector");
  }
}

// Gaussian tracking kernel exp(-|x|^2 / sigma).
double phi(double squared_norm, double sigma) {
  return std::exp(-squared_norm / sigma);
}

}  // namespace

const RewardTerm& RewardBreakdown::term(std::string_view name) const {
  for (const auto& t : terms) {
    if (t.name == name) return t;
  }
  throw NotFound("no reward term '" + std::string(name) + "'");
}

double yaw_penalty(double psi_c, double psi_0) {
  double d = angle_distance(psi_c, psi_0);
  return d > kPi / 3.0 ? -std::tanh(d) : 0.0;
}

RewardBreakdown high_level_reward(const HighLevelRewardInput& in,
                                  const HighLevelRewardParams& params) {
  require_finite(in.dist_ee_obj, "dist_ee_obj");
  require_finite(in.lift_height, "lift_height");
  require_finite(in.q_dot_prev, "q_dot_prev");
  require_finite(in.q_dot, "q_dot");
  require_finite(in.a_prev, "a_prev");
  require_finite(in.a, "a");
  require_finite(in.v_x_star, "v_x_star");
  require_finite(in.x_obj, "x_obj");
  require_finite(in.x_base, "x_base");
  require_finite(in.H_c, "H_c");
  require_finite(in.H_t, "H_t");
  require_finite(in.psi_c, "psi_c");
  require_finite(in.psi_0, "psi_0");
  require_unit(in.d_obj, "d_obj");
  require_unit(in.d_ee, "d_ee");
  require_unit(in.d_base, "d_base");

  const HighLevelWeights& w = params.weights;
  RewardBreakdown b;

  double approach = 0.0, lift = 0.0, completion = 0.0;
  if (in.completed) {
    completion = 1.0;
  } else if (in.phase == RewardPhase::kApproaching) {
    approach = std::exp(-2.0 * in.dist_ee_obj);
  } else {
    lift = std::exp(-10.0 * std::max(0.0, 0.15 - in.lift_height));
  }
  add(b, "approach", approach, w.approach);
  add(b, "lift", lift, w.lift);
  add(b, "completion", completion, w.completion);

  add(b, "acc", 1.0 - std::exp(-(in.q_dot_prev - in.q_dot).norm()), w.acc);
  double vx = std::abs(in.v_x_star);
  add(b, "cmd", -vx + 0.25 * std::exp(-vx), w.cmd);
  add(b, "action", 1.0 - std::exp(-(in.a_prev - in.a).norm()), w.action);
  add(b, "ee_orn", std::clamp(in.d_obj.dot(in.d_ee), -1.0, 1.0), w.ee_orn);
  add(b, "base_orn", std::clamp(in.d_obj.dot(in.d_base), -1.0, 1.0),
      w.base_orn);
  add(b, "base_approach",
      1.0 + std::tanh(-10.0 *
                      std::abs(in.x_obj - in.x_base - params.standoff)),
      w.base_approach);
  add(b, "base_h", std::exp(-std::abs(in.H_c - in.H_t)), w.base_h);
  add(b, "yaw", yaw_penalty(in.psi_c, in.psi_0), w.yaw);
  return b;
}

RewardBreakdown low_level_reward(const LowLevelState& s, double sigma_track,
                                 const LowLevelRewardParams& params) {
  if (!(sigma_track > 0.0)) {
    throw InvalidArgument("sigma_track must be positive");
  }
  require_finite(s.q, "q");
  require_finite(s.q_dot, "q_dot");
  require_finite(s.q_ddot, "q_ddot");
  require_finite(s.q_star, "q_star");
  require_finite(s.tau, "tau");
  require_finite(s.v_b, "v_b");
  require_finite(s.omega_b, "omega_b");
  require_finite(s.v_x_star, "v_x_star");
  require_finite(s.v_yaw_star, "v_yaw_star");
  require_finite(s.f_foot, "f_foot");
  require_finite(s.v_z_foot, "v_z_foot");
  require_finite(s.t_air, "t_air");
  require_finite(s.h_b, "h_b");
  require_finite(s.h_b_target, "h_b_target");
  require_finite(s.q_default, "q_default");
  require_finite(s.contact_cmd, "contact_cmd");
  if ((s.t_air.array() < 0.0).any()) {
    throw InvalidArgument("t_air must be non-negative");
  }

  const LowLevelWeights& w = params.weights;
  RewardBreakdown b;

  Eigen::Vector2d v_err(s.v_x_star - s.v_b.x(), -s.v_b.y());
  add(b, "lin_vel_tracking", phi(v_err.squaredNorm(), sigma_track),
      w.lin_vel_tracking);
  double yaw_err = s.v_yaw_star - s.omega_b.z();
  add(b, "yaw_vel_tracking", phi(yaw_err * yaw_err, sigma_track),
      w.yaw_vel_tracking);
  add(b, "ang_vel_penalty", -s.omega_b.head<2>().squaredNorm(),
      w.ang_vel_penalty);
  add(b, "torques", -s.tau.squaredNorm(), w.torques);
  add(b, "action_rate", -s.q_star.squaredNorm(), w.action_rate);
  add(b, "collisions", -static_cast<double>(s.n_collision), w.collisions);
  add(b, "feet_air_time", (s.t_air.array() - 0.5).sum(), w.feet_air_time);
  add(b, "default_joint", std::exp(-0.05 * (s.q - s.q_default).norm()),
      w.default_joint);
  add(b, "lin_vel_z", s.v_b.z() * s.v_b.z(), w.lin_vel_z);
  add(b, "base_height", std::abs(s.h_b - s.h_b_target), w.base_height);

  double swing = 0.0, stance = 0.0;
  for (int i = 0; i < 4; ++i) {
    double c = s.contact_cmd[i];
    swing += (1.0 - c) *
             (1.0 - std::exp(-s.f_foot[i] * s.f_foot[i] / params.sigma_cf));
    stance += c * (1.0 - std::exp(-s.v_z_foot[i] * s.v_z_foot[i] /
                                  params.sigma_cv));
  }
  add(b, "swing_force", swing, w.swing_force);
  add(b, "stance_velocity", stance, w.stance_velocity);
  return b;
}

}  // namespace dqbench
