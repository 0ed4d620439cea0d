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

#include "dqbench/se3.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dqbench/errors.h"

namespace dqbench {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGimbalEps = 1e-12;

void require_finite(const Pose6& p, const char* what) {
  if (!is_finite(p)) {
    throw InvalidArgument(std::string(what) + ": non-finite pose");
  }
}

}  // namespace

double normalize_angle(double a) {
  if (a > -kPi && a <= kPi) return a;
  double y = std::fmod(a + kPi, 2.0 * kPi);
  if (y <= 0.0) y += 2.0 * kPi;
  return y - kPi;
}

Vec3 normalize_angles(const Vec3& a) {
  return {normalize_angle(a.x()), normalize_angle(a.y()),
          normalize_angle(a.z())};
}

double angle_distance(double a, double b) {
  return std::abs(normalize_angle(a - b));
}

Mat3 euler_to_rotation(const Vec3& rpy) {
  return (Eigen::AngleAxisd(rpy.x(), Vec3::UnitX()) *
          Eigen::AngleAxisd(rpy.y(), Vec3::UnitY()) *
          Eigen::AngleAxisd(rpy.z(), Vec3::UnitZ()))
      .toRotationMatrix();
}

Vec3 rotation_to_euler(const Mat3& r) {
  // r(0,2) = sin(pitch); r(1,2) = -sin(roll)cos(pitch);
  // r(2,2) = cos(roll)cos(pitch); r(0,1) = -cos(pitch)sin(yaw).
  double sp = std::clamp(r(0, 2), -1.0, 1.0);
  double pitch = std::asin(sp);
  double roll, yaw;
  if (1.0 - std::abs(sp) > kGimbalEps) {
    roll = std::atan2(-r(1, 2), r(2, 2));
    yaw = std::atan2(-r(0, 1), r(0, 0));
  } else {
    // Gimbal lock: only roll +/- yaw is observable; put it all in roll.
    roll = std::atan2(r(2, 1), r(1, 1));
    yaw = 0.0;
  }
  return normalize_angles({roll, pitch, yaw});
}

Transform euler_to_transform(const Pose6& p) {
  require_finite(p, "euler_to_transform");
  return {euler_to_rotation(p.orientation), p.position};
}

Pose6 transform_to_euler(const Transform& t) {
  return {t.translation, rotation_to_euler(t.rotation)};
}

Pose6 compose(const Pose6& a, const Pose6& b) {
  return transform_to_euler(euler_to_transform(a) * euler_to_transform(b));
}

Pose6 inverse(const Pose6& p) {
  return transform_to_euler(euler_to_transform(p).Inverse());
}

Pose6 grasp_to_world(const Pose6& rel, const Pose6& obj) {
  return compose(obj, rel);
}

Vec6 vec6_encode(const Pose6& p) {
  Vec6 v;
  v << p.position, p.orientation;
  return v;
}

Pose6 vec6_decode(const Vec6& v) {
  if (!v.allFinite()) throw InvalidArgument("vec6_decode: non-finite vector");
  return {v.head<3>(), normalize_angles(v.tail<3>())};
}

double rotation_angle_between(const Pose6& a, const Pose6& b) {
  Mat3 rel = euler_to_rotation(a.orientation).transpose() *
             euler_to_rotation(b.orientation);
  double c = std::clamp((rel.trace() - 1.0) * 0.5, -1.0, 1.0);
  return std::acos(c);
}

bool is_finite(const Pose6& p) {
  return p.position.allFinite() && p.orientation.allFinite();
}

}  // namespace dqbench
