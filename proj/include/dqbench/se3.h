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

// Rigid-body pose algebra. Orientations are intrinsic XYZ Euler angles:
// R = Rx(roll) * Ry(pitch) * Rz(yaw), each angle normalized to (-pi, pi].

#ifndef DQBENCH_SE3_H_
#define DQBENCH_SE3_H_

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace dqbench {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;

struct Pose6 {
  Vec3 position = Vec3::Zero();
  Vec3 orientation = Vec3::Zero();

  static Pose6 Identity() { return {}; }
  static Pose6 FromPosition(const Vec3& p) { return {p, Vec3::Zero()}; }

  bool operator==(const Pose6& o) const {
    return position == o.position && orientation == o.orientation;
  }
};

struct Twist {
  Vec3 linear = Vec3::Zero();
  Vec3 angular = Vec3::Zero();

  bool operator==(const Twist& o) const {
    return linear == o.linear && angular == o.angular;
  }
};

struct Transform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static Transform Identity() { return {}; }

  Transform operator*(const Transform& b) const {
    return {rotation * b.rotation, rotation * b.translation + translation};
  }
  Vec3 Apply(const Vec3& p) const { return rotation * p + translation; }
  Transform Inverse() const {
    Mat3 rt = rotation.transpose();
    return {rt, -rt * translation};
  }
};

// Wraps to (-pi, pi]; -pi maps to +pi.
double normalize_angle(double a);
Vec3 normalize_angles(const Vec3& a);

// Smallest absolute difference between two angles, in [0, pi].
double angle_distance(double a, double b);

Mat3 euler_to_rotation(const Vec3& rpy);
Vec3 rotation_to_euler(const Mat3& r);

// Throws InvalidArgument on non-finite input.
Transform euler_to_transform(const Pose6& p);
Pose6 transform_to_euler(const Transform& t);

// Pose of frame b expressed through frame a.
Pose6 compose(const Pose6& a, const Pose6& b);
Pose6 inverse(const Pose6& p);

// Object-local grasp pose to world frame, given the object pose.
Pose6 grasp_to_world(const Pose6& rel, const Pose6& obj);

// Layout [px, py, pz, rx, ry, rz].
Vec6 vec6_encode(const Pose6& p);
// Normalizes the angle components. Throws InvalidArgument on non-finite input.
Pose6 vec6_decode(const Vec6& v);

// Geodesic angle of the relative rotation between two orientations.
double rotation_angle_between(const Pose6& a, const Pose6& b);

bool is_finite(const Pose6& p);

}  // namespace dqbench

#endif  // DQBENCH_SE3_H_
