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

#include "dqbench/perception.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include "dqbench/errors.h"
#include "dqbench/seed.h"

namespace dqbench {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double deg(double d) { return d * kPi / 180.0; }

// Ray o + t d against an axis-aligned box centred at the origin. Returns the
// first t in [t_min, t_max) or +inf.
double hit_box(const Vec3& o, const Vec3& d, const Vec3& half, double t_min,
               double t_max) {
  double t0 = -kInf, t1 = kInf;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(d[i]) < 1e-15) {
      if (std::abs(o[i]) > half[i]) return kInf;
      continue;
    }
    double inv = 1.0 / d[i];
    double a = (-half[i] - o[i]) * inv;
    double b = (half[i] - o[i]) * inv;
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
  }
  if (t0 > t1) return kInf;
  double t = t0 >= t_min ? t0 : t1;
  return (t >= t_min && t < t_max) ? t : kInf;
}

double hit_sphere(const Vec3& o, const Vec3& d, double r, double t_min,
                  double t_max) {
  double a = d.squaredNorm();
  double b = o.dot(d);
  double c = o.squaredNorm() - r * r;
  double disc = b * b - a * c;
  if (disc < 0.0) return kInf;
  double s = std::sqrt(disc);
  for (double t : {(-b - s) / a, (-b + s) / a}) {
    if (t >= t_min && t < t_max) return t;
  }
  return kInf;
}

// Capped cylinder along z.
double hit_cylinder(const Vec3& o, const Vec3& d, double r, double hz,
                    double t_min, double t_max) {
  double best = kInf;
  double a = d.x() * d.x() + d.y() * d.y();
  if (a > 1e-15) {
    double b = o.x() * d.x() + o.y() * d.y();
    double c = o.x() * o.x() + o.y() * o.y() - r * r;
    double disc = b * b - a * c;
    if (disc >= 0.0) {
      double s = std::sqrt(disc);
      for (double t : {(-b - s) / a, (-b + s) / a}) {
        if (t >= t_min && t < std::min(t_max, best) &&
            std::abs(o.z() + t * d.z()) <= hz) {
          best = t;
        }
      }
    }
  }
  if (std::abs(d.z()) > 1e-15) {
    for (double zc : {-hz, hz}) {
      double t = (zc - o.z()) / d.z();
      if (t >= t_min && t < std::min(t_max, best)) {
        double x = o.x() + t * d.x(), y = o.y() + t * d.y();
        if (x * x + y * y <= r * r) best = t;
      }
    }
  }
  return best;
}

double hit_object(const ObjectSpec& spec, const Vec3& o, const Vec3& d,
                  double t_min, double t_max) {
  switch (spec.shape) {
    case Shape::kSphere: return hit_sphere(o, d, spec.dims[0], t_min, t_max);
    case Shape::kBox: return hit_box(o, d, half_extents(spec), t_min, t_max);
    case Shape::kCylinder:
      return hit_cylinder(o, d, spec.dims[0], 0.5 * spec.dims[1], t_min, t_max);
  }
  return kInf;
}

// First root in (0, s_max] of a s^2 + b s + c, given c > 0.
double first_root(double a, double b, double c, double s_max) {
  if (std::abs(a) < 1e-14) {
    if (b >= 0.0) return kInf;
    double s = -c / b;
    return s <= s_max ? s : kInf;
  }
  double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return kInf;
  double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  double r0 = q / a, r1 = c / q;
  if (r0 > r1) std::swap(r0, r1);
  if (r0 > 0.0 && r0 <= s_max) return r0;
  if (r1 > 0.0 && r1 <= s_max) return r1;
  return kInf;
}

// Walks the lattice cells crossed by the ray inside the band of terrain
// heights and intersects each bilinear patch exactly. Rays leaving the
// lattice do not hit.
double hit_terrain(const TerrainField& terrain, const Vec3& o, const Vec3& d,
                   double t_min, double t_max) {
  const double hmax = terrain.max_height(), hmin = terrain.min_height();
  double t0 = t_min, t1 = t_max;
  if (o.z() + t0 * d.z() > hmax) {
    if (d.z() >= 0.0) return kInf;
    t0 = (hmax - o.z()) / d.z();
  }
  if (d.z() < 0.0) t1 = std::min(t1, (hmin - o.z()) / d.z() + 1e-9);

  const double cs = terrain.cell_size();
  const double gx0 = (o.x() - terrain.origin().x()) / cs;
  const double gy0 = (o.y() - terrain.origin().y()) / cs;
  const double gdx = d.x() / cs, gdy = d.y() / cs;
  const int nx = terrain.nx(), ny = terrain.ny();
  auto clip = [&](double g0, double gd, int n) {
    if (std::abs(gd) < 1e-15) {
      if (g0 < 0.0 || g0 > n - 1) t1 = -kInf;
      return;
    }
    double a = (0.0 - g0) / gd, b = (n - 1 - g0) / gd;
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
  };
  clip(gx0, gdx, nx);
  clip(gy0, gdy, ny);
  if (!(t0 < t1)) return kInf;

  double gx = gx0 + t0 * gdx, gy = gy0 + t0 * gdy;
  int i = std::clamp(static_cast<int>(gx), 0, nx - 2);
  int j = std::clamp(static_cast<int>(gy), 0, ny - 2);
  const int si = gdx > 0 ? 1 : -1, sj = gdy > 0 ? 1 : -1;
  auto next_boundary = [](double g0, double gd, int cell) {
    if (std::abs(gd) < 1e-15) return kInf;
    double edge = gd > 0 ? cell + 1 : cell;
    return (edge - g0) / gd;
  };
  double t = t0;
  while (t < t1) {
    double t_cell = std::min({next_boundary(gx0, gdx, i),
                              next_boundary(gy0, gdy, j), t1});
    const double h00 = terrain.node(i, j), h10 = terrain.node(i + 1, j);
    const double h01 = terrain.node(i, j + 1), h11 = terrain.node(i + 1, j + 1);
    const double ca = h10 - h00, cb = h01 - h00, cc = h00 - h10 - h01 + h11;
    const double ua = gx0 + t * gdx - i, va = gy0 + t * gdy - j;
    const double c = o.z() + t * d.z() -
                     (h00 + ca * ua + cb * va + cc * ua * va);
    if (c <= 0.0) return t;
    const double b =
        d.z() - (ca * gdx + cb * gdy + cc * (ua * gdy + va * gdx));
    const double a = -cc * gdx * gdy;
    double s = first_root(a, b, c, t_cell - t);
    if (s < kInf) return t + s;
    if (t_cell >= t1) break;
    if (next_boundary(gx0, gdx, i) <= next_boundary(gy0, gdy, j)) {
      i += si;
    } else {
      j += sj;
    }
    if (i < 0 || i > nx - 2 || j < 0 || j > ny - 2) break;
    t = t_cell;
  }
  return kInf;
}

struct PixelRect {
  int u0 = 0, u1 = -1, v0 = 0, v1 = -1;
  bool contains(int u, int v) const {
    return u >= u0 && u <= u1 && v >= v0 && v <= v1;
  }
};

// Pixels that can see a box with the given corners (camera frame). The
// whole image when a corner is behind the near plane.
PixelRect screen_bounds(const CameraModel& cam, const Transform& box_in_cam,
                        const Vec3& half) {
  double umin = kInf, umax = -kInf, vmin = kInf, vmax = -kInf;
  for (int k = 0; k < 8; ++k) {
    Vec3 c(k & 1 ? half.x() : -half.x(), k & 2 ? half.y() : -half.y(),
           k & 4 ? half.z() : -half.z());
    Vec3 p = box_in_cam.Apply(c);
    if (p.x() < kNearClip) return {0, cam.width - 1, 0, cam.height - 1};
    double u = cam.cx() - cam.focal() * p.y() / p.x();
    double v = cam.cy() - cam.focal() * p.z() / p.x();
    umin = std::min(umin, u);
    umax = std::max(umax, u);
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  auto lo = [](double x, int n) {
    return static_cast<int>(std::clamp(std::floor(x) - 1.0, 0.0, n - 1.0));
  };
  auto hi = [](double x, int n) {
    return static_cast<int>(std::clamp(std::ceil(x) + 1.0, -1.0, n - 1.0));
  };
  if (umax < -1.0 || vmax < -1.0 || umin > cam.width + 1.0 ||
      vmin > cam.height + 1.0) {
    return {};
  }
  return {lo(umin, cam.width), hi(umax, cam.width), lo(vmin, cam.height),
          hi(vmax, cam.height)};
}

double pixel_uniform(uint64_t seed, uint64_t pixel) {
  return static_cast<double>(splitmix64(seed ^ splitmix64(pixel)) >> 11) *
         0x1.0p-53;
}

void open_for_write(std::ofstream& out, const std::filesystem::path& path) {
  out.open(path, std::ios::binary);
  if (!out) throw FileError("cannot open '" + path.string() + "' for writing");
}

}  // namespace

double CameraModel::focal() const {
  return 0.5 * width / std::tan(0.5 * hfov);
}

double CameraModel::vfov() const {
  return 2.0 * std::atan(0.5 * height / focal());
}

void CameraModel::validate() const {
  if (!(hfov > 0.0 && hfov < kPi)) {
    throw InvalidArgument("camera: hfov must lie in (0, pi)");
  }
  if (width < 1 || height < 1) {
    throw InvalidArgument("camera: image size must be positive");
  }
  if (!is_finite(mount_offset)) {
    throw InvalidArgument("camera: non-finite mount offset");
  }
}

CameraModel default_base_camera() {
  CameraModel c;
  c.hfov = deg(kDefaultHfovDeg);
  c.mount = CameraMount::kBase;
  c.mount_offset = {{0.3, 0.0, 0.1}, {0.0, deg(kBaseCameraPitchDeg), 0.0}};
  return c;
}

CameraModel default_wrist_camera() {
  CameraModel c;
  c.hfov = deg(kDefaultHfovDeg);
  c.mount = CameraMount::kWrist;
  c.mount_offset = {{-0.05, 0.0, 0.03}, {0.0, 0.0, 0.0}};
  return c;
}

Transform camera_pose(const RobotState& robot, const CameraModel& cam) {
  const Pose6& parent =
      cam.mount == CameraMount::kBase ? robot.base_pose : robot.ee_pose;
  return euler_to_transform(parent) * euler_to_transform(cam.mount_offset);
}

Frame Frame::blank(int width, int height) {
  Frame f;
  f.width = width;
  f.height = height;
  size_t n = static_cast<size_t>(width) * height;
  f.mask.assign(n, 0);
  f.valid.assign(n, 0);
  f.depth.assign(n, 0.0f);
  return f;
}

Frame render_view(const SceneState& scene, const Transform& camera_world,
                  const CameraModel& cam, const RenderOptions& opts) {
  cam.validate();
  if (!(opts.mask_flip_prob >= 0.0 && opts.mask_flip_prob <= 1.0)) {
    throw InvalidArgument("render: mask_flip_prob must lie in [0, 1]");
  }
  Frame f = Frame::blank(cam.width, cam.height);

  const Transform obj = euler_to_transform(scene.object_pose);
  const Transform plat = euler_to_transform(scene.platform_pose);
  const Mat3 r_obj = obj.rotation.transpose() * camera_world.rotation;
  const Mat3 r_plat = plat.rotation.transpose() * camera_world.rotation;
  const Vec3 o_obj = obj.Inverse().Apply(camera_world.translation);
  Vec3 o_plat = plat.Inverse().Apply(camera_world.translation);
  o_plat.z() += scene.platform_half_extents.z();
  const bool has_object = !scene.object.dims.empty();
  const bool has_platform = scene.platform_half_extents.x() > 0.0;
  const Transform cam_inv = camera_world.Inverse();
  PixelRect obj_rect, plat_rect;
  if (has_object) {
    obj_rect = screen_bounds(cam, cam_inv * obj, half_extents(scene.object));
  }
  if (has_platform) {
    Transform centre = plat;
    centre.translation -= plat.rotation.col(2) * scene.platform_half_extents.z();
    plat_rect = screen_bounds(cam, cam_inv * centre, scene.platform_half_extents);
  }

  const double inv_f = 1.0 / cam.focal();
  for (int v = 0; v < cam.height; ++v) {
    for (int u = 0; u < cam.width; ++u) {
      // Unnormalised so that t is the z-depth.
      const Vec3 d_cam(1.0, -(u + 0.5 - cam.cx()) * inv_f,
                       -(v + 0.5 - cam.cy()) * inv_f);
      double best = kFarClip;
      bool object_hit = false;

      if (obj_rect.contains(u, v)) {
        double t = hit_object(scene.object, o_obj, r_obj * d_cam, kNearClip, best);
        if (t < best) {
          best = t;
          object_hit = true;
        }
      }
      if (plat_rect.contains(u, v)) {
        double t = hit_box(o_plat, r_plat * d_cam, scene.platform_half_extents,
                           kNearClip, best);
        if (t < best) {
          best = t;
          object_hit = false;
        }
      }
      if (scene.terrain) {
        const Vec3 d = camera_world.rotation * d_cam;
        double t = hit_terrain(*scene.terrain, camera_world.translation, d,
                               kNearClip, best);
        if (t < best) {
          best = t;
          object_hit = false;
        }
      }

      if (best < kFarClip) {
        int i = f.index(u, v);
        f.valid[i] = 1;
        f.depth[i] = static_cast<float>(best);
        f.mask[i] = object_hit ? 1 : 0;
      }
    }
  }

  if (opts.mask_flip_prob > 0.0) {
    for (size_t i = 0; i < f.pixels(); ++i) {
      if (f.valid[i] && pixel_uniform(opts.noise_seed, i) < opts.mask_flip_prob) {
        f.mask[i] ^= 1;
      }
    }
  }
  return f;
}

Frame render_frame(const SceneState& scene, const RobotState& robot,
                   const CameraModel& cam, const RenderOptions& opts) {
  return render_view(scene, camera_pose(robot, cam), cam, opts);
}

void ObsHistory::push(Frame f) {
  frames_.push_back(std::move(f));
  if (static_cast<int>(frames_.size()) > kHistoryFrames) frames_.pop_front();
}

const Frame& ObsHistory::slot(int k) const {
  if (frames_.empty()) throw NotReady("observation history has no frames yet");
  if (k < 0 || k >= kHistoryFrames) {
    throw InvalidArgument("history slot out of range");
  }
  int i = k - (kHistoryFrames - static_cast<int>(frames_.size()));
  return frames_[std::max(i, 0)];
}

nn::Tensor stack_observation(const ObsHistory& wrist, const ObsHistory& base) {
  if (!wrist.warmed() || !base.warmed()) {
    throw NotReady("stack_observation: history not warmed up");
  }
  nn::Tensor out({kObservationChannels, kImageHeight, kImageWidth});
  const size_t plane = static_cast<size_t>(kImageHeight) * kImageWidth;
  const ObsHistory* views[2] = {&wrist, &base};
  for (int view = 0; view < 2; ++view) {
    for (int k = 0; k < kHistoryFrames; ++k) {
      const Frame& f = views[view]->slot(k);
      if (f.width != kImageWidth || f.height != kImageHeight) {
        throw ShapeError("stack_observation: frame is " +
                         std::to_string(f.height) + "x" +
                         std::to_string(f.width) + ", expected 54x96");
      }
      float* mask = out.ptr() + (view * 6 + k) * plane;
      float* depth = out.ptr() + (view * 6 + 3 + k) * plane;
      for (size_t i = 0; i < plane; ++i) {
        mask[i] = f.mask[i] ? 1.0f : 0.0f;
        depth[i] = f.valid[i] ? static_cast<float>(std::clamp(
                                    static_cast<double>(f.depth[i]), 0.0,
                                    kDepthClip) /
                                    kDepthClip)
                              : 0.0f;
      }
    }
  }
  return out;
}

std::vector<float> proprio_vector(const RobotState& robot) {
  Mat3 r = euler_to_rotation(robot.base_pose.orientation).transpose();
  Vec3 lin = r * robot.base_twist.linear;
  Vec3 ang = r * robot.base_twist.angular;
  double drift = normalize_angle(robot.base_pose.orientation.z() - robot.yaw_ref);
  std::vector<float> p;
  p.reserve(kProprioSize);
  auto put = [&](const Vec3& x) {
    for (int i = 0; i < 3; ++i) p.push_back(static_cast<float>(x[i]));
  };
  put(lin);
  put(ang);
  put(robot.ee_local.position);
  put(robot.ee_local.orientation);
  put(robot.ee_target.position);
  put(robot.ee_target.orientation);
  p.push_back(robot.gripper == Gripper::kClosed ? 1.0f : 0.0f);
  p.push_back(static_cast<float>(std::sin(drift)));
  p.push_back(static_cast<float>(std::cos(drift)));
  return p;
}

void write_mask_pgm(const std::filesystem::path& path, const Frame& f) {
  std::ofstream out;
  open_for_write(out, path);
  out << "P5\n" << f.width << " " << f.height << "\n255\n";
  for (uint8_t m : f.mask) out.put(m ? static_cast<char>(255) : 0);
  if (!out) throw FileError("write failed for '" + path.string() + "'");
}

void write_depth_pgm(const std::filesystem::path& path, const Frame& f) {
  std::ofstream out;
  open_for_write(out, path);
  out << "P5\n" << f.width << " " << f.height << "\n65535\n";
  for (size_t i = 0; i < f.pixels(); ++i) {
    double mm = f.valid[i] ? std::round(1000.0 * f.depth[i]) : 0.0;
    auto q = static_cast<uint16_t>(std::clamp(mm, 0.0, 65535.0));
    out.put(static_cast<char>(q >> 8));
    out.put(static_cast<char>(q & 0xff));
  }
  if (!out) throw FileError("write failed for '" + path.string() + "'");
}

}  // namespace dqbench
