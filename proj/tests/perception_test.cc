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

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "dqbench/catalog.h"
#include "dqbench/errors.h"

namespace dqbench {
namespace {

constexpr double kPi = std::numbers::pi;

ObjectSpec sphere(double r) {
  return {"s", Shape::kSphere, {r}, 0.1, Split::kSeen, Category::kBall};
}

// Scene holding only the object: no platform, no terrain.
SceneState object_only(const ObjectSpec& spec, const Pose6& pose) {
  SceneState s;
  s.object = spec;
  s.object_pose = pose;
  return s;
}

Transform random_camera(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> p(-3, 3), a(-kPi, kPi), b(-1.2, 1.2);
  return euler_to_transform({{p(rng), p(rng), p(rng)}, {a(rng), b(rng), a(rng)}});
}

struct Centroid {
  double u = 0, v = 0;
  int count = 0;
};

Centroid mask_centroid(const Frame& f) {
  Centroid c;
  for (int v = 0; v < f.height; ++v) {
    for (int u = 0; u < f.width; ++u) {
      if (f.mask[f.index(u, v)]) {
        c.u += u + 0.5;
        c.v += v + 0.5;
        ++c.count;
      }
    }
  }
  if (c.count) {
    c.u /= c.count;
    c.v /= c.count;
  }
  return c;
}

TEST(Camera, Intrinsics) {
  CameraModel c = default_base_camera();
  EXPECT_EQ(c.width, 96);
  EXPECT_EQ(c.height, 54);
  EXPECT_NEAR(c.hfov, 87.0 * kPi / 180.0, 1e-15);
  EXPECT_NEAR(c.focal(), 48.0 / std::tan(c.hfov / 2), 1e-12);
  EXPECT_NEAR(std::tan(c.vfov() / 2) * c.focal(), 27.0, 1e-12);
  CameraModel bad = c;
  bad.hfov = kPi;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad.hfov = 0;
  EXPECT_THROW(bad.validate(), InvalidArgument);
}

TEST(Render, BoxOnAxisDepth) {
  CameraModel cam = default_base_camera();
  ObjectSpec b{"b", Shape::kBox, {0.1, 0.2, 0.2}, 0.1, Split::kSeen,
               Category::kSquareBox};
  Frame f = render_view(object_only(b, {{1, 0, 0}, {0, 0, 0}}),
                        Transform::Identity(), cam);
  Centroid c = mask_centroid(f);
  EXPECT_NEAR(c.u, cam.cx(), 1.0);
  EXPECT_NEAR(c.v, cam.cy(), 1.0);
  for (int u : {47, 48}) {
    for (int v : {26, 27}) {
      int i = f.index(u, v);
      ASSERT_TRUE(f.mask[i]);
      EXPECT_NEAR(f.depth[i], 1.0 - 0.05, 1e-6);
    }
  }
}

TEST(Render, BehindCameraEmpty) {
  Frame f = render_view(object_only(sphere(0.1), {{-1, 0, 0}, {0, 0, 0}}),
                        Transform::Identity(), default_base_camera());
  EXPECT_EQ(mask_centroid(f).count, 0);
  for (uint8_t v : f.valid) EXPECT_EQ(v, 0);
}

TEST(Render, PlatformOccludes) {
  SceneState s = object_only(sphere(0.05), {{2, 0, 0}, {0, 0, 0}});
  s.platform_half_extents = Vec3(0.2, 0.6, 0.4);
  s.platform_pose = Pose6::FromPosition({1.0, 0.0, 0.4});  // box centred at z = 0
  Frame f = render_view(s, Transform::Identity(), default_base_camera());
  EXPECT_EQ(mask_centroid(f).count, 0);
  int i = f.index(48, 27);
  ASSERT_TRUE(f.valid[i]);
  EXPECT_NEAR(f.depth[i], 0.8, 1e-6);
  // Move the platform aside and the object shows up.
  s.platform_pose.position.y() = 3.0;
  EXPECT_GT(mask_centroid(render_view(s, Transform::Identity(),
                                      default_base_camera()))
                .count,
            0);
}

TEST(Render, FlatGroundLookingDown) {
  SceneState s;
  s.terrain = std::make_shared<const TerrainField>(flat_terrain(20, 0.5, 0.05));
  Transform cam;
  cam.rotation = (Eigen::AngleAxisd(0.4, Vec3::UnitZ()) *
                  Eigen::AngleAxisd(kPi / 2, Vec3::UnitY()))
                     .toRotationMatrix();
  cam.translation = Vec3(0.3, -0.2, 1.05);
  Frame f = render_view(s, cam, default_base_camera());
  for (size_t i = 0; i < f.pixels(); ++i) {
    ASSERT_TRUE(f.valid[i]);
    EXPECT_NEAR(f.depth[i], 1.0, 1e-6);
    EXPECT_EQ(f.mask[i], 0);
  }
}

TEST(Render, TiltedGroundOracle) {
  SceneState s;
  s.terrain = std::make_shared<const TerrainField>(flat_terrain(100, 0.5, 0.0));
  CameraModel cm = default_base_camera();
  Transform cam = euler_to_transform({{0, 0, 0.8}, {0, 0.5, 0}});
  Frame f = render_view(s, cam, cm);
  for (int v = 0; v < cm.height; ++v) {
    for (int u = 0; u < cm.width; ++u) {
      Vec3 d = cam.rotation * Vec3(1.0, -(u + 0.5 - cm.cx()) / cm.focal(),
                                   -(v + 0.5 - cm.cy()) / cm.focal());
      int i = f.index(u, v);
      double t = d.z() < 0 ? 0.8 / -d.z() : 1e9;
      if (t < kFarClip - 1e-6) {
        ASSERT_TRUE(f.valid[i]) << u << "," << v;
        EXPECT_NEAR(f.depth[i], t, 1e-5 * t);
      } else {
        EXPECT_FALSE(f.valid[i]);
      }
    }
  }
}

TEST(Render, RoughGroundHitsSurface) {
  SceneState s;
  s.terrain =
      std::make_shared<const TerrainField>(sample_terrain(5, kTerrainExtent, 0.5));
  CameraModel cm = default_base_camera();
  Transform cam = euler_to_transform({{0.4, 0.1, 0.65}, {0, 0.26, 0.3}});
  Frame f = render_view(s, cam, cm);
  int hits = 0;
  for (int v = 0; v < cm.height; ++v) {
    for (int u = 0; u < cm.width; ++u) {
      int i = f.index(u, v);
      if (!f.valid[i]) continue;
      ++hits;
      Vec3 p = cam.Apply(f.depth[i] * Vec3(1.0, -(u + 0.5 - cm.cx()) / cm.focal(),
                                           -(v + 0.5 - cm.cy()) / cm.focal()));
      EXPECT_NEAR(p.z(), s.terrain->height(p.x(), p.y()), 1e-5);
    }
  }
  EXPECT_GT(hits, cm.width * cm.height / 2);
}

TEST(Render, ProjectionOracleRandomPlacements) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0, 1), ang(-kPi, kPi);
  CameraModel cm = default_base_camera();
  const auto& catalog = default_catalog();
  int placed = 0;
  while (placed < 100) {
    Transform cam = random_camera(rng);
    const ObjectSpec& spec = catalog[rng() % catalog.size()];
    double x = 0.6 + 2.0 * unit(rng);
    double pu = 10 + (cm.width - 20) * unit(rng);
    double pv = 10 + (cm.height - 20) * unit(rng);
    Vec3 local(x, -(pu - cm.cx()) / cm.focal() * x, -(pv - cm.cy()) / cm.focal() * x);
    double radius_px = cm.focal() * bounding_radius(spec) / (x - bounding_radius(spec));
    double small_px = cm.focal() * half_extents(spec).minCoeff() / x;
    if (small_px < 2.0 || pu - radius_px < 1 || pu + radius_px > cm.width - 1 ||
        pv - radius_px < 1 || pv + radius_px > cm.height - 1) {
      continue;
    }
    Pose6 pose{cam.Apply(local), {ang(rng), 0.6 * ang(rng) / 2, ang(rng)}};
    Frame f = render_view(object_only(spec, pose), cam, cm);
    Centroid c = mask_centroid(f);
    ASSERT_GT(c.count, 0) << spec.id;
    EXPECT_NEAR(c.u, pu, 2.0) << spec.id;
    EXPECT_NEAR(c.v, pv, 2.0) << spec.id;
    ++placed;
  }
}

TEST(Render, CenterPixelDepthOracle) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> unit(0, 1);
  CameraModel cm = default_base_camera();
  for (int trial = 0; trial < 100; ++trial) {
    Transform cam = random_camera(rng);
    int u = 5 + static_cast<int>(rng() % (cm.width - 10));
    int v = 5 + static_cast<int>(rng() % (cm.height - 10));
    double x = 0.5 + 2.5 * unit(rng);
    double r = 0.02 + 0.08 * unit(rng);
    Vec3 ray(1.0, -(u + 0.5 - cm.cx()) / cm.focal(), -(v + 0.5 - cm.cy()) / cm.focal());
    Vec3 centre = x * ray;
    Frame f = render_view(object_only(sphere(r), {cam.Apply(centre), {0, 0, 0}}),
                          cam, cm);
    int i = f.index(u, v);
    ASSERT_TRUE(f.mask[i]);
    // Front surface along the ray through the centre, as z-depth.
    double expect = (centre.norm() - r) * x / centre.norm();
    EXPECT_NEAR(f.depth[i], expect, 1e-3);
  }
}

SceneState reset_scene(uint64_t seed, int level = 1) {
  EpisodeConfig cfg;
  cfg.level = level;
  cfg.object_id = "mustard_bottle";
  cfg.seed = seed;
  return reset_episode(cfg, default_catalog());
}

TEST(Render, BaseCameraSeesObjectAtReset) {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    SceneState s = reset_scene(seed);
    RobotState robot = make_robot(*s.terrain, 0, 0, 0);
    Frame f = render_frame(s, robot, default_base_camera());
    EXPECT_GT(mask_centroid(f).count, 0) << seed;
    for (size_t i = 0; i < f.pixels(); ++i) {
      if (f.mask[i]) {
        ASSERT_TRUE(f.valid[i]);
        ASSERT_GT(f.depth[i], 0.0f);
      }
    }
    EXPECT_EQ(f, render_frame(s, robot, default_base_camera()));
  }
}

TEST(Render, WristCameraFollowsEe) {
  SceneState s = reset_scene(3);
  RobotState robot = make_robot(*s.terrain, 0, 0, 0);
  // Put the ee 0.3 m behind the object, looking at it.
  robot.ee_pose = {s.object_pose.position - Vec3(0.3, 0, 0), {0, 0, 0}};
  Frame f = render_frame(s, robot, default_wrist_camera());
  Centroid c = mask_centroid(f);
  ASSERT_GT(c.count, 0);
  EXPECT_NEAR(c.u, 48, 4);
}

TEST(Render, MaskNoise) {
  SceneState s = reset_scene(4);
  RobotState robot = make_robot(*s.terrain, 0, 0, 0);
  CameraModel cm = default_base_camera();
  Frame clean = render_frame(s, robot, cm);
  EXPECT_EQ(render_frame(s, robot, cm, {0.0, 9}), clean);
  Frame all = render_frame(s, robot, cm, {1.0, 9});
  for (size_t i = 0; i < clean.pixels(); ++i) {
    EXPECT_EQ(all.mask[i], clean.valid[i] ? 1 - clean.mask[i] : 0);
  }
  Frame some = render_frame(s, robot, cm, {0.1, 9});
  EXPECT_EQ(some, render_frame(s, robot, cm, {0.1, 9}));
  int flipped = 0, valid = 0;
  for (size_t i = 0; i < clean.pixels(); ++i) {
    valid += clean.valid[i];
    flipped += some.mask[i] != clean.mask[i];
    if (some.mask[i]) EXPECT_TRUE(some.valid[i]);
  }
  EXPECT_NEAR(static_cast<double>(flipped) / valid, 0.1, 0.03);
  EXPECT_THROW(render_frame(s, robot, cm, {1.5, 0}), InvalidArgument);
}

TEST(Render, Throughput) {
  SceneState s = reset_scene(6, 4);
  RobotState robot = make_robot(*s.terrain, 0, 0, 0);
  CameraModel cm = default_base_camera();
  const int n = 2000;
  size_t sink = 0;
  auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < n; ++i) {
    robot.base_pose.orientation.z() = 0.0002 * i;
    sink += render_frame(s, robot, cm).mask[0];
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_GE(n / secs, 2000.0) << "frames/s " << n / secs << " " << sink;
}

// ---------------------------------------------------------------- buffers

Frame sentinel(float value) {
  Frame f = Frame::blank(kImageWidth, kImageHeight);
  f.depth[0] = value;
  return f;
}

TEST(Latency, SentinelDelayedByFour) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    int k = 1 + static_cast<int>(rng() % 60);
    LatencyBuffer buf;
    int seen = -1;
    for (int step = 0; step < k + 10; ++step) {
      Frame out = buf.push_and_fetch(sentinel(step == k ? 1.0f : 0.0f));
      if (out.depth[0] == 1.0f && seen < 0) seen = step;
    }
    EXPECT_EQ(seen, k + 4);
  }
}

TEST(Latency, WarmupAndSteadyState) {
  DelayBuffer<int> buf;
  EXPECT_EQ(buf.push_and_fetch(7), 7);
  EXPECT_EQ(buf.push_and_fetch(8), 7);
  EXPECT_EQ(buf.push_and_fetch(9), 7);
  EXPECT_EQ(buf.push_and_fetch(10), 7);
  EXPECT_EQ(buf.push_and_fetch(11), 7);
  EXPECT_EQ(buf.push_and_fetch(12), 8);
  EXPECT_EQ(buf.size(), 5u);
  DelayBuffer<int> constant;
  for (int i = 0; i < 20; ++i) EXPECT_EQ(constant.push_and_fetch(3), 3);
}

TEST(History, PadsWithOldest) {
  ObsHistory h;
  EXPECT_FALSE(h.warmed());
  EXPECT_THROW(h.slot(0), NotReady);
  h.push(sentinel(1));
  for (int k = 0; k < 3; ++k) EXPECT_EQ(h.slot(k).depth[0], 1.0f);
  h.push(sentinel(2));
  EXPECT_EQ(h.slot(0).depth[0], 1.0f);
  EXPECT_EQ(h.slot(1).depth[0], 1.0f);
  EXPECT_EQ(h.slot(2).depth[0], 2.0f);
  h.push(sentinel(3));
  h.push(sentinel(4));
  EXPECT_EQ(h.held(), 3u);
  EXPECT_EQ(h.slot(0).depth[0], 2.0f);
  EXPECT_EQ(h.slot(2).depth[0], 4.0f);
}

TEST(Stack, ShapeOrderAndScaling) {
  ObsHistory wrist, base;
  EXPECT_THROW(stack_observation(wrist, base), NotReady);
  for (int k = 0; k < 3; ++k) {
    Frame w = Frame::blank(kImageWidth, kImageHeight);
    w.mask[5] = 1;
    w.valid[5] = 1;
    w.depth[5] = 2.5f;
    w.valid[6] = 1;
    w.depth[6] = 7.0f;
    w.depth[7] = 3.0f;  // invalid pixel
    wrist.push(w);
    Frame b = Frame::blank(kImageWidth, kImageHeight);
    b.valid[9] = 1;
    b.depth[9] = 5.0f;
    b.depth[10] = static_cast<float>(k);
    b.valid[10] = 1;
    base.push(b);
  }
  nn::Tensor t = stack_observation(wrist, base);
  ASSERT_EQ(t.shape(), (nn::Shape{12, 54, 96}));
  const int plane = 54 * 96;
  for (int k = 0; k < 3; ++k) {
    EXPECT_EQ(t[k * plane + 5], 1.0f);
    EXPECT_EQ(t[(3 + k) * plane + 5], 0.5f);
    EXPECT_EQ(t[(3 + k) * plane + 6], 1.0f);
    EXPECT_EQ(t[(3 + k) * plane + 7], 0.0f);
    EXPECT_EQ(t[(9 + k) * plane + 9], 1.0f);
    EXPECT_EQ(t[(9 + k) * plane + 10], k / 5.0f);
  }
  // Base masks are empty.
  for (int c = 6; c < 9; ++c) {
    for (int i = 0; i < plane; ++i) ASSERT_EQ(t[c * plane + i], 0.0f);
  }
}

TEST(Stack, EmptyMasksGiveZeroChannels) {
  SceneState s;
  ObsHistory wrist, base;
  wrist.push(render_view(s, Transform::Identity(), default_wrist_camera()));
  base.push(render_view(s, Transform::Identity(), default_base_camera()));
  nn::Tensor t = stack_observation(wrist, base);
  const int plane = 54 * 96;
  for (int c : {0, 1, 2, 6, 7, 8}) {
    for (int i = 0; i < plane; ++i) ASSERT_EQ(t[c * plane + i], 0.0f);
  }
}

TEST(Stack, RejectsWrongSize) {
  ObsHistory wrist, base;
  wrist.push(Frame::blank(32, 32));
  base.push(Frame::blank(kImageWidth, kImageHeight));
  EXPECT_THROW(stack_observation(wrist, base), ShapeError);
}

TEST(Proprio, Layout) {
  TerrainField flat = flat_terrain(10, 0.5);
  RobotState r = make_robot(flat, 0, 0, 0.3);
  r.gripper = Gripper::kClosed;
  r.base_twist.linear = Vec3(0.5 * std::cos(0.3), 0.5 * std::sin(0.3), 0);
  std::vector<float> p = proprio_vector(r);
  ASSERT_EQ(p.size(), 21u);
  EXPECT_NEAR(p[0], 0.5, 1e-6);
  EXPECT_NEAR(p[1], 0.0, 1e-6);
  EXPECT_EQ(p[18], 1.0f);
  EXPECT_NEAR(p[19], 0.0, 1e-6);
  EXPECT_NEAR(p[20], 1.0, 1e-6);
}

TEST(Pgm, WritesHeaders) {
  auto dir = std::filesystem::temp_directory_path();
  Frame f = Frame::blank(4, 2);
  f.mask[1] = 1;
  f.valid[1] = 1;
  f.depth[1] = 1.2345f;
  write_mask_pgm(dir / "dq_mask.pgm", f);
  write_depth_pgm(dir / "dq_depth.pgm", f);
  std::ifstream m(dir / "dq_mask.pgm", std::ios::binary);
  std::string body((std::istreambuf_iterator<char>(m)), {});
  EXPECT_EQ(body.substr(0, 11), "P5\n4 2\n255\n");
  EXPECT_EQ(static_cast<uint8_t>(body[12]), 255);
  std::ifstream d(dir / "dq_depth.pgm", std::ios::binary);
  std::string dbody((std::istreambuf_iterator<char>(d)), {});
  std::string head = "P5\n4 2\n65535\n";
  ASSERT_EQ(dbody.size(), head.size() + 16);
  int mm = (static_cast<uint8_t>(dbody[head.size() + 2]) << 8) |
           static_cast<uint8_t>(dbody[head.size() + 3]);
  EXPECT_EQ(mm, 1235);
  EXPECT_THROW(write_mask_pgm("/nonexistent/dir/x.pgm", f), FileError);
}

}  // namespace
}  // namespace dqbench
