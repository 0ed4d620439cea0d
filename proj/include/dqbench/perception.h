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

// Pinhole cameras, raycast mask/depth rendering, observation latency and
// frame history.

#ifndef DQBENCH_PERCEPTION_H_
#define DQBENCH_PERCEPTION_H_

#include <cstdint>
#include <deque>
#include <filesystem>
#include <vector>

#include "dqbench/nn/tensor.h"
#include "dqbench/robot.h"
#include "dqbench/scene.h"
#include "dqbench/se3.h"

namespace dqbench {

inline constexpr int kImageWidth = 96;
inline constexpr int kImageHeight = 54;
inline constexpr double kDefaultHfovDeg = 87.0;
inline constexpr double kBaseCameraPitchDeg = 15.0;
inline constexpr double kNearClip = 0.01;
inline constexpr double kFarClip = 20.0;
inline constexpr double kDepthClip = 5.0;
inline constexpr int kLatencyFrames = 4;
inline constexpr int kHistoryFrames = 3;
inline constexpr int kObservationChannels = 12;
inline constexpr int kProprioSize = 21;

enum class CameraMount { kBase, kWrist };

// The optical axis is +x of the camera frame; image u grows along -y and
// v along -z. Pixel (u, v) has its centre at (u + 0.5, v + 0.5).
struct CameraModel {
  int width = kImageWidth;
  int height = kImageHeight;
  double hfov = 0.0;
  CameraMount mount = CameraMount::kBase;
  Pose6 mount_offset;  // camera in the base or end-effector frame

  double focal() const;
  double vfov() const;
  double cx() const { return 0.5 * width; }
  double cy() const { return 0.5 * height; }

  // Throws InvalidArgument when hfov is outside (0, pi) or the size is not
  // positive.
  void validate() const;

  bool operator==(const CameraModel&) const = default;
};

CameraModel default_base_camera();
CameraModel default_wrist_camera();

// World pose of the camera for the given robot state.
Transform camera_pose(const RobotState& robot, const CameraModel& cam);

// Depth is z-depth along the optical axis. Pixels without a hit store 0
// with valid = 0.
struct Frame {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> mask;
  std::vector<uint8_t> valid;
  std::vector<float> depth;

  static Frame blank(int width, int height);

  int index(int u, int v) const { return v * width + u; }
  size_t pixels() const { return mask.size(); }

  bool operator==(const Frame&) const = default;
};

struct RenderOptions {
  // Probability of flipping a mask bit among pixels with a valid hit.
  double mask_flip_prob = 0.0;
  uint64_t noise_seed = 0;
};

Frame render_view(const SceneState& scene, const Transform& camera_world,
                  const CameraModel& cam, const RenderOptions& opts = {});

Frame render_frame(const SceneState& scene, const RobotState& robot,
                   const CameraModel& cam, const RenderOptions& opts = {});

// Fixed delay line. push_and_fetch returns the item pushed `delay` calls
// earlier, or the first item ever pushed while fewer are available.
template <typename T>
class DelayBuffer {
 public:
  explicit DelayBuffer(int delay = kLatencyFrames) : delay_(delay) {}

  T push_and_fetch(T item) {
    queue_.push_back(std::move(item));
    if (static_cast<int>(queue_.size()) > delay_ + 1) queue_.pop_front();
    return queue_.front();
  }

  int delay() const { return delay_; }
  size_t size() const { return queue_.size(); }

 private:
  int delay_;
  std::deque<T> queue_;
};

using LatencyBuffer = DelayBuffer<Frame>;

// Last kHistoryFrames frames of one view. Missing older slots repeat the
// oldest frame held.
class ObsHistory {
 public:
  void push(Frame f);
  bool warmed() const { return !frames_.empty(); }
  size_t held() const { return frames_.size(); }

  // slot 0 is t-2, slot 2 is t. Throws NotReady before the first push.
  const Frame& slot(int k) const;

  std::vector<float> proprio;

 private:
  std::deque<Frame> frames_;
};

// [wrist mask t-2..t, wrist depth x3, base mask x3, base depth x3].
// Masks are {0, 1}; depths are clipped to [0, 5] m and divided by 5.
// Throws NotReady for an empty history and ShapeError for frames that are
// not 54x96.
nn::Tensor stack_observation(const ObsHistory& wrist, const ObsHistory& base);

// Base twist (body frame, 6), tracked ee pose (6), ee target (6), gripper
// (1), sin/cos of the yaw drift from the reference heading (2).
std::vector<float> proprio_vector(const RobotState& robot);

// Binary PGM: mask as 8-bit 0/255, depth as 16-bit millimetres. Throws
// FileError.
void write_mask_pgm(const std::filesystem::path& path, const Frame& f);
void write_depth_pgm(const std::filesystem::path& path, const Frame& f);

}  // namespace dqbench

#endif  // DQBENCH_PERCEPTION_H_
