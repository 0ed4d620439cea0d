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

// Sensor-only student policy: a shared per-frame CNN, one transformer
// encoder per camera stream with a prepended proprioception token, and a
// dense regression head producing the 8-d high-level action.

#ifndef DQBENCH_NN_STUDENT_H_
#define DQBENCH_NN_STUDENT_H_

#include <array>
#include <span>

#include "dqbench/nn/ops.h"
#include "dqbench/nn/tensor.h"
#include "dqbench/nn/weight_store.h"

namespace dqbench::nn {

inline constexpr int kFrameChannels = 12;
inline constexpr int kFrameHeight = 54;
inline constexpr int kFrameWidth = 96;
inline constexpr int kHistoryLength = 3;
inline constexpr int kProprioDim = 21;
inline constexpr int kActionDim = 8;
inline constexpr int kTokenDim = 64;
inline constexpr int kEncoderLayers = 2;
inline constexpr int kEncoderHeads = 2;

// Hidden widths.
inline constexpr int kConv1Channels = 32;
inline constexpr int kConv2Channels = 64;
inline constexpr int kCnnHidden = 208;
inline constexpr int kFeedForward = 2048;
inline constexpr int kHead1 = 128;
inline constexpr int kHead2 = 64;

inline constexpr const char* kStudentArchitecture = "student-v1";

Manifest student_manifest();

class StudentNetwork {
 public:
  // Throws ArchitectureError when `weights` does not match the manifest.
  explicit StudentNetwork(const WeightStore& weights);

  // frames: [12, 54, 96] in the stacked-observation channel order;
  // proprio: kProprioDim values. Throws ShapeError on other sizes.
  ActionVec forward(const Tensor& frames, std::span<const float> proprio) const;

  // One mask+depth frame [2, 54, 96] to a [1, 64] token.
  Tensor encode_frame(const Tensor& frame) const;

 private:
  struct Dense {
    Tensor w, b;
  };
  struct Stream {
    Dense state_proj;
    std::array<EncoderLayerWeights, kEncoderLayers> layers;
    Dense out_proj;
  };

  // Conv stages of one frame, flattened into row `row` of `flat`.
  void conv_features(const Tensor& frame, Tensor& flat, int row) const;
  // All 2 * kHistoryLength frame tokens [6, 64]: wrist t-2..t, base t-2..t.
  Tensor frame_tokens(const Tensor& frames) const;
  Tensor encode_stream(const Stream& s, const Tensor& frame_tokens,
                       int first_token, const Tensor& state_token) const;

  Dense conv1_, conv2_, fc1_, fc2_;
  Stream wrist_, base_;
  Dense head1_, head2_, head3_;
  Tensor pos_enc_;
};

// Convenience wrapper that builds the network for a single call.
ActionVec student_forward(const Tensor& frames, std::span<const float> proprio,
                          const WeightStore& weights);

}  // namespace dqbench::nn

#endif  // DQBENCH_NN_STUDENT_H_
