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

#include "dqbench/nn/student.h"

#include <string>

#include "dqbench/errors.h"

namespace dqbench::nn {

namespace {

constexpr int kPooledH = kFrameHeight / 2 / 2;  // 13
constexpr int kPooledW = kFrameWidth / 2 / 2;   // 24
constexpr int kFlat = kConv2Channels * kPooledH * kPooledW;

void add_dense(Manifest& m, const std::string& name, int in, int out) {
  m.params.push_back({name + ".weight", {in, out}, Init::kUniformFanIn, in});
  m.params.push_back({name + ".bias", {out}, Init::kUniformFanIn, in});
}

void add_conv(Manifest& m, const std::string& name, int in, int out, int k) {
  int fan_in = in * k * k;
  m.params.push_back({name + ".weight", {out, in, k, k}, Init::kUniformFanIn,
                      fan_in});
  m.params.push_back({name + ".bias", {out}, Init::kUniformFanIn, fan_in});
}

void add_norm(Manifest& m, const std::string& name, int d) {
  m.params.push_back({name + ".gamma", {d}, Init::kOnes, 1});
  m.params.push_back({name + ".beta", {d}, Init::kZeros, 1});
}

std::string layer_prefix(const std::string& stream, int i) {
  return stream + ".layer" + std::to_string(i);
}

}  // namespace

Manifest student_manifest() {
  Manifest m;
  m.architecture = kStudentArchitecture;
  add_conv(m, "cnn.conv1", 2, kConv1Channels, 5);
  add_conv(m, "cnn.conv2", kConv1Channels, kConv2Channels, 3);
  add_dense(m, "cnn.fc1", kFlat, kCnnHidden);
  add_dense(m, "cnn.fc2", kCnnHidden, kTokenDim);
  for (const std::string stream : {"wrist", "base"}) {
    add_dense(m, stream + ".state_proj", kProprioDim, kTokenDim);
    for (int i = 0; i < kEncoderLayers; ++i) {
      const std::string p = layer_prefix(stream, i);
      add_dense(m, p + ".wq", kTokenDim, kTokenDim);
      add_dense(m, p + ".wk", kTokenDim, kTokenDim);
      add_dense(m, p + ".wv", kTokenDim, kTokenDim);
      add_dense(m, p + ".wo", kTokenDim, kTokenDim);
      add_norm(m, p + ".ln1", kTokenDim);
      add_dense(m, p + ".ff1", kTokenDim, kFeedForward);
      add_dense(m, p + ".ff2", kFeedForward, kTokenDim);
      add_norm(m, p + ".ln2", kTokenDim);
    }
    add_dense(m, stream + ".out_proj", kTokenDim, kTokenDim);
  }
  add_dense(m, "head.fc1", 2 * kTokenDim, kHead1);
  add_dense(m, "head.fc2", kHead1, kHead2);
  add_dense(m, "head.fc3", kHead2, kActionDim);
  return m;
}

StudentNetwork::StudentNetwork(const WeightStore& weights) {
  const Manifest manifest = student_manifest();
  weights.validate(manifest);
  auto dense = [&](const std::string& n) {
    return Dense{weights.get(n + ".weight"), weights.get(n + ".bias")};
  };
  conv1_ = dense("cnn.conv1");
  conv2_ = dense("cnn.conv2");
  fc1_ = dense("cnn.fc1");
  fc2_ = dense("cnn.fc2");
  for (auto [stream, name] : {std::pair{&wrist_, "wrist"}, {&base_, "base"}}) {
    const std::string s = name;
    stream->state_proj = dense(s + ".state_proj");
    for (int i = 0; i < kEncoderLayers; ++i) {
      const std::string p = layer_prefix(s, i);
      EncoderLayerWeights& l = stream->layers[i];
      l.wq = weights.get(p + ".wq.weight");
      l.bq = weights.get(p + ".wq.bias");
      l.wk = weights.get(p + ".wk.weight");
      l.bk = weights.get(p + ".wk.bias");
      l.wv = weights.get(p + ".wv.weight");
      l.bv = weights.get(p + ".wv.bias");
      l.wo = weights.get(p + ".wo.weight");
      l.bo = weights.get(p + ".wo.bias");
      l.ln1_gamma = weights.get(p + ".ln1.gamma");
      l.ln1_beta = weights.get(p + ".ln1.beta");
      l.ff1_w = weights.get(p + ".ff1.weight");
      l.ff1_b = weights.get(p + ".ff1.bias");
      l.ff2_w = weights.get(p + ".ff2.weight");
      l.ff2_b = weights.get(p + ".ff2.bias");
      l.ln2_gamma = weights.get(p + ".ln2.gamma");
      l.ln2_beta = weights.get(p + ".ln2.beta");
    }
    stream->out_proj = dense(s + ".out_proj");
  }
  head1_ = dense("head.fc1");
  head2_ = dense("head.fc2");
  head3_ = dense("head.fc3");
  pos_enc_ = positional_encoding(1 + kHistoryLength, kTokenDim);
}

void StudentNetwork::conv_features(const Tensor& frame, Tensor& flat,
                                   int row) const {
  Tensor h = max_pool2d(elu(conv2d(frame, conv1_.w, conv1_.b, 1, 2)), 2);
  h = max_pool2d(elu(conv2d(h, conv2_.w, conv2_.b, 1, 1)), 2);
  std::copy(h.data().begin(), h.data().end(),
            flat.ptr() + static_cast<size_t>(row) * kFlat);
}

Tensor StudentNetwork::encode_frame(const Tensor& frame) const {
  if (frame.shape() != Shape{2, kFrameHeight, kFrameWidth}) {
    throw ShapeError("encode_frame: expected [2,54,96], got " +
                     shape_string(frame.shape()));
  }
  Tensor flat({1, kFlat});
  conv_features(frame, flat, 0);
  return linear(elu(linear(flat, fc1_.w, fc1_.b)), fc2_.w, fc2_.b);
}

Tensor StudentNetwork::frame_tokens(const Tensor& frames) const {
  const size_t plane = static_cast<size_t>(kFrameHeight) * kFrameWidth;
  const int mask_channels[2] = {0, 6};
  Tensor flat({2 * kHistoryLength, kFlat});
  Tensor frame({2, kFrameHeight, kFrameWidth});
  for (int view = 0; view < 2; ++view) {
    for (int t = 0; t < kHistoryLength; ++t) {
      const float* mask = frames.ptr() + (mask_channels[view] + t) * plane;
      std::copy_n(mask, plane, frame.ptr());
      std::copy_n(mask + kHistoryLength * plane, plane, frame.ptr() + plane);
      conv_features(frame, flat, view * kHistoryLength + t);
    }
  }
  // One pass over the large fc1 weight matrix for every frame.
  return linear(elu(linear(flat, fc1_.w, fc1_.b)), fc2_.w, fc2_.b);
}

Tensor StudentNetwork::encode_stream(const Stream& s, const Tensor& frame_tokens,
                                     int first_token,
                                     const Tensor& proprio) const {
  Tensor tokens({1 + kHistoryLength, kTokenDim});
  Tensor state = linear(proprio, s.state_proj.w, s.state_proj.b);
  std::copy(state.data().begin(), state.data().end(), tokens.ptr());
  std::copy_n(frame_tokens.ptr() + first_token * kTokenDim,
              kHistoryLength * kTokenDim, tokens.ptr() + kTokenDim);
  for (size_t i = 0; i < tokens.size(); ++i) tokens[i] += pos_enc_[i];
  for (const auto& layer : s.layers) {
    tokens = transformer_encoder_layer(tokens, layer, kEncoderHeads);
  }
  Tensor pooled({1, kTokenDim});
  for (int t = 1; t <= kHistoryLength; ++t) {
    for (int j = 0; j < kTokenDim; ++j) pooled[j] += tokens.at(t, j);
  }
  for (float& v : pooled.data()) v /= kHistoryLength;
  return linear(pooled, s.out_proj.w, s.out_proj.b);
}

ActionVec StudentNetwork::forward(const Tensor& frames,
                                  std::span<const float> proprio) const {
  if (frames.shape() != Shape{kFrameChannels, kFrameHeight, kFrameWidth}) {
    throw ShapeError("student_forward: expected frames [12,54,96], got " +
                     shape_string(frames.shape()));
  }
  if (proprio.size() != static_cast<size_t>(kProprioDim)) {
    throw ShapeError("student_forward: expected " +
                     std::to_string(kProprioDim) + " proprio values, got " +
                     std::to_string(proprio.size()));
  }
  Tensor state({1, kProprioDim},
               std::vector<float>(proprio.begin(), proprio.end()));
  Tensor tokens = frame_tokens(frames);
  Tensor wrist = encode_stream(wrist_, tokens, 0, state);
  Tensor base = encode_stream(base_, tokens, kHistoryLength, state);
  Tensor joined({1, 2 * kTokenDim});
  std::copy(wrist.data().begin(), wrist.data().end(), joined.ptr());
  std::copy(base.data().begin(), base.data().end(), joined.ptr() + kTokenDim);
  Tensor h = elu(linear(joined, head1_.w, head1_.b));
  h = elu(linear(h, head2_.w, head2_.b));
  Tensor out = linear(h, head3_.w, head3_.b);
  ActionVec a;
  for (int i = 0; i < kActionDim; ++i) a[i] = out[i];
  return a;
}

ActionVec student_forward(const Tensor& frames, std::span<const float> proprio,
                          const WeightStore& weights) {
  return StudentNetwork(weights).forward(frames, proprio);
}

}  // namespace dqbench::nn
