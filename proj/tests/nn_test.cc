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

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <cstring>
#include <random>

#include <gtest/gtest.h>

#include "dqbench/errors.h"
#include "dqbench/nn/ops.h"
#include "dqbench/nn/student.h"
#include "dqbench/nn/tensor.h"
#include "dqbench/nn/weight_store.h"
#include "reference/nn_reference.h"

namespace dqbench::nn {
namespace {

using reference::max_abs_diff;
using reference::random_tensor;

Tensor identity(int n) {
  Tensor t({n, n});
  for (int i = 0; i < n; ++i) t.at(i, i) = 1.0f;
  return t;
}

TEST(Tensor, ShapeChecks) {
  EXPECT_THROW(Tensor({2, 3}, std::vector<float>(5)), ShapeError);
  EXPECT_THROW(Tensor({0, 3}), ShapeError);
  EXPECT_THROW(Tensor({2, 3}).reshaped({4, 2}), ShapeError);
  EXPECT_EQ(Tensor({2, 3}).reshaped({3, 2}).shape(), (Shape{3, 2}));
}

TEST(Linear, Examples) {
  Tensor x({1, 2}, {1, 2});
  Tensor b({2}, {3, 4});
  EXPECT_EQ(linear(x, identity(2), b), Tensor({1, 2}, {4, 6}));
  EXPECT_EQ(linear(x, identity(2), Tensor({2})), x);
}

TEST(Linear, ShapeMismatchNamesShapes) {
  try {
    linear(Tensor({1, 3}), Tensor({2, 4}), Tensor({4}));
    FAIL();
  } catch (const ShapeError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("[1,3]"), std::string::npos);
    EXPECT_NE(msg.find("[2,4]"), std::string::npos);
  }
}

TEST(Linear, MatchesOracle) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> n(1, 9);
  for (int c = 0; c < 200; ++c) {
    Tensor x = random_tensor(rng, {n(rng), n(rng), n(rng)});
    Tensor w = random_tensor(rng, {x.dim(2), n(rng)});
    Tensor b = random_tensor(rng, {w.dim(1)});
    ASSERT_LE(max_abs_diff(linear(x, w, b), reference::naive_linear(x, w, b)),
              1e-5);
  }
}

TEST(Activation, Examples) {
  Tensor x({3}, {0.0f, 1.0f, -1.0f});
  Tensor y = elu(x);
  EXPECT_EQ(y[0], 0.0f);
  EXPECT_EQ(y[1], 1.0f);
  EXPECT_NEAR(y[2], std::exp(-1.0) - 1.0, 1e-7);
  Tensor s = softmax(Tensor({4}, 2.5f), 0);
  for (float v : s.data()) EXPECT_FLOAT_EQ(v, 0.25f);
}

TEST(Softmax, RowsSumToOne) {
  std::mt19937_64 rng(2);
  for (int c = 0; c < 200; ++c) {
    Tensor x = random_tensor(rng, {3, 5, 7}, -20.0f, 20.0f);
    for (int axis = 0; axis < 3; ++axis) {
      Tensor s = softmax(x, axis);
      // Sum along the axis at a few fixed positions.
      double sum = 0.0;
      for (int k = 0; k < x.dim(axis); ++k) {
        int idx[3] = {1, 2, 3};
        idx[axis] = k;
        sum += s.at(idx[0], idx[1], idx[2]);
      }
      ASSERT_NEAR(sum, 1.0, 1e-6);
    }
  }
}

TEST(Ops, NonFiniteRejected) {
  Tensor x({1, 2}, {1.0f, NAN});
  EXPECT_THROW(linear(x, identity(2), Tensor({2})), InvalidArgument);
  EXPECT_THROW(softmax(x, 1), InvalidArgument);
  EXPECT_THROW(elu(x), InvalidArgument);
}

TEST(Conv2d, Examples) {
  std::mt19937_64 rng(3);
  Tensor x = random_tensor(rng, {1, 4, 5});
  Tensor id({1, 1, 1, 1}, {1.0f});
  EXPECT_EQ(conv2d(x, id, Tensor({1}), 1, 0), x);
  Tensor ones({1, 3, 3}, 1.0f);
  Tensor k({1, 1, 3, 3}, 1.0f);
  Tensor y = conv2d(ones, k, Tensor({1}), 1, 0);
  EXPECT_EQ(y.shape(), (Shape{1, 1, 1}));
  EXPECT_EQ(y[0], 9.0f);
  EXPECT_THROW(conv2d(ones, Tensor({1, 1, 5, 5}), Tensor({1}), 1, 0),
               ShapeError);
  EXPECT_THROW(conv2d(ones, Tensor({1, 2, 3, 3}), Tensor({1}), 1, 0),
               ShapeError);
}

TEST(Conv2d, OutputSizeFormula) {
  Tensor x({2, 11, 8});
  Tensor w({3, 2, 3, 3});
  Tensor y = conv2d(x, w, Tensor({3}), 2, 1);
  EXPECT_EQ(y.shape(), (Shape{3, (11 + 2 - 3) / 2 + 1, (8 + 2 - 3) / 2 + 1}));
}

TEST(Conv2d, MatchesOracle) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> n(1, 4);
  for (int c = 0; c < 200; ++c) {
    int k = 1 + 2 * (n(rng) % 3);
    Tensor x = random_tensor(rng, {n(rng), k + n(rng) + 2, k + n(rng)});
    Tensor w = random_tensor(rng, {n(rng), x.dim(0), k, k});
    Tensor b = random_tensor(rng, {w.dim(0)});
    int stride = n(rng) % 2 + 1, pad = n(rng) % 3;
    ASSERT_LE(max_abs_diff(conv2d(x, w, b, stride, pad),
                           reference::naive_conv2d(x, w, b, stride, pad)),
              1e-5);
  }
}

TEST(MaxPool, MatchesOracle) {
  std::mt19937_64 rng(5);
  Tensor x = random_tensor(rng, {3, 9, 7});
  EXPECT_EQ(max_pool2d(x, 2), reference::naive_max_pool2d(x, 2));
  EXPECT_EQ(max_pool2d(x, 2).shape(), (Shape{3, 4, 3}));
}

TEST(Attention, SingleKeyPassthrough) {
  std::mt19937_64 rng(6);
  Tensor q = random_tensor(rng, {1, 4});
  Tensor k = random_tensor(rng, {1, 4});
  Tensor v = random_tensor(rng, {1, 3});
  EXPECT_EQ(attention(q, k, v), v);
}

TEST(Attention, EqualKeysAverage) {
  std::mt19937_64 rng(7);
  Tensor q = random_tensor(rng, {1, 4});
  Tensor krow = random_tensor(rng, {1, 4});
  Tensor k({3, 4});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) k.at(i, j) = krow.at(0, j);
  Tensor v = random_tensor(rng, {3, 2});
  Tensor y = attention(q, k, v);
  for (int j = 0; j < 2; ++j) {
    EXPECT_NEAR(y.at(0, j), (v.at(0, j) + v.at(1, j) + v.at(2, j)) / 3.0, 1e-6);
  }
}

TEST(Attention, TwoKeyHandCase) {
  Tensor q({1, 1}, {1.0f});
  Tensor k({2, 1}, {static_cast<float>(std::log(2.0)), 0.0f});
  Tensor a = attention_weights(q, k);
  EXPECT_NEAR(a[0], 2.0 / 3.0, 1e-7);
  EXPECT_NEAR(a[1], 1.0 / 3.0, 1e-7);
}

TEST(Attention, MatchesOracleAndHull) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> n(1, 8);
  for (int c = 0; c < 200; ++c) {
    Tensor q = random_tensor(rng, {n(rng), n(rng)});
    Tensor k = random_tensor(rng, {n(rng), q.dim(1)});
    Tensor v = random_tensor(rng, {k.dim(0), 1});
    Tensor y = attention(q, k, v);
    ASSERT_LE(max_abs_diff(y, reference::naive_attention(q, k, v)), 1e-5);
    float lo = *std::min_element(v.data().begin(), v.data().end());
    float hi = *std::max_element(v.data().begin(), v.data().end());
    for (float val : y.data()) {
      ASSERT_GE(val, lo - 1e-6f);
      ASSERT_LE(val, hi + 1e-6f);
    }
  }
}

TEST(Encoder, ShapeAndOracle) {
  std::mt19937_64 rng(9);
  for (int c = 0; c < 200; ++c) {
    int t = 1 + c % 5;
    Tensor x = random_tensor(rng, {t, 8});
    EncoderLayerWeights w = reference::random_encoder_weights(rng, 8, 16);
    Tensor y = transformer_encoder_layer(x, w, 2);
    ASSERT_EQ(y.shape(), x.shape());
    ASSERT_LE(max_abs_diff(y, reference::naive_encoder_layer(x, w, 2)), 1e-5);
  }
}

TEST(Encoder, TokenOrderMatters) {
  std::mt19937_64 rng(10);
  Tensor x = random_tensor(rng, {4, 64});
  Tensor pe = positional_encoding(4, 64);
  EncoderLayerWeights w = reference::random_encoder_weights(rng, 64, 128);
  Tensor a = x, b({4, 64});
  for (size_t i = 0; i < a.size(); ++i) a[i] += pe[i];
  // Swap tokens 1 and 2 after the encodings were added.
  for (int j = 0; j < 64; ++j) {
    b.at(0, j) = a.at(0, j);
    b.at(1, j) = a.at(2, j);
    b.at(2, j) = a.at(1, j);
    b.at(3, j) = a.at(3, j);
  }
  Tensor ya = transformer_encoder_layer(a, w, 2);
  Tensor yb = transformer_encoder_layer(b, w, 2);
  EXPECT_GE(std::abs(ya.at(1, 0) - yb.at(2, 0)) + std::abs(ya.at(0, 0) - yb.at(0, 0)) +
                max_abs_diff(ya, yb),
            1e-6);
  EXPECT_GE(max_abs_diff(ya, yb), 1e-6);
}

TEST(Encoder, ReducedLayerOracle) {
  // Identity projections and a zero feed-forward leave attention + norms.
  std::mt19937_64 rng(11);
  const int d = 6, t = 3, heads = 2, dh = 3;
  EncoderLayerWeights w;
  w.wq = w.wk = w.wv = w.wo = identity(d);
  w.bq = w.bk = w.bv = w.bo = Tensor({d});
  w.ln1_gamma = w.ln2_gamma = Tensor({d}, 1.0f);
  w.ln1_beta = w.ln2_beta = Tensor({d});
  w.ff1_w = Tensor({d, 4});
  w.ff1_b = Tensor({4});
  w.ff2_w = Tensor({4, d});
  w.ff2_b = Tensor({d});
  Tensor x = random_tensor(rng, {t, d});

  // Hand-built: per head softmax(x_h x_h^T / sqrt(dh)) x_h, residual, two
  // plain normalizations.
  std::vector<double> mixed(t * d);
  for (int h = 0; h < heads; ++h) {
    for (int i = 0; i < t; ++i) {
      std::vector<double> s(t);
      double mx = -1e300, sum = 0.0;
      for (int j = 0; j < t; ++j) {
        double dot = 0.0;
        for (int c = 0; c < dh; ++c) dot += x.at(i, h * dh + c) * x.at(j, h * dh + c);
        s[j] = dot / std::sqrt(double(dh));
        mx = std::max(mx, s[j]);
      }
      for (double& v : s) sum += (v = std::exp(v - mx));
      for (int c = 0; c < dh; ++c) {
        double acc = 0.0;
        for (int j = 0; j < t; ++j) acc += s[j] / sum * x.at(j, h * dh + c);
        mixed[i * d + h * dh + c] = acc + x.at(i, h * dh + c);
      }
    }
  }
  auto norm = [&](std::vector<double> v) {
    for (int i = 0; i < t; ++i) {
      double m = 0, q = 0;
      for (int c = 0; c < d; ++c) m += v[i * d + c];
      m /= d;
      for (int c = 0; c < d; ++c) q += std::pow(v[i * d + c] - m, 2);
      double sd = std::sqrt(q / d + 1e-5);
      for (int c = 0; c < d; ++c) v[i * d + c] = (v[i * d + c] - m) / sd;
    }
    return v;
  };
  std::vector<double> expect = norm(norm(mixed));
  Tensor y = transformer_encoder_layer(x, w, heads);
  for (int i = 0; i < t * d; ++i) EXPECT_NEAR(y[i], expect[i], 1e-5);
}

TEST(KdLoss, HandCases) {
  std::vector<ActionVec> a(3, ActionVec::Constant(0.3));
  EXPECT_EQ(kd_loss(a, a), 0.0);
  std::vector<ActionVec> s1{ActionVec::Zero()}, t1{ActionVec::Unit(2)};
  EXPECT_EQ(kd_loss(s1, t1), 1.0);
  std::vector<ActionVec> s2{ActionVec::Zero(), ActionVec::Zero()};
  std::vector<ActionVec> t2{ActionVec::Unit(0), 2.0 * ActionVec::Unit(1)};
  EXPECT_EQ(kd_loss(s2, t2), 2.5);
  EXPECT_THROW(kd_loss(s1, t2), InvalidArgument);
  EXPECT_THROW(kd_loss({}, {}), InvalidArgument);
}

// ---------------------------------------------------------------- student

const WeightStore& student_weights() {
  static const WeightStore w = WeightStore::random(student_manifest(), 42);
  return w;
}

Tensor random_frames(uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_tensor(rng, {12, 54, 96}, 0.0f, 1.0f);
}

std::vector<float> random_proprio(uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(-1, 1);
  std::vector<float> p(kProprioDim);
  for (float& v : p) v = u(rng);
  return p;
}

TEST(Student, ParameterCountNearBudget) {
  size_t n = student_manifest().parameter_count();
  EXPECT_EQ(n, 5348088u);
  EXPECT_NEAR(static_cast<double>(n), 5.37e6, 0.15 * 5.37e6);
}

TEST(Student, EightOutputsDeterministic) {
  StudentNetwork net(student_weights());
  Tensor f = random_frames(1);
  std::vector<float> p = random_proprio(2);
  ActionVec a = net.forward(f, p);
  ActionVec b = student_forward(f, p, student_weights());
  EXPECT_EQ(a.size(), 8);
  EXPECT_TRUE(a.allFinite());
  EXPECT_EQ(std::memcmp(a.data(), b.data(), sizeof(double) * 8), 0);
  EXPECT_NE(a, net.forward(random_frames(3), p));
}

TEST(Student, ManifestMismatchNamesParameter) {
  Manifest m = student_manifest();
  m.params[5].shape = {208, 64};
  WeightStore bad = WeightStore::random(m, 1);
  try {
    StudentNetwork net(bad);
    FAIL();
  } catch (const ArchitectureError& e) {
    EXPECT_NE(std::string(e.what()).find(m.params[5].name), std::string::npos);
  }
  Manifest other = m;
  other.architecture = "gfm-v1";
  EXPECT_THROW(StudentNetwork(WeightStore::random(other, 1)), ArchitectureError);
}

TEST(Student, InputShapeChecked) {
  StudentNetwork net(student_weights());
  std::vector<float> p = random_proprio(2);
  EXPECT_THROW(net.forward(Tensor({12, 54, 95}), p), ShapeError);
  p.pop_back();
  EXPECT_THROW(net.forward(random_frames(1), p), ShapeError);
}

TEST(Student, LatencyBudget) {
  StudentNetwork net(student_weights());
  Tensor f = random_frames(5);
  std::vector<float> p = random_proprio(6);
  net.forward(f, p);
  double best = 1e9;
  for (int i = 0; i < 5; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    net.forward(f, p);
    auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  RecordProperty("forward_ms", std::to_string(best));
  EXPECT_LT(best, 50.0);
}

// ---------------------------------------------------------------- weights

TEST(WeightStore, RoundtripBitExact) {
  auto path = std::filesystem::temp_directory_path() / "dqbench_weights_rt.bin";
  student_weights().save(path.string());
  WeightStore loaded = WeightStore::load(path.string());
  EXPECT_TRUE(loaded == student_weights());
  auto size = std::filesystem::file_size(path);
  EXPECT_GT(size, student_manifest().parameter_count() * 4);
  std::filesystem::resize_file(path, size - 3);
  EXPECT_THROW(WeightStore::load(path.string()), FileError);
  std::filesystem::remove(path);
  EXPECT_THROW(WeightStore::load("/nonexistent/w.bin"), FileError);
}

TEST(WeightStore, RandomInitScheme) {
  WeightStore w = WeightStore::random(student_manifest(), 3);
  const Tensor& fc = w.get("head.fc1.weight");
  float bound = 1.0f / std::sqrt(128.0f);
  for (float v : fc.data()) {
    ASSERT_LE(std::abs(v), bound);
  }
  for (float v : w.get("wrist.layer0.ln1.gamma").data()) EXPECT_EQ(v, 1.0f);
  for (float v : w.get("wrist.layer0.ln1.beta").data()) EXPECT_EQ(v, 0.0f);
  EXPECT_TRUE(WeightStore::random(student_manifest(), 3) == w);
}

}  // namespace
}  // namespace dqbench::nn
