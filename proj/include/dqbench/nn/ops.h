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

// Inference-only layer primitives. Every op validates shapes (ShapeError)
// and rejects non-finite results (InvalidArgument).

#ifndef DQBENCH_NN_OPS_H_
#define DQBENCH_NN_OPS_H_

#include <span>

#include <Eigen/Core>

#include "dqbench/nn/tensor.h"

namespace dqbench::nn {

// y = x W + b over the last axis. x: [..., n], W: [n, m], b: [m].
Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b);

Tensor elu(const Tensor& x);
Tensor relu(const Tensor& x);

// Max-subtracted exponential normalization along `axis`.
Tensor softmax(const Tensor& x, int axis);

// Cross-correlation. x: [c, h, w], w: [oc, c, kh, kw], b: [oc].
// Output extent floor((h + 2p - k) / s) + 1.
Tensor conv2d(const Tensor& x, const Tensor& w, const Tensor& b, int stride,
              int padding);

// Non-overlapping max pooling with floor semantics. x: [c, h, w].
Tensor max_pool2d(const Tensor& x, int kernel);

// Normalizes over the last axis. x: [..., d], gamma/beta: [d].
Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                  float eps = 1e-5f);

// softmax(Q K^T * scale) V. Q: [q, d], K: [k, d], V: [k, dv].
// scale = 1 gives the plain dot-product form.
Tensor attention(const Tensor& q, const Tensor& k, const Tensor& v,
                 float scale = 1.0f);
// Row-stochastic attention weights [q, k] for the same inputs.
Tensor attention_weights(const Tensor& q, const Tensor& k, float scale = 1.0f);

// Sinusoidal positional encoding [t, d]: sin on even columns, cos on odd.
Tensor positional_encoding(int tokens, int dim);

struct EncoderLayerWeights {
  Tensor wq, bq, wk, bk, wv, bv, wo, bo;  // [d, d], [d]
  Tensor ln1_gamma, ln1_beta;
  Tensor ff1_w, ff1_b;  // [d, f], [f]
  Tensor ff2_w, ff2_b;  // [f, d], [d]
  Tensor ln2_gamma, ln2_beta;
};

// Multi-head self-attention with 1/sqrt(d_head) scaling, then output
// projection. x: [t, d].
Tensor multi_head_self_attention(const Tensor& x, const EncoderLayerWeights& w,
                                 int heads);

// Post-norm encoder layer:
//   h = LN1(x + MHA(x));  y = LN2(h + W2 relu(W1 h + b1) + b2)
Tensor transformer_encoder_layer(const Tensor& tokens,
                                 const EncoderLayerWeights& w, int heads = 2);

using ActionVec = Eigen::Matrix<double, 8, 1>;

// (1/T) sum_t |student_t - teacher_t|^2. Throws InvalidArgument on a length
// mismatch or empty input.
double kd_loss(std::span<const ActionVec> student,
               std::span<const ActionVec> teacher);

}  // namespace dqbench::nn

#endif  // DQBENCH_NN_OPS_H_
