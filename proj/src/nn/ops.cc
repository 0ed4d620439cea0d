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

#include "dqbench/nn/ops.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dqbench/errors.h"

namespace dqbench::nn {

namespace {

using MatF = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVecF = Eigen::Matrix<float, 1, Eigen::Dynamic>;
using MapF = Eigen::Map<MatF>;
using CMapF = Eigen::Map<const MatF>;

Tensor checked(Tensor t, const char* op) {
  if (!t.all_finite()) {
    throw InvalidArgument(std::string(op) + ": non-finite value in output");
  }
  return t;
}

[[noreturn]] void mismatch(const char* op, const Tensor& a, const Tensor& b) {
  throw ShapeError(std::string(op) + ": incompatible shapes " +
                   shape_string(a.shape()) + " and " + shape_string(b.shape()));
}

void require_rank(const char* op, const Tensor& t, int rank) {
  if (t.rank() != rank) {
    throw ShapeError(std::string(op) + ": expected rank " +
                     std::to_string(rank) + ", got " + shape_string(t.shape()));
  }
}

void require_vector(const char* op, const Tensor& b, int n) {
  if (b.rank() != 1 || b.dim(0) != n) {
    throw ShapeError(std::string(op) + ": expected vector of length " +
                     std::to_string(n) + ", got " + shape_string(b.shape()));
  }
}

// Rows of the last-axis view.
int last(const Tensor& t) { return t.shape().back(); }
int rows_of(const Tensor& t) { return static_cast<int>(t.size()) / last(t); }

Tensor columns(const Tensor& x, int begin, int count) {
  Tensor out({x.dim(0), count});
  for (int i = 0; i < x.dim(0); ++i) {
    for (int j = 0; j < count; ++j) out.at(i, j) = x.at(i, begin + j);
  }
  return out;
}

}  // namespace

Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b) {
  if (x.rank() < 1 || w.rank() != 2 || last(x) != w.dim(0)) {
    mismatch("linear", x, w);
  }
  const int m = w.dim(1);
  require_vector("linear", b, m);
  Shape out_shape = x.shape();
  out_shape.back() = m;
  Tensor y(out_shape);
  const int r = rows_of(x);
  CMapF xm(x.ptr(), r, w.dim(0));
  CMapF wm(w.ptr(), w.dim(0), m);
  Eigen::Map<const RowVecF> bm(b.ptr(), m);
  MapF ym(y.ptr(), r, m);
  ym.noalias() = xm * wm;
  ym.rowwise() += bm;
  return checked(std::move(y), "linear");
}

Tensor elu(const Tensor& x) {
  Tensor y = x;
  Eigen::Map<Eigen::ArrayXf> a(y.ptr(), static_cast<Eigen::Index>(y.size()));
  a = (a > 0.0f).select(a, a.min(0.0f).expm1());
  return checked(std::move(y), "elu");
}

Tensor relu(const Tensor& x) {
  Tensor y = x;
  for (float& v : y.data()) v = std::max(v, 0.0f);
  return checked(std::move(y), "relu");
}

Tensor softmax(const Tensor& x, int axis) {
  if (axis < 0) axis += x.rank();
  if (axis < 0 || axis >= x.rank()) {
    throw ShapeError("softmax: axis out of range for " +
                     shape_string(x.shape()));
  }
  if (!x.all_finite()) throw InvalidArgument("softmax: non-finite input");
  size_t outer = 1, inner = 1;
  for (int i = 0; i < axis; ++i) outer *= x.dim(i);
  for (int i = axis + 1; i < x.rank(); ++i) inner *= x.dim(i);
  const size_t n = x.dim(axis);
  Tensor y = x;
  float* d = y.ptr();
  for (size_t o = 0; o < outer; ++o) {
    for (size_t in = 0; in < inner; ++in) {
      float* base = d + o * n * inner + in;
      float mx = -std::numeric_limits<float>::infinity();
      for (size_t k = 0; k < n; ++k) mx = std::max(mx, base[k * inner]);
      float sum = 0.0f;
      for (size_t k = 0; k < n; ++k) {
        base[k * inner] = std::exp(base[k * inner] - mx);
        sum += base[k * inner];
      }
      for (size_t k = 0; k < n; ++k) base[k * inner] /= sum;
    }
  }
  return checked(std::move(y), "softmax");
}

Tensor conv2d(const Tensor& x, const Tensor& w, const Tensor& b, int stride,
              int padding) {
  require_rank("conv2d", x, 3);
  require_rank("conv2d", w, 4);
  if (w.dim(1) != x.dim(0)) mismatch("conv2d", x, w);
  if (stride < 1 || padding < 0) {
    throw ShapeError("conv2d: stride must be >= 1 and padding >= 0");
  }
  const int c = x.dim(0), h = x.dim(1), wd = x.dim(2);
  const int oc = w.dim(0), kh = w.dim(2), kw = w.dim(3);
  require_vector("conv2d", b, oc);
  const int oh_num = h + 2 * padding - kh;
  const int ow_num = wd + 2 * padding - kw;
  if (oh_num < 0 || ow_num < 0) mismatch("conv2d", x, w);
  const int oh = oh_num / stride + 1;
  const int ow = ow_num / stride + 1;

  // im2col: rows (ci, ky, kx), columns output pixels.
  const int patch = c * kh * kw;
  MatF cols = MatF::Zero(patch, oh * ow);
  for (int ci = 0; ci < c; ++ci) {
    for (int ky = 0; ky < kh; ++ky) {
      for (int kx = 0; kx < kw; ++kx) {
        float* row = cols.row((ci * kh + ky) * kw + kx).data();
        for (int oy = 0; oy < oh; ++oy) {
          const int iy = oy * stride + ky - padding;
          if (iy < 0 || iy >= h) continue;
          const float* src = x.ptr() + (ci * h + iy) * wd;
          for (int ox = 0; ox < ow; ++ox) {
            const int ix = ox * stride + kx - padding;
            if (ix >= 0 && ix < wd) row[oy * ow + ox] = src[ix];
          }
        }
      }
    }
  }
  Tensor y({oc, oh, ow});
  CMapF wm(w.ptr(), oc, patch);
  MapF ym(y.ptr(), oc, oh * ow);
  ym.noalias() = wm * cols;
  for (int o = 0; o < oc; ++o) ym.row(o).array() += b[o];
  return checked(std::move(y), "conv2d");
}

Tensor max_pool2d(const Tensor& x, int kernel) {
  require_rank("max_pool2d", x, 3);
  if (kernel < 1 || x.dim(1) < kernel || x.dim(2) < kernel) {
    throw ShapeError("max_pool2d: kernel " + std::to_string(kernel) +
                     " does not fit " + shape_string(x.shape()));
  }
  const int c = x.dim(0), oh = x.dim(1) / kernel, ow = x.dim(2) / kernel;
  Tensor y({c, oh, ow});
  for (int ci = 0; ci < c; ++ci) {
    for (int oy = 0; oy < oh; ++oy) {
      for (int ox = 0; ox < ow; ++ox) {
        float m = -std::numeric_limits<float>::infinity();
        for (int ky = 0; ky < kernel; ++ky) {
          for (int kx = 0; kx < kernel; ++kx) {
            m = std::max(m, x.at(ci, oy * kernel + ky, ox * kernel + kx));
          }
        }
        y.at(ci, oy, ox) = m;
      }
    }
  }
  return checked(std::move(y), "max_pool2d");
}

Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                  float eps) {
  const int d = last(x);
  require_vector("layer_norm", gamma, d);
  require_vector("layer_norm", beta, d);
  Tensor y = x;
  for (int r = 0; r < rows_of(x); ++r) {
    float* row = y.ptr() + r * d;
    double mean = 0.0;
    for (int i = 0; i < d; ++i) mean += row[i];
    mean /= d;
    double var = 0.0;
    for (int i = 0; i < d; ++i) var += (row[i] - mean) * (row[i] - mean);
    var /= d;
    const double inv = 1.0 / std::sqrt(var + eps);
    for (int i = 0; i < d; ++i) {
      row[i] = static_cast<float>((row[i] - mean) * inv) * gamma[i] + beta[i];
    }
  }
  return checked(std::move(y), "layer_norm");
}

Tensor attention_weights(const Tensor& q, const Tensor& k, float scale) {
  require_rank("attention", q, 2);
  require_rank("attention", k, 2);
  if (q.dim(1) != k.dim(1)) mismatch("attention", q, k);
  Tensor s({q.dim(0), k.dim(0)});
  CMapF qm(q.ptr(), q.dim(0), q.dim(1));
  CMapF km(k.ptr(), k.dim(0), k.dim(1));
  MapF sm(s.ptr(), q.dim(0), k.dim(0));
  sm.noalias() = qm * km.transpose();
  if (scale != 1.0f) sm *= scale;
  return softmax(s, 1);
}

Tensor attention(const Tensor& q, const Tensor& k, const Tensor& v,
                 float scale) {
  require_rank("attention", v, 2);
  if (k.rank() != 2 || v.dim(0) != k.dim(0)) mismatch("attention", k, v);
  Tensor a = attention_weights(q, k, scale);
  Tensor y({q.dim(0), v.dim(1)});
  CMapF am(a.ptr(), a.dim(0), a.dim(1));
  CMapF vm(v.ptr(), v.dim(0), v.dim(1));
  MapF ym(y.ptr(), y.dim(0), y.dim(1));
  ym.noalias() = am * vm;
  return checked(std::move(y), "attention");
}

Tensor positional_encoding(int tokens, int dim) {
  Tensor pe({tokens, dim});
  for (int p = 0; p < tokens; ++p) {
    for (int i = 0; i < dim; ++i) {
      const int pair = i / 2;
      const double freq = std::pow(10000.0, -2.0 * pair / dim);
      pe.at(p, i) = static_cast<float>(i % 2 == 0 ? std::sin(p * freq)
                                                  : std::cos(p * freq));
    }
  }
  return pe;
}

Tensor multi_head_self_attention(const Tensor& x, const EncoderLayerWeights& w,
                                 int heads) {
  require_rank("multi_head_self_attention", x, 2);
  const int t = x.dim(0), d = x.dim(1);
  if (heads < 1 || d % heads != 0) {
    throw ShapeError("multi_head_self_attention: model dim " +
                     std::to_string(d) + " not divisible by " +
                     std::to_string(heads) + " heads");
  }
  const int dh = d / heads;
  Tensor q = linear(x, w.wq, w.bq);
  Tensor k = linear(x, w.wk, w.bk);
  Tensor v = linear(x, w.wv, w.bv);
  const float scale = 1.0f / std::sqrt(static_cast<float>(dh));
  Tensor concat({t, d});
  for (int h = 0; h < heads; ++h) {
    Tensor o = attention(columns(q, h * dh, dh), columns(k, h * dh, dh),
                         columns(v, h * dh, dh), scale);
    for (int i = 0; i < t; ++i) {
      for (int j = 0; j < dh; ++j) concat.at(i, h * dh + j) = o.at(i, j);
    }
  }
  return linear(concat, w.wo, w.bo);
}

namespace {

Tensor add(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) mismatch("add", a, b);
  Tensor y = a;
  for (size_t i = 0; i < y.size(); ++i) y[i] += b[i];
  return y;
}

}  // namespace

Tensor transformer_encoder_layer(const Tensor& tokens,
                                 const EncoderLayerWeights& w, int heads) {
  Tensor h = layer_norm(add(tokens, multi_head_self_attention(tokens, w, heads)),
                        w.ln1_gamma, w.ln1_beta);
  Tensor ff = linear(relu(linear(h, w.ff1_w, w.ff1_b)), w.ff2_w, w.ff2_b);
  return layer_norm(add(h, ff), w.ln2_gamma, w.ln2_beta);
}

double kd_loss(std::span<const ActionVec> student,
               std::span<const ActionVec> teacher) {
  if (student.size() != teacher.size()) {
    throw InvalidArgument("kd_loss: sequence lengths differ (" +
                          std::to_string(student.size()) + " vs " +
                          std::to_string(teacher.size()) + ")");
  }
  if (student.empty()) throw InvalidArgument("kd_loss: empty sequences");
  double sum = 0.0;
  for (size_t t = 0; t < student.size(); ++t) {
    sum += (student[t] - teacher[t]).squaredNorm();
  }
  return sum / static_cast<double>(student.size());
}

}  // namespace dqbench::nn
