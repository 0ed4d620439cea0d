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

#include "dqbench/grasp.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "dqbench/errors.h"
#include "dqbench/kv_text.h"
#include "dqbench/seed.h"

namespace dqbench {

namespace {

constexpr double kPi = std::numbers::pi;
// Grasp centre depth behind the entry face, and edge clearance.
constexpr double kGraspDepth = 0.03;
constexpr double kEdgeClearance = 0.01;
constexpr double kCylinderEdgeClearance = 0.02;
constexpr double kTopDownProbability = 0.3;
constexpr double kBelowPenalty = 0.5;
constexpr uint64_t kSurfaceSeed = 0x5375726661636550ULL;

constexpr double kAlignGain = 100.0;
constexpr double kAlignHeightBonus = 50.0;

double grasp_score(double width, double aperture, const Vec3& approach) {
  double s = 1.0 - width / aperture - kBelowPenalty * std::max(0.0, approach.z());
  return std::clamp(s, 0.0, 1.0);
}

GraspCandidate make_grasp(const Vec3& approach, const Vec3& closing,
                          const Vec3& position, double width,
                          double aperture) {
  Mat3 r;
  r.col(0) = approach;
  r.col(1) = closing;
  r.col(2) = approach.cross(closing);
  return {{position, rotation_to_euler(r)},
          grasp_score(width, aperture, approach)};
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(n(rng), n(rng), n(rng));
  } while (v.norm() < 1e-9);
  return v.normalized();
}

Vec3 random_perpendicular(const Vec3& a, std::mt19937_64& rng) {
  Vec3 v;
  do {
    v = random_unit(rng);
    v -= v.dot(a) * a;
  } while (v.norm() < 1e-6);
  return v.normalized();
}

std::vector<GraspCandidate> sphere_candidates(const ObjectSpec& spec, int n,
                                              std::mt19937_64& rng,
                                              double aperture) {
  const double width = 2.0 * spec.dims[0];
  if (width > aperture) return {};
  std::vector<GraspCandidate> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    Vec3 a = random_unit(rng);
    out.push_back(make_grasp(a, random_perpendicular(a, rng), Vec3::Zero(),
                             width, aperture));
  }
  return out;
}

std::vector<GraspCandidate> box_candidates(const ObjectSpec& spec, int n,
                                           std::mt19937_64& rng,
                                           double aperture) {
  const Vec3 half = half_extents(spec);
  std::vector<int> closing_axes;
  for (int j = 0; j < 3; ++j) {
    if (2.0 * half[j] <= aperture) closing_axes.push_back(j);
  }
  if (closing_axes.empty()) return {};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<GraspCandidate> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    int j = closing_axes[rng() % closing_axes.size()];
    // (axis, sign) approach options, excluding the approach from below.
    std::vector<std::pair<int, double>> options;
    for (int k = 0; k < 3; ++k) {
      if (k == j) continue;
      options.push_back({k, -1.0});
      if (k != 2) options.push_back({k, 1.0});
    }
    auto [k, sign] = options[rng() % options.size()];
    const int t = 3 - j - k;
    Vec3 a = sign * Vec3::Unit(k);
    Vec3 c = (unit(rng) < 0.5 ? 1.0 : -1.0) * Vec3::Unit(j);
    Vec3 p = -a * std::max(0.0, half[k] - kGraspDepth);
    double slide = std::max(0.0, half[t] - kEdgeClearance);
    p += Vec3::Unit(t) * (slide * (2.0 * unit(rng) - 1.0));
    out.push_back(make_grasp(a, c, p, 2.0 * half[j], aperture));
  }
  return out;
}

std::vector<GraspCandidate> cylinder_candidates(const ObjectSpec& spec, int n,
                                                std::mt19937_64& rng,
                                                double aperture) {
  const double r = spec.dims[0];
  const double hz = 0.5 * spec.dims[1];
  const double width = 2.0 * r;
  if (width > aperture) return {};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<GraspCandidate> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    double phi = 2.0 * kPi * unit(rng);
    Vec3 radial(std::cos(phi), std::sin(phi), 0.0);
    if (unit(rng) < kTopDownProbability) {
      Vec3 p(0.0, 0.0, std::max(0.0, hz - kGraspDepth));
      out.push_back(make_grasp(-Vec3::UnitZ(), radial, p, width, aperture));
    } else {
      double zr = std::max(0.0, hz - kCylinderEdgeClearance);
      Vec3 p(0.0, 0.0, zr * (2.0 * unit(rng) - 1.0));
      Vec3 closing(-radial.y(), radial.x(), 0.0);
      out.push_back(make_grasp(radial, closing, p, width, aperture));
    }
  }
  return out;
}

// Area-weighted deterministic surface samples about the centroid.
std::vector<Vec3> surface_points(const ObjectSpec& spec, int count) {
  std::mt19937_64 rng(kSurfaceSeed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec3> pts;
  pts.reserve(count);
  switch (spec.shape) {
    case Shape::kSphere:
      for (int i = 0; i < count; ++i) pts.push_back(random_unit(rng) * spec.dims[0]);
      break;
    case Shape::kBox: {
      const Vec3 h = half_extents(spec);
      const double areas[3] = {h.y() * h.z(), h.x() * h.z(), h.x() * h.y()};
      const double total = areas[0] + areas[1] + areas[2];
      for (int i = 0; i < count; ++i) {
        double pick = u(rng) * total;
        int axis = pick < areas[0] ? 0 : (pick < areas[0] + areas[1] ? 1 : 2);
        Vec3 p(h.x() * (2 * u(rng) - 1), h.y() * (2 * u(rng) - 1),
               h.z() * (2 * u(rng) - 1));
        p[axis] = u(rng) < 0.5 ? -h[axis] : h[axis];
        pts.push_back(p);
      }
      break;
    }
    case Shape::kCylinder: {
      const double r = spec.dims[0], hz = 0.5 * spec.dims[1];
      const double side = 2.0 * kPi * r * spec.dims[1];
      const double caps = 2.0 * kPi * r * r;
      for (int i = 0; i < count; ++i) {
        double phi = 2.0 * kPi * u(rng);
        if (u(rng) * (side + caps) < side) {
          pts.emplace_back(r * std::cos(phi), r * std::sin(phi),
                           hz * (2 * u(rng) - 1));
        } else {
          double rr = r * std::sqrt(u(rng));
          pts.emplace_back(rr * std::cos(phi), rr * std::sin(phi),
                           u(rng) < 0.5 ? -hz : hz);
        }
      }
      break;
    }
  }
  return pts;
}

void require_shape(const char* name, const Eigen::MatrixXd& m, int rows,
                   int cols) {
  if (m.rows() != rows || m.cols() != cols) {
    throw ShapeError(std::string("gfm weight '") + name + "' has shape [" +
                     std::to_string(m.rows()) + "," + std::to_string(m.cols()) +
                     "], expected [" + std::to_string(rows) + "," +
                     std::to_string(cols) + "]");
  }
}

Eigen::MatrixXd to_matrix(const nn::Tensor& t) {
  const int cols = t.rank() == 1 ? 1 : t.dim(1);
  const int rows = t.rank() == 1 ? t.dim(0) : t.dim(0);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = t[i * cols + j];
  }
  return m;
}

nn::Tensor to_tensor(const Eigen::MatrixXd& m, bool vector) {
  nn::Shape shape = vector ? nn::Shape{static_cast<int>(m.size())}
                           : nn::Shape{static_cast<int>(m.rows()),
                                       static_cast<int>(m.cols())};
  nn::Tensor t(shape);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      t[i * m.cols() + j] = static_cast<float>(m(i, j));
    }
  }
  return t;
}

}  // namespace

std::vector<GraspCandidate> generate_candidates(const ObjectSpec& spec, int n,
                                                uint64_t seed,
                                                double aperture) {
  if (n < 1) throw InvalidArgument("generate_candidates: n must be >= 1");
  if (!(aperture > 0.0)) {
    throw InvalidArgument("generate_candidates: aperture must be positive");
  }
  std::mt19937_64 rng(seed);
  switch (spec.shape) {
    case Shape::kSphere: return sphere_candidates(spec, n, rng, aperture);
    case Shape::kBox: return box_candidates(spec, n, rng, aperture);
    case Shape::kCylinder: return cylinder_candidates(spec, n, rng, aperture);
  }
  return {};
}

uint64_t candidate_seed(const ObjectSpec& spec) {
  return splitmix64(fnv1a64(spec.id));
}

GraspMemoryBank build_memory(std::string object_id,
                             std::span<const GraspCandidate> candidates,
                             int capacity) {
  if (capacity < 1) throw InvalidArgument("build_memory: capacity must be >= 1");
  GraspMemoryBank bank;
  bank.object_id = std::move(object_id);
  bank.capacity = capacity;
  bank.candidates.assign(candidates.begin(), candidates.end());
  std::stable_sort(bank.candidates.begin(), bank.candidates.end(),
                   [](const GraspCandidate& a, const GraspCandidate& b) {
                     return a.score > b.score;
                   });
  if (bank.size() > capacity) bank.candidates.resize(capacity);
  return bank;
}

std::string export_bank(const GraspMemoryBank& bank) {
  std::ostringstream os;
  os << "# grasp memory bank, object-frame poses\n"
     << "object_id = " << bank.object_id << '\n'
     << "capacity = " << bank.capacity << '\n';
  char buf[64];
  for (const auto& c : bank.candidates) {
    os << "grasp =";
    Vec6 v = vec6_encode(c.pose);
    for (int i = 0; i < 6; ++i) {
      std::snprintf(buf, sizeof buf, " %.17g", v[i]);
      os << buf;
    }
    std::snprintf(buf, sizeof buf, " %.17g", c.score);
    os << buf << '\n';
  }
  return os.str();
}

GraspMemoryBank import_bank(std::string_view text) {
  GraspMemoryBank bank;
  bool have_id = false;
  for (const KvEntry& e : parse_kv_lines(text)) {
    const std::string where = "bank line " + std::to_string(e.line);
    try {
      if (e.key == "object_id") {
        bank.object_id = e.value;
        have_id = true;
      } else if (e.key == "capacity") {
        bank.capacity = static_cast<int>(parse_int(e.value, "capacity"));
      } else if (e.key == "grasp") {
        std::istringstream is(e.value);
        std::string tok;
        std::vector<double> v;
        while (is >> tok) v.push_back(parse_double(tok, "grasp value"));
        if (v.size() != 7) {
          throw InvalidConfig(where + ": expected 7 numbers per grasp");
        }
        Vec6 p;
        for (int i = 0; i < 6; ++i) p[i] = v[i];
        bank.candidates.push_back({vec6_decode(p), v[6]});
      } else {
        throw InvalidConfig(where + ": unknown key '" + e.key + "'");
      }
    } catch (const InvalidArgument& err) {
      throw InvalidConfig(where + ": " + err.what());
    }
  }
  if (!have_id) throw InvalidConfig("bank text has no object_id");
  if (bank.capacity < 1 || bank.size() > bank.capacity) {
    throw InvalidConfig("bank capacity " + std::to_string(bank.capacity) +
                        " inconsistent with " + std::to_string(bank.size()) +
                        " grasps");
  }
  return bank;
}

ObjectFeature object_feature(const ObjectSpec& spec) {
  ObjectFeature f = ObjectFeature::Zero();
  f[static_cast<int>(spec.shape)] = 1.0;
  for (size_t i = 0; i < spec.dims.size() && i < 3; ++i) f[3 + i] = spec.dims[i];
  f[6] = volume(spec);
  f[7] = surface_area(spec);
  const double weight = 1.0 / kFeatureSurfacePoints;
  for (const Vec3& p : surface_points(spec, kFeatureSurfacePoints)) {
    int bin = static_cast<int>(std::floor(p.norm() / kFeatureHistogramBinWidth));
    if (bin >= 0 && bin < kFeatureHistogramBins) {
      f[kFeatureHistogramOffset + bin] += weight;
    }
  }
  f[kFeatureHistogramOffset + kFeatureHistogramBins] = spec.mass;
  return f;
}

nn::Manifest gfm_manifest() {
  using nn::Init;
  nn::Manifest m;
  m.architecture = kGfmArchitecture;
  auto dense = [&](const std::string& name, int in, int out) {
    m.params.push_back({name + ".weight", {in, out}, Init::kUniformFanIn, in});
    m.params.push_back({name + ".bias", {out}, Init::kUniformFanIn, in});
  };
  dense("gfm.query", kGfmQueryDim, kGfmEmbedDim);
  dense("gfm.key", 6, kGfmEmbedDim);
  dense("gfm.value", 6, kGfmEmbedDim);
  dense("gfm.out", kGfmEmbedDim, 6);
  return m;
}

void GfmWeights::validate() const {
  require_shape("wq", wq, kGfmQueryDim, kGfmEmbedDim);
  require_shape("bq", bq, kGfmEmbedDim, 1);
  require_shape("wk", wk, 6, kGfmEmbedDim);
  require_shape("bk", bk, kGfmEmbedDim, 1);
  require_shape("wv", wv, 6, kGfmEmbedDim);
  require_shape("bv", bv, kGfmEmbedDim, 1);
  require_shape("wout", wout, kGfmEmbedDim, 6);
  require_shape("bout", bout, 6, 1);
}

GfmWeights GfmWeights::from_store(const nn::WeightStore& store) {
  store.validate(gfm_manifest());
  GfmWeights w;
  w.wq = to_matrix(store.get("gfm.query.weight"));
  w.bq = to_matrix(store.get("gfm.query.bias"));
  w.wk = to_matrix(store.get("gfm.key.weight"));
  w.bk = to_matrix(store.get("gfm.key.bias"));
  w.wv = to_matrix(store.get("gfm.value.weight"));
  w.bv = to_matrix(store.get("gfm.value.bias"));
  w.wout = to_matrix(store.get("gfm.out.weight"));
  w.bout = to_matrix(store.get("gfm.out.bias"));
  return w;
}

nn::WeightStore GfmWeights::to_store() const {
  validate();
  nn::WeightStore store = nn::WeightStore::random(gfm_manifest(), 0);
  store.set("gfm.query.weight", to_tensor(wq, false));
  store.set("gfm.query.bias", to_tensor(bq, true));
  store.set("gfm.key.weight", to_tensor(wk, false));
  store.set("gfm.key.bias", to_tensor(bk, true));
  store.set("gfm.value.weight", to_tensor(wv, false));
  store.set("gfm.value.bias", to_tensor(bv, true));
  store.set("gfm.out.weight", to_tensor(wout, false));
  store.set("gfm.out.bias", to_tensor(bout, true));
  return store;
}

GfmWeights GfmWeights::random(uint64_t seed) {
  return from_store(nn::WeightStore::random(gfm_manifest(), seed));
}

GfmWeights GfmWeights::alignment() {
  GfmWeights w;
  w.wq = Eigen::MatrixXd::Zero(kGfmQueryDim, kGfmEmbedDim);
  w.bq = Eigen::VectorXd::Zero(kGfmEmbedDim);
  w.wk = Eigen::MatrixXd::Zero(6, kGfmEmbedDim);
  w.bk = Eigen::VectorXd::Zero(kGfmEmbedDim);
  w.wv = Eigen::MatrixXd::Zero(6, kGfmEmbedDim);
  w.bv = Eigen::VectorXd::Zero(kGfmEmbedDim);
  w.wout = Eigen::MatrixXd::Zero(kGfmEmbedDim, 6);
  w.bout = Eigen::VectorXd::Zero(6);
  // Query: minus the object's planar position; height bonus constant.
  w.wq(kObjectFeatureDim + 0, 0) = -kAlignGain;
  w.wq(kObjectFeatureDim + 1, 1) = -kAlignGain;
  w.bq(2) = kAlignHeightBonus;
  // Keys: the grasp's world position.
  for (int i = 0; i < 3; ++i) w.wk(i, i) = 1.0;
  for (int i = 0; i < 6; ++i) {
    w.wv(i, i) = 1.0;
    w.wout(i, i) = 1.0;
  }
  return w;
}

Eigen::MatrixXd world_grasp_vectors(const GraspMemoryBank& bank,
                                    const Pose6& obj_pose) {
  Eigen::MatrixXd g(bank.size(), 6);
  for (int i = 0; i < bank.size(); ++i) {
    g.row(i) = vec6_encode(grasp_to_world(bank.candidates[i].pose, obj_pose))
                   .transpose();
  }
  return g;
}

namespace {

// Row-at-a-time product so each row's result does not depend on how many
// rows the matrix has.
Eigen::MatrixXd rowwise_affine(const Eigen::MatrixXd& x,
                               const Eigen::MatrixXd& w,
                               const Eigen::VectorXd& b) {
  Eigen::MatrixXd out(x.rows(), w.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    Eigen::VectorXd xi = x.row(i).transpose();
    out.row(i) = (w.transpose() * xi + b).transpose();
  }
  return out;
}

}  // namespace

Eigen::MatrixXd gfm_keys(const Eigen::MatrixXd& world_vectors,
                         const GfmWeights& w) {
  return rowwise_affine(world_vectors, w.wk, w.bk);
}

GfmResult gfm_forward(const ObjectFeature& feat, const Pose6& obj_pose,
                      const GraspMemoryBank& bank, const GfmWeights& w) {
  if (bank.empty()) {
    throw EmptyBank("gfm_forward: empty memory bank for '" + bank.object_id +
                    "'");
  }
  w.validate();
  Eigen::VectorXd x(kGfmQueryDim);
  x << feat, vec6_encode(obj_pose);
  Eigen::VectorXd q = w.wq.transpose() * x + w.bq;

  Eigen::MatrixXd g = world_grasp_vectors(bank, obj_pose);
  Eigen::MatrixXd keys = gfm_keys(g, w);
  GfmResult r;
  r.values = rowwise_affine(g, w.wv, w.bv);
  r.logits.resize(keys.rows());
  for (Eigen::Index i = 0; i < keys.rows(); ++i) r.logits[i] = keys.row(i).dot(q);

  const double mx = r.logits.maxCoeff();
  r.alphas = (r.logits.array() - mx).exp().matrix();
  r.alphas /= r.alphas.sum();

  // v0 + sum a_i (v_i - v0) reproduces v0 exactly when all values agree;
  // the clamp removes rounding outside the hull.
  Eigen::VectorXd v0 = r.values.row(0).transpose();
  Eigen::MatrixXd diff = r.values.rowwise() - v0.transpose();
  r.fused_value = v0 + diff.transpose() * r.alphas;
  Eigen::VectorXd lo = r.values.colwise().minCoeff().transpose();
  Eigen::VectorXd hi = r.values.colwise().maxCoeff().transpose();
  r.fused_value = r.fused_value.cwiseMax(lo).cwiseMin(hi);

  r.output = w.wout.transpose() * r.fused_value + w.bout;
  if (!r.output.allFinite() || !r.alphas.allFinite()) {
    throw InvalidArgument("gfm_forward: non-finite result");
  }
  r.fused = vec6_decode(r.output);
  return r;
}

int argmax_index(const Eigen::VectorXd& logits) {
  int best = 0;
  for (int i = 1; i < logits.size(); ++i) {
    if (logits[i] > logits[best]) best = i;
  }
  return best;
}

Pose6 select_argmax(const GraspMemoryBank& bank, const Pose6& obj_pose,
                    const ObjectFeature& feat, const GfmWeights& w) {
  GfmResult r = gfm_forward(feat, obj_pose, bank, w);
  return grasp_to_world(bank.candidates[argmax_index(r.logits)].pose,
                        obj_pose);
}

bool matches_candidate(const Pose6& ee, const Pose6& obj_pose,
                       std::span<const GraspCandidate> candidates,
                       double pos_tol, double ori_tol) {
  const Transform obj = euler_to_transform(obj_pose);
  const Mat3 ree = euler_to_rotation(ee.orientation);
  const double min_cos = std::cos(ori_tol);
  Mat3 flip = Mat3::Identity();
  flip(1, 1) = flip(2, 2) = -1.0;
  for (const auto& c : candidates) {
    const Transform g = obj * euler_to_transform(c.pose);
    if ((g.translation - ee.position).norm() > pos_tol) continue;
    for (const Mat3& rg : {Mat3(g.rotation), Mat3(g.rotation * flip)}) {
      Mat3 rel = rg.transpose() * ree;
      if ((rel.trace() - 1.0) * 0.5 >= min_cos) return true;
    }
  }
  return false;
}

}  // namespace dqbench
