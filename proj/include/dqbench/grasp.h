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

// Grasp fusion: analytic antipodal candidates, the object-local memory
// bank, the object descriptor, and query/key/value attention over the
// bank re-projected into the world frame.
//
// Grasp frame convention: +x is the approach direction (into the object),
// +y the finger closing axis. Rotating a grasp by pi about +x yields an
// equivalent grasp.

#ifndef DQBENCH_GRASP_H_
#define DQBENCH_GRASP_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dqbench/catalog.h"
#include "dqbench/nn/weight_store.h"
#include "dqbench/se3.h"

namespace dqbench {

inline constexpr double kGripperAperture = 0.085;
inline constexpr int kDefaultBankSize = 30;
inline constexpr int kDefaultCandidateCount = 200;
inline constexpr int kObjectFeatureDim = 128;
inline constexpr int kGfmQueryDim = kObjectFeatureDim + 6;
inline constexpr int kGfmEmbedDim = 64;
inline constexpr const char* kGfmArchitecture = "gfm-v1";

struct GraspCandidate {
  Pose6 pose;  // object frame
  double score = 0.0;

  bool operator==(const GraspCandidate&) const = default;
};

// Antipodal sampler. Spheres: diametric grasps through the centre.
// Boxes: fingers on two opposing faces no farther apart than the aperture,
// approach along another axis (never from below). Cylinders: side grasps
// across the diameter, or top-down. score = 1 - width / aperture, reduced
// by 0.5 * (upward approach component). Returns an empty list when no
// axis fits the aperture. Throws InvalidArgument for n < 1.
std::vector<GraspCandidate> generate_candidates(
    const ObjectSpec& spec, int n, uint64_t seed,
    double aperture = kGripperAperture);

// Seed used for an object's canonical candidate set.
uint64_t candidate_seed(const ObjectSpec& spec);

struct GraspMemoryBank {
  std::string object_id;
  int capacity = kDefaultBankSize;
  std::vector<GraspCandidate> candidates;  // descending score

  bool empty() const { return candidates.empty(); }
  int size() const { return static_cast<int>(candidates.size()); }
  bool operator==(const GraspMemoryBank&) const = default;
};

// Top-`capacity` candidates by score, stable for ties. Throws
// InvalidArgument for capacity < 1.
GraspMemoryBank build_memory(std::string object_id,
                             std::span<const GraspCandidate> candidates,
                             int capacity = kDefaultBankSize);

// Text form: "object_id = ...", "capacity = ...", then one
// "grasp = px py pz rx ry rz score" line per candidate.
std::string export_bank(const GraspMemoryBank& bank);
// Throws InvalidConfig on malformed text.
GraspMemoryBank import_bank(std::string_view text);

using ObjectFeature = Eigen::Matrix<double, kObjectFeatureDim, 1>;

// Layout: shape one-hot [0,3), dims [3,6), volume 6, surface area 7,
// radial histogram of 512 surface points [8,68) (60 bins of 5 mm over
// [0, 0.3) m, fractions), mass 68, zeros after.
inline constexpr int kFeatureHistogramOffset = 8;
inline constexpr int kFeatureHistogramBins = 60;
inline constexpr double kFeatureHistogramBinWidth = 0.005;
inline constexpr int kFeatureSurfacePoints = 512;
inline constexpr int kFeaturePopulated = 69;

ObjectFeature object_feature(const ObjectSpec& spec);

// Linear maps y = x W + b with W stored [in, out].
struct GfmWeights {
  Eigen::MatrixXd wq;    // [134, 64]
  Eigen::VectorXd bq;    // [64]
  Eigen::MatrixXd wk;    // [6, 64]
  Eigen::VectorXd bk;
  Eigen::MatrixXd wv;    // [6, 64]
  Eigen::VectorXd bv;
  Eigen::MatrixXd wout;  // [64, 6]
  Eigen::VectorXd bout;  // [6]

  // Throws ShapeError when any shape differs from the listing above.
  void validate() const;

  // Uniform(+-1/sqrt(fan_in)) weights.
  static GfmWeights random(uint64_t seed);
  // Hand-built weights: keys carry the grasp's world position, the query
  // carries the object position, so the largest logit goes to the grasp
  // offset toward the world origin (the robot spawn); higher grasps get a
  // small bonus. Values and output pass the grasp 6-vector through.
  static GfmWeights alignment();

  // Throws ArchitectureError on a manifest mismatch.
  static GfmWeights from_store(const nn::WeightStore& store);
  nn::WeightStore to_store() const;
};

nn::Manifest gfm_manifest();

struct GfmResult {
  Pose6 fused;               // world frame
  Vec6 output;               // pre-decode 6-vector
  Eigen::VectorXd alphas;    // [K]
  Eigen::VectorXd logits;    // [K]
  Eigen::VectorXd fused_value;  // [64]
  Eigen::MatrixXd values;    // [K, 64]
};

// World-frame 6-vectors of every bank entry for the given object pose.
Eigen::MatrixXd world_grasp_vectors(const GraspMemoryBank& bank,
                                    const Pose6& obj_pose);
// Keys [K, 64] from world-frame 6-vectors.
Eigen::MatrixXd gfm_keys(const Eigen::MatrixXd& world_vectors,
                         const GfmWeights& w);

// Throws EmptyBank for an empty bank.
GfmResult gfm_forward(const ObjectFeature& feat, const Pose6& obj_pose,
                      const GraspMemoryBank& bank, const GfmWeights& w);

// World-frame grasp with the largest attention weight; lowest index on
// ties. Throws EmptyBank.
Pose6 select_argmax(const GraspMemoryBank& bank, const Pose6& obj_pose,
                    const ObjectFeature& feat, const GfmWeights& w);
int argmax_index(const Eigen::VectorXd& logits);

// True when `ee` lies within pos_tol / ori_tol of some candidate in world
// frame (either finger ordering).
bool matches_candidate(const Pose6& ee, const Pose6& obj_pose,
                       std::span<const GraspCandidate> candidates,
                       double pos_tol, double ori_tol);

}  // namespace dqbench

#endif  // DQBENCH_GRASP_H_
