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

// Named parameter tensors plus the manifest they were created against.
//
// File layout:
//   dqbench-weights 1
//   architecture <id>
//   params <count>
//   param <name> <d0> <d1> ...      (one line per parameter, in order)
//   end
// followed by the little-endian float32 data of every parameter, in
// manifest order.

#ifndef DQBENCH_NN_WEIGHT_STORE_H_
#define DQBENCH_NN_WEIGHT_STORE_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dqbench/nn/tensor.h"

namespace dqbench::nn {

enum class Init { kUniformFanIn, kOnes, kZeros };

struct ParamSpec {
  std::string name;
  Shape shape;
  Init init = Init::kUniformFanIn;
  int fan_in = 1;

  // Initialization hints are not stored in files and do not take part.
  bool operator==(const ParamSpec& o) const {
    return name == o.name && shape == o.shape;
  }
};

struct Manifest {
  std::string architecture;
  std::vector<ParamSpec> params;

  size_t parameter_count() const;
  bool operator==(const Manifest&) const = default;
};

class WeightStore {
 public:
  WeightStore() = default;

  // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights; ones/zeros for
  // normalization parameters.
  static WeightStore random(const Manifest& manifest, uint64_t seed);
  // Throws FileError on I/O or format problems.
  static WeightStore load(const std::string& path);

  void save(const std::string& path) const;

  // Throws ArchitectureError naming the first missing or mis-shaped
  // parameter, or on an architecture id mismatch.
  void validate(const Manifest& expected) const;

  // Throws ArchitectureError when missing or when the shape differs.
  const Tensor& get(const std::string& name, const Shape& shape) const;
  const Tensor& get(const std::string& name) const;
  // Throws ArchitectureError when the shape differs from the manifest.
  void set(const std::string& name, Tensor value);

  const Manifest& manifest() const { return manifest_; }
  size_t parameter_count() const { return manifest_.parameter_count(); }

  bool operator==(const WeightStore&) const = default;

 private:
  Manifest manifest_;
  std::map<std::string, Tensor> tensors_;
};

}  // namespace dqbench::nn

#endif  // DQBENCH_NN_WEIGHT_STORE_H_
