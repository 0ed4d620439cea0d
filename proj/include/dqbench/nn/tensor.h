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

#ifndef DQBENCH_NN_TENSOR_H_
#define DQBENCH_NN_TENSOR_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dqbench::nn {

using Shape = std::vector<int>;

std::string shape_string(const Shape& shape);
// Product of the extents. Throws ShapeError on a non-positive extent.
size_t shape_size(const Shape& shape);

// Dense row-major float32 tensor.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, float fill = 0.0f);
  // Throws ShapeError when data.size() does not match the shape.
  Tensor(Shape shape, std::vector<float> data);

  const Shape& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int dim(int i) const { return shape_[i]; }
  size_t size() const { return data_.size(); }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }
  float* ptr() { return data_.data(); }
  const float* ptr() const { return data_.data(); }

  float& operator[](size_t i) { return data_[i]; }
  float operator[](size_t i) const { return data_[i]; }

  // Row-major element access for rank 2 and 3.
  float& at(int i, int j) { return data_[i * shape_[1] + j]; }
  float at(int i, int j) const { return data_[i * shape_[1] + j]; }
  float& at(int c, int i, int j) {
    return data_[(c * shape_[1] + i) * shape_[2] + j];
  }
  float at(int c, int i, int j) const {
    return data_[(c * shape_[1] + i) * shape_[2] + j];
  }

  // Same data, new shape. Throws ShapeError on a size mismatch.
  Tensor reshaped(Shape shape) const;

  bool all_finite() const;

  bool operator==(const Tensor&) const = default;

 private:
  Shape shape_;
  std::vector<float> data_;
};

}  // namespace dqbench::nn

#endif  // DQBENCH_NN_TENSOR_H_
