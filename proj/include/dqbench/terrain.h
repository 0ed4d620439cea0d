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

#ifndef DQBENCH_TERRAIN_H_
#define DQBENCH_TERRAIN_H_

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace dqbench {

inline constexpr double kTerrainMaxHeight = 0.1;

// Regular-lattice height field. Queries outside the lattice clamp to the
// border, so height() is continuous everywhere.
class TerrainField {
 public:
  TerrainField(int nx, int ny, double cell_size, Eigen::Vector2d origin,
               std::vector<double> heights);

  // Bilinear interpolation.
  double height(double x, double y) const;

  double node(int i, int j) const { return heights_[j * nx_ + i]; }
  Eigen::Vector2d node_position(int i, int j) const {
    return origin_ + Eigen::Vector2d(i * cell_size_, j * cell_size_);
  }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double cell_size() const { return cell_size_; }
  const Eigen::Vector2d& origin() const { return origin_; }
  const std::vector<double>& heights() const { return heights_; }
  double min_height() const { return min_; }
  double max_height() const { return max_; }
  // Upper bound on |grad h| anywhere on the field.
  double slope_bound() const { return slope_bound_; }

  bool operator==(const TerrainField& o) const {
    return nx_ == o.nx_ && ny_ == o.ny_ && cell_size_ == o.cell_size_ &&
           origin_ == o.origin_ && heights_ == o.heights_;
  }

 private:
  int nx_;
  int ny_;
  double cell_size_;
  Eigen::Vector2d origin_;
  std::vector<double> heights_;
  double min_ = 0.0;
  double max_ = 0.0;
  double slope_bound_ = 0.0;
};

// Heights i.i.d. uniform in [0, 0.1] m, then one 3x3 box filter (edge nodes
// average the neighbours that exist). The lattice is centred on the origin
// and spans `extent` metres per side.
TerrainField sample_terrain(uint64_t seed, double extent, double cell_size);

TerrainField flat_terrain(double extent, double cell_size, double height = 0.0);

}  // namespace dqbench

#endif  // DQBENCH_TERRAIN_H_
