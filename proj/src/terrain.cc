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

#include "dqbench/terrain.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "dqbench/errors.h"

namespace dqbench {

TerrainField::TerrainField(int nx, int ny, double cell_size,
                           Eigen::Vector2d origin, std::vector<double> heights)
    : nx_(nx),
      ny_(ny),
      cell_size_(cell_size),
      origin_(origin),
      heights_(std::move(heights)) {
  if (nx_ < 2 || ny_ < 2 || !(cell_size_ > 0.0) ||
      heights_.size() != static_cast<size_t>(nx_) * ny_) {
    throw InvalidArgument("TerrainField: bad lattice geometry");
  }
  auto [lo, hi] = std::minmax_element(heights_.begin(), heights_.end());
  min_ = *lo;
  max_ = *hi;
  double max_step = 0.0;
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      if (i + 1 < nx_) {
        max_step = std::max(max_step, std::abs(node(i + 1, j) - node(i, j)));
      }
      if (j + 1 < ny_) {
        max_step = std::max(max_step, std::abs(node(i, j + 1) - node(i, j)));
      }
    }
  }
  // Each partial derivative of a bilinear patch is bounded by the largest
  // edge difference over the cell size.
  slope_bound_ = std::sqrt(2.0) * max_step / cell_size_;
}

double TerrainField::height(double x, double y) const {
  double gx = std::clamp((x - origin_.x()) / cell_size_, 0.0,
                         static_cast<double>(nx_ - 1));
  double gy = std::clamp((y - origin_.y()) / cell_size_, 0.0,
                         static_cast<double>(ny_ - 1));
  int i = std::min(static_cast<int>(gx), nx_ - 2);
  int j = std::min(static_cast<int>(gy), ny_ - 2);
  double u = gx - i;
  double v = gy - j;
  const double* row0 = &heights_[j * nx_ + i];
  const double* row1 = row0 + nx_;
  return (1.0 - v) * ((1.0 - u) * row0[0] + u * row0[1]) +
         v * ((1.0 - u) * row1[0] + u * row1[1]);
}

namespace {

struct Lattice {
  int n;
  Eigen::Vector2d origin;
};

Lattice make_lattice(double extent, double cell_size) {
  if (!(extent > 0.0) || !(cell_size > 0.0)) {
    throw InvalidArgument("terrain: extent and cell_size must be positive");
  }
  int n = static_cast<int>(std::ceil(extent / cell_size)) + 1;
  n = std::max(n, 2);
  double span = (n - 1) * cell_size;
  return {n, Eigen::Vector2d(-0.5 * span, -0.5 * span)};
}

}  // namespace

TerrainField sample_terrain(uint64_t seed, double extent, double cell_size) {
  Lattice lat = make_lattice(extent, cell_size);
  const int n = lat.n;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, kTerrainMaxHeight);
  std::vector<double> raw(static_cast<size_t>(n) * n);
  for (double& h : raw) h = uni(rng);

  std::vector<double> smooth(raw.size());
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      double sum = 0.0;
      int count = 0;
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          int ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= n || jj >= n) continue;
          sum += raw[jj * n + ii];
          ++count;
        }
      }
      smooth[j * n + i] = std::clamp(sum / count, 0.0, kTerrainMaxHeight);
    }
  }
  return TerrainField(n, n, cell_size, lat.origin, std::move(smooth));
}

TerrainField flat_terrain(double extent, double cell_size, double height) {
  Lattice lat = make_lattice(extent, cell_size);
  return TerrainField(lat.n, lat.n, cell_size, lat.origin,
                      std::vector<double>(static_cast<size_t>(lat.n) * lat.n,
                                          height));
}

}  // namespace dqbench
