// SPDX-License-Identifier: Apache-2.0
//
// fris-sim: link-level simulation and optimization for fluid reconfigurable
// intelligent surfaces
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "fris/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace fris {

namespace {

int integer_sqrt(int n) {
  const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  return r * r == n ? r : -1;
}

}  // namespace

SurfaceLayout partition_surface(double a, int n, double d) {
  if (a <= 0.0) throw std::invalid_argument("partition_surface: side must be positive");
  if (d < 0.0) throw std::invalid_argument("partition_surface: spacing must be non-negative");
  if (n < 1) throw std::invalid_argument("partition_surface: element count must be >= 1");
  const int per_side = integer_sqrt(n);
  if (per_side < 0)
    throw std::invalid_argument("partition_surface: element count must be a perfect square");
  const double tile = a / per_side;
  if (tile <= d)
    throw std::invalid_argument("partition_surface: spacing leaves no usable subarea");

  // Symmetric inset keeps subarea centers on the tile-center lattice; with
  // one element there is no spacing constraint and the full square is usable.
  const double inset = (n > 1) ? 0.5 * d : 0.0;

  SurfaceLayout layout;
  layout.side = a;
  layout.spacing = d;
  layout.count = n;
  layout.per_side = per_side;
  layout.subareas.reserve(n);
  for (int row = 0; row < per_side; ++row) {
    for (int col = 0; col < per_side; ++col) {
      const Eigen::Vector2d lo(col * tile + inset, row * tile + inset);
      const Eigen::Vector2d hi((col + 1) * tile - inset, (row + 1) * tile - inset);
      layout.subareas.emplace_back(lo, hi);
    }
  }
  return layout;
}

Eigen::Matrix2Xd candidate_grid(const SurfaceLayout& layout, int n, int gx, int gy) {
  if (n < 0 || n >= layout.count)
    throw std::out_of_range("candidate_grid: subarea index out of range");
  if (gx < 1 || gy < 1)
    throw std::invalid_argument("candidate_grid: grid resolution must be >= 1");
  const Eigen::AlignedBox2d& box = layout.subareas[static_cast<std::size_t>(n)];
  const double dx = (box.max().x() - box.min().x()) / gx;
  const double dy = (box.max().y() - box.min().y()) / gy;
  Eigen::Matrix2Xd points(2, static_cast<Eigen::Index>(gx) * gy);
  Eigen::Index idx = 0;
  for (int iy = 0; iy < gy; ++iy)
    for (int ix = 0; ix < gx; ++ix)
      points.col(idx++) = Eigen::Vector2d(box.min().x() + (ix + 0.5) * dx,
                                          box.min().y() + (iy + 0.5) * dy);
  return points;
}

bool spacing_ok(const ElementPositions& t, double d) {
  const double limit = d * d * (1.0 - 1e-12);
  for (Eigen::Index i = 0; i < t.cols(); ++i)
    for (Eigen::Index j = i + 1; j < t.cols(); ++j)
      if ((t.col(i) - t.col(j)).squaredNorm() < limit) return false;
  return true;
}

Eigen::Vector2d project_to_subarea(const Eigen::Vector2d& p,
                                   const SurfaceLayout& layout, int n) {
  if (n < 0 || n >= layout.count)
    throw std::out_of_range("project_to_subarea: subarea index out of range");
  const Eigen::AlignedBox2d& box = layout.subareas[static_cast<std::size_t>(n)];
  return p.cwiseMax(box.min()).cwiseMin(box.max());
}

ElementPositions ris_baseline_positions(const SurfaceLayout& layout) {
  ElementPositions t(2, layout.count);
  for (int n = 0; n < layout.count; ++n)
    t.col(n) = layout.subareas[static_cast<std::size_t>(n)].center();
  return t;
}

}  // namespace fris
