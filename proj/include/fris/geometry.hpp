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

#pragma once

#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace fris {

/// Element positions as columns of a 2xN matrix (meters).
using ElementPositions = Eigen::Matrix2Xd;

/// Partition of a square surface into per-element roaming rectangles.
struct SurfaceLayout {
  double side = 0.0;     // A, full aperture edge length
  double spacing = 0.0;  // D, minimum element spacing
  int count = 0;         // N, number of elements (perfect square)
  int per_side = 0;      // sqrt(N)
  std::vector<Eigen::AlignedBox2d> subareas;  // usable rectangle per element
};

/// Tile the A x A square into sqrt(n) x sqrt(n) cells and inset each usable
/// rectangle by d/2 so any two points of distinct subareas are >= d apart.
/// A single-element surface keeps the whole square.
/// Throws std::invalid_argument when n is not a perfect square and
/// std::invalid_argument when a/sqrt(n) <= d leaves no usable area.
SurfaceLayout partition_surface(double a, int n, double d);

/// gx*gy candidate points on a uniform cell-center lattice inside subarea n.
/// Odd gx, gy place a candidate exactly at the subarea center.
Eigen::Matrix2Xd candidate_grid(const SurfaceLayout& layout, int n, int gx, int gy);

/// True when every pairwise distance is >= d (boundary inclusive, with a
/// relative rounding guard).
bool spacing_ok(const ElementPositions& t, double d);

/// Coordinate-wise clamp of p onto subarea n. Idempotent.
Eigen::Vector2d project_to_subarea(const Eigen::Vector2d& p,
                                   const SurfaceLayout& layout, int n);

/// Fixed-position reference configuration: every element at its subarea
/// center, i.e. a uniform lattice with pitch a/sqrt(n).
ElementPositions ris_baseline_positions(const SurfaceLayout& layout);

}  // namespace fris
