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

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "fris/rng.hpp"

namespace fris {

struct PsoConfig {
  int swarm = 30;
  int iterations = 50;
  double inertia = 0.7;
  double cognitive = 1.5;  // pull toward the particle's own best
  double social = 1.5;     // pull toward the swarm best
  double penalty = 1e4;    // spacing-violation penalty weight
  std::uint64_t seed = 0;

  void validate() const;
};

/// A particle position/velocity is a 2xP matrix: one column per optimized
/// point, bounded by one rectangle per point.
using PsoBounds = std::vector<Eigen::AlignedBox2d>;

struct Particle {
  Eigen::Matrix2Xd position;
  Eigen::Matrix2Xd velocity;
  Eigen::Matrix2Xd best_position;
  double best_value = 0.0;
};

/// v <- w v + c1 r1 (own best - t) + c2 r2 (swarm best - t) with fresh scalar
/// r1, r2 per call.
Eigen::Matrix2Xd velocity_update(const Particle& p,
                                 const Eigen::Matrix2Xd& global_best,
                                 const PsoConfig& cfg, RngStream& rng);

/// t <- clamp(t + v) onto the per-point rectangles.
Eigen::Matrix2Xd position_update(const Eigen::Matrix2Xd& position,
                                 const Eigen::Matrix2Xd& velocity,
                                 const PsoBounds& bounds);

/// raw - penalty * (number of point pairs closer than min_spacing).
double penalized_fitness(double raw, const Eigen::Matrix2Xd& t,
                         double min_spacing, double penalty);

struct PsoResult {
  Eigen::Matrix2Xd best_position;
  double best_value = 0.0;
  std::vector<double> history;  // swarm best per iteration, non-decreasing
};

/// Maximize `objective` over the bounded rectangles. When a warm start is
/// given it seeds the first particle, so the result can never fall below the
/// warm-start fitness.
PsoResult pso_optimize(const std::function<double(const Eigen::Matrix2Xd&)>& objective,
                       const PsoBounds& bounds, const PsoConfig& cfg,
                       const std::optional<Eigen::Matrix2Xd>& warm_start = std::nullopt);

}  // namespace fris
