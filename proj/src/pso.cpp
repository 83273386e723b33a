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

#include "fris/pso.hpp"

#include <limits>
#include <stdexcept>

namespace fris {

void PsoConfig::validate() const {
  if (swarm < 1) throw std::invalid_argument("PsoConfig: swarm size must be >= 1");
  if (iterations < 0) throw std::invalid_argument("PsoConfig: iterations must be >= 0");
  if (inertia < 0.0 || inertia > 1.0)
    throw std::invalid_argument("PsoConfig: inertia must be in [0, 1]");
  if (cognitive < 0.0 || social < 0.0)
    throw std::invalid_argument("PsoConfig: learning factors must be non-negative");
  if (penalty < 0.0) throw std::invalid_argument("PsoConfig: penalty must be >= 0");
}

Eigen::Matrix2Xd velocity_update(const Particle& p,
                                 const Eigen::Matrix2Xd& global_best,
                                 const PsoConfig& cfg, RngStream& rng) {
  const double r1 = rng.uniform();
  const double r2 = rng.uniform();
  return cfg.inertia * p.velocity +
         cfg.cognitive * r1 * (p.best_position - p.position) +
         cfg.social * r2 * (global_best - p.position);
}

Eigen::Matrix2Xd position_update(const Eigen::Matrix2Xd& position,
                                 const Eigen::Matrix2Xd& velocity,
                                 const PsoBounds& bounds) {
  Eigen::Matrix2Xd next = position + velocity;
  for (Eigen::Index c = 0; c < next.cols(); ++c) {
    const Eigen::AlignedBox2d& box = bounds[static_cast<std::size_t>(c)];
    next.col(c) = next.col(c).cwiseMax(box.min()).cwiseMin(box.max());
  }
  return next;
}

double penalized_fitness(double raw, const Eigen::Matrix2Xd& t,
                         double min_spacing, double penalty) {
  const double limit = min_spacing * min_spacing * (1.0 - 1e-12);
  int violations = 0;
  for (Eigen::Index i = 0; i < t.cols(); ++i)
    for (Eigen::Index j = i + 1; j < t.cols(); ++j)
      if ((t.col(i) - t.col(j)).squaredNorm() < limit) ++violations;
  return raw - penalty * violations;
}

PsoResult pso_optimize(const std::function<double(const Eigen::Matrix2Xd&)>& objective,
                       const PsoBounds& bounds, const PsoConfig& cfg,
                       const std::optional<Eigen::Matrix2Xd>& warm_start) {
  cfg.validate();
  if (bounds.empty()) throw std::invalid_argument("pso_optimize: empty bounds");
  const Eigen::Index points = static_cast<Eigen::Index>(bounds.size());
  RngStream rng(cfg.seed);

  std::vector<Particle> swarm(static_cast<std::size_t>(cfg.swarm));
  Eigen::Matrix2Xd global_best(2, points);
  double global_value = -std::numeric_limits<double>::infinity();

  for (std::size_t i = 0; i < swarm.size(); ++i) {
    Particle& p = swarm[i];
    p.position.resize(2, points);
    p.velocity.resize(2, points);
    for (Eigen::Index c = 0; c < points; ++c) {
      const Eigen::AlignedBox2d& box = bounds[static_cast<std::size_t>(c)];
      const Eigen::Vector2d extent = box.max() - box.min();
      p.position(0, c) = rng.uniform(box.min().x(), box.max().x());
      p.position(1, c) = rng.uniform(box.min().y(), box.max().y());
      p.velocity(0, c) = rng.uniform(-0.5 * extent.x(), 0.5 * extent.x());
      p.velocity(1, c) = rng.uniform(-0.5 * extent.y(), 0.5 * extent.y());
    }
    if (i == 0 && warm_start) p.position = *warm_start;
    p.best_position = p.position;
    p.best_value = objective(p.position);
    if (p.best_value > global_value) {
      global_value = p.best_value;
      global_best = p.best_position;
    }
  }

  PsoResult result;
  result.history.reserve(static_cast<std::size_t>(cfg.iterations));
  for (int it = 0; it < cfg.iterations; ++it) {
    for (Particle& p : swarm) {
      p.velocity = velocity_update(p, global_best, cfg, rng);
      p.position = position_update(p.position, p.velocity, bounds);
      const double value = objective(p.position);
      if (value > p.best_value) {
        p.best_value = value;
        p.best_position = p.position;
      }
      if (value > global_value) {
        global_value = value;
        global_best = p.position;
      }
    }
    result.history.push_back(global_value);
  }

  result.best_position = global_best;
  result.best_value = global_value;
  return result;
}

}  // namespace fris
