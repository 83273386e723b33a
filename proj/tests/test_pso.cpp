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

#include <cmath>

#include <doctest.h>

#include "fris/pso.hpp"

namespace {

Eigen::AlignedBox2d unit_box(double lo, double hi) {
  return {Eigen::Vector2d(lo, lo), Eigen::Vector2d(hi, hi)};
}

}  // namespace

TEST_SUITE("pso") {

TEST_CASE("velocity update attraction terms vanish at the shared best") {
  fris::RngStream rng(1);
  fris::PsoConfig cfg;
  fris::Particle p;
  p.position = Eigen::Matrix2Xd::Constant(2, 1, 0.5);
  p.velocity = Eigen::Matrix2Xd::Zero(2, 1);
  p.best_position = p.position;
  const auto v = fris::velocity_update(p, p.position, cfg, rng);
  CHECK(v.norm() == 0.0);
}

TEST_CASE("velocity update keeps pure inertia") {
  fris::RngStream rng(1);
  fris::PsoConfig cfg;
  cfg.inertia = 1.0;
  cfg.cognitive = 0.0;
  cfg.social = 0.0;
  fris::Particle p;
  p.position = Eigen::Matrix2Xd::Random(2, 3);
  p.velocity = Eigen::Matrix2Xd::Random(2, 3);
  p.best_position = Eigen::Matrix2Xd::Random(2, 3);
  const auto v = fris::velocity_update(p, Eigen::Matrix2Xd::Random(2, 3), cfg, rng);
  CHECK(v == p.velocity);
}

TEST_CASE("velocity update uses one scalar per attraction term") {
  fris::RngStream rng(7);
  fris::PsoConfig cfg;
  cfg.inertia = 0.5;
  cfg.cognitive = 0.0;
  cfg.social = 2.0;
  fris::Particle p;
  p.position = Eigen::Matrix2Xd::Zero(2, 2);
  p.velocity = Eigen::Matrix2Xd::Zero(2, 2);
  p.best_position = p.position;
  Eigen::Matrix2Xd target(2, 2);
  target << 1.0, -2.0, 0.5, 3.0;

  double lo = 1e9, hi = -1e9;
  for (int i = 0; i < 200; ++i) {
    const auto v = fris::velocity_update(p, target, cfg, rng);
    // v = c2 r2 target: every coordinate shares the same scalar
    const double r2 = v(0, 0) / (cfg.social * target(0, 0));
    for (Eigen::Index c = 0; c < 2; ++c)
      for (Eigen::Index r = 0; r < 2; ++r)
        CHECK(v(r, c) == doctest::Approx(cfg.social * r2 * target(r, c)));
    CHECK(r2 >= 0.0);
    CHECK(r2 <= 1.0);
    lo = std::min(lo, r2);
    hi = std::max(hi, r2);
  }
  CHECK(lo < 0.2);
  CHECK(hi > 0.8);
}

TEST_CASE("position update clamps to the bounds") {
  const fris::PsoBounds bounds{unit_box(0.0, 2.0)};
  Eigen::Matrix2Xd t(2, 1), v(2, 1);
  t << 1.0, 1.0;
  v << 0.5, 0.0;
  CHECK(fris::position_update(t, v, bounds).col(0).isApprox(Eigen::Vector2d(1.5, 1.0)));
  t << 1.9, 1.0;
  CHECK(fris::position_update(t, v, bounds).col(0).isApprox(Eigen::Vector2d(2.0, 1.0)));
  v.setZero();
  CHECK(fris::position_update(t, v, bounds) == t);
}

TEST_CASE("penalized fitness counts violating pairs") {
  Eigen::Matrix2Xd ok(2, 2);
  ok << 0.0, 1.0, 0.0, 0.0;
  CHECK(fris::penalized_fitness(8.0, ok, 0.0625, 1e3) == 8.0);

  Eigen::Matrix2Xd bad(2, 2);
  bad << 0.0, 0.01, 0.0, 0.0;
  CHECK(fris::penalized_fitness(8.0, bad, 0.0625, 1e3) == doctest::Approx(-992.0));

  Eigen::Matrix2Xd three = Eigen::Matrix2Xd::Zero(2, 3);  // three coincident
  CHECK(fris::penalized_fitness(1.0, three, 0.1, 10.0) == doctest::Approx(-29.0));
}

TEST_CASE("feasible points dominate violating ones when the penalty is large") {
  fris::RngStream rng(3);
  const double power = 100.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform() * 4.0);
    // per-element cascade gains are bounded by 1 in this toy bound
    const double rate_bound = std::log2(1.0 + power * n * n);
    const double tau = rate_bound + 1.0;
    const double feasible_rate = rng.uniform(0.0, rate_bound);
    const double violating_rate = rng.uniform(0.0, rate_bound);
    Eigen::Matrix2Xd spread(2, n), clumped(2, n);
    for (int i = 0; i < n; ++i) {
      spread.col(i) = Eigen::Vector2d(i, 0.0);
      clumped.col(i) = Eigen::Vector2d(0.001 * i, 0.0);
    }
    const double f_ok = fris::penalized_fitness(feasible_rate, spread, 0.5, tau);
    const double f_bad = fris::penalized_fitness(violating_rate, clumped, 0.5, tau);
    CHECK(f_ok > f_bad);
  }
}

TEST_CASE("pso finds the peak of a concave bowl") {
  const Eigen::Vector2d center(1.3, 0.4);
  const auto objective = [&](const Eigen::Matrix2Xd& t) {
    return -(t.col(0) - center).squaredNorm();
  };
  fris::PsoConfig cfg;
  cfg.iterations = 200;
  cfg.seed = 5;
  const auto result = fris::pso_optimize(objective, {unit_box(0.0, 2.0)}, cfg);
  CHECK((result.best_position.col(0) - center).norm() < 1e-2);
  CHECK(result.best_value == objective(result.best_position));
}

TEST_CASE("degenerate swarm stays at the warm start") {
  const auto objective = [](const Eigen::Matrix2Xd& t) { return t(0, 0); };
  fris::PsoConfig cfg;
  cfg.swarm = 1;
  cfg.inertia = 0.0;
  cfg.cognitive = 0.0;
  cfg.social = 0.0;
  cfg.iterations = 10;
  Eigen::Matrix2Xd start(2, 1);
  start << 0.7, 0.7;
  const auto result = fris::pso_optimize(objective, {unit_box(0.0, 2.0)}, cfg, start);
  CHECK(result.best_position == start);
}

TEST_CASE("constant objective yields a constant history") {
  const auto objective = [](const Eigen::Matrix2Xd&) { return 3.5; };
  fris::PsoConfig cfg;
  cfg.iterations = 20;
  const auto result = fris::pso_optimize(objective, {unit_box(0.0, 1.0)}, cfg);
  for (double h : result.history) CHECK(h == 3.5);
  CHECK(result.history.size() == 20);
}

TEST_CASE("history is monotone, in bounds, and reproducible") {
  const auto objective = [](const Eigen::Matrix2Xd& t) {
    return std::sin(3.0 * t(0, 0)) + std::cos(2.0 * t(1, 0));
  };
  fris::PsoConfig cfg;
  cfg.seed = 11;
  const fris::PsoBounds bounds{unit_box(-1.0, 4.0)};
  const auto a = fris::pso_optimize(objective, bounds, cfg);
  const auto b = fris::pso_optimize(objective, bounds, cfg);
  CHECK(a.best_position == b.best_position);
  CHECK(a.history == b.history);
  for (std::size_t i = 1; i < a.history.size(); ++i)
    CHECK(a.history[i] >= a.history[i - 1]);
  CHECK(bounds[0].contains(a.best_position.col(0)));
}

}  // TEST_SUITE
