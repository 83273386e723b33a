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
#include <numbers>

#include <doctest.h>

#include "fris/link.hpp"
#include "fris/phase_sdr.hpp"
#include "oracles.hpp"

using fris::Complex;

namespace {

Eigen::MatrixXcd random_complex(Eigen::Index r, Eigen::Index c, fris::RngStream& rng) {
  Eigen::MatrixXcd m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = rng.complex_normal();
  return m;
}

struct Instance {
  fris::ChannelRealization channels;
  fris::Precoder precoder;
  double noise = 1.0;
};

Instance random_instance(Eigen::Index n, Eigen::Index m, Eigen::Index k,
                         double power, fris::RngStream& rng) {
  Instance inst;
  inst.channels.H = random_complex(n, m, rng);
  inst.channels.G = random_complex(n, k, rng);
  Eigen::MatrixXcd w = random_complex(m, k, rng);
  w *= std::sqrt(power) / w.norm();
  inst.precoder = fris::Precoder{w, power};
  return inst;
}

// exhaustive unit-modulus grid search, `points` phases per element
double grid_best_rate(const std::vector<fris::QuadraticForms>& forms,
                      Eigen::Index n, int points) {
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  Eigen::VectorXcd v(n);
  double best = -1.0;
  while (true) {
    for (Eigen::Index i = 0; i < n; ++i)
      v(i) = std::polar(1.0, 2.0 * std::numbers::pi *
                                 idx[static_cast<std::size_t>(i)] / points);
    best = std::max(best, fris::sum_rate_from_forms(forms, v));
    Eigen::Index carry = 0;
    while (carry < n && ++idx[static_cast<std::size_t>(carry)] == points) {
      idx[static_cast<std::size_t>(carry)] = 0;
      ++carry;
    }
    if (carry == n) break;
  }
  return best;
}

}  // namespace

TEST_SUITE("phase_sdr") {

TEST_CASE("quadratic forms match the direct cascade power") {
  fris::RngStream rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = random_instance(4, 3, 2, 4.0, rng);
    for (Eigen::Index k = 0; k < 2; ++k) {
      const auto forms = fris::build_quadratics(inst.channels.G.col(k),
                                                inst.channels.H, inst.precoder,
                                                k, inst.noise);
      const Eigen::VectorXcd v = oracle::random_unit_modulus(4, rng);
      const double quad = (v.adjoint() * forms.signal * v)(0).real();
      const Complex direct = inst.channels.G.col(k).adjoint() *
                             v.asDiagonal() * inst.channels.H *
                             inst.precoder.W.col(k);
      CHECK(quad == doctest::Approx(std::norm(direct)).epsilon(1e-10));

      double interference = 0.0;
      for (Eigen::Index j = 0; j < 2; ++j) {
        if (j == k) continue;
        const Complex other = inst.channels.G.col(k).adjoint() *
                              v.asDiagonal() * inst.channels.H *
                              inst.precoder.W.col(j);
        interference += std::norm(other);
      }
      const double quad_b = (v.adjoint() * forms.interference * v)(0).real();
      CHECK(quad_b == doctest::Approx(interference).epsilon(1e-10));
    }
  }
}

TEST_CASE("quadratic forms degenerate cases") {
  fris::RngStream rng(2);
  auto inst = random_instance(3, 2, 2, 1.0, rng);
  inst.precoder.W.col(0).setZero();
  const auto forms = fris::build_quadratics(inst.channels.G.col(0),
                                            inst.channels.H, inst.precoder, 0,
                                            inst.noise);
  CHECK(forms.signal.norm() == 0.0);

  const auto single = random_instance(3, 2, 1, 1.0, rng);
  const auto f1 = fris::build_quadratics(single.channels.G.col(0),
                                         single.channels.H, single.precoder, 0,
                                         single.noise);
  CHECK(f1.interference.norm() == 0.0);
}

TEST_CASE("surrogate is tangent and never above the relaxed objective") {
  fris::RngStream rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const auto inst = random_instance(4, 3, 3, 5.0, rng);
    const auto forms = fris::build_all_quadratics(inst.channels, inst.precoder,
                                                  inst.noise);
    const Eigen::VectorXcd v0 = oracle::random_unit_modulus(4, rng);
    const Eigen::MatrixXcd expansion = v0 * v0.adjoint();
    const auto surrogate = fris::sca_surrogate(forms, expansion);

    CHECK(surrogate.value(expansion) ==
          doctest::Approx(fris::relaxed_sum_rate(forms, expansion)).epsilon(1e-12));

    for (int p = 0; p < 20; ++p) {
      const Eigen::MatrixXcd dir = oracle::random_hermitian(4, rng);
      const Eigen::MatrixXcd psd =
          fris::project_elliptope(expansion + 0.3 * dir);
      CHECK(surrogate.value(psd) <=
            fris::relaxed_sum_rate(forms, psd) + 1e-9);
    }
  }
}

TEST_CASE("single-user surrogate has no linear part") {
  fris::RngStream rng(4);
  const auto inst = random_instance(3, 2, 1, 2.0, rng);
  const auto forms = fris::build_all_quadratics(inst.channels, inst.precoder,
                                                inst.noise);
  const Eigen::VectorXcd v0 = Eigen::VectorXcd::Ones(3);
  const auto surrogate = fris::sca_surrogate(forms, v0 * v0.adjoint());
  CHECK(surrogate.linear_cost.norm() == 0.0);
  CHECK(surrogate.log_terms.size() == 1);
}

TEST_CASE("sdp subproblem: dimension one is forced") {
  fris::ConcaveSurrogate s;
  s.linear_cost = -Eigen::MatrixXcd::Ones(1, 1);  // maximize tr(V)
  const auto sol = fris::sdp_subproblem(s, 1, Eigen::MatrixXcd::Ones(1, 1));
  CHECK(sol.V(0, 0) == Complex(1, 0));
  CHECK(sol.objective == doctest::Approx(1.0));
}

TEST_CASE("sdp subproblem: two-dimensional linear closed form") {
  fris::RngStream rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::MatrixXcd c = oracle::random_hermitian(2, rng);
    fris::ConcaveSurrogate s;
    s.linear_cost = -c;
    const auto sol =
        fris::sdp_subproblem(s, 2, Eigen::MatrixXcd::Identity(2, 2));
    const double expected = c(0, 0).real() + c(1, 1).real() + 2.0 * std::abs(c(0, 1));
    CHECK(sol.objective == doctest::Approx(expected).epsilon(1e-4));
    CHECK(std::abs(sol.V(0, 0) - Complex(1, 0)) < 1e-6);
    CHECK(std::abs(sol.V(1, 1) - Complex(1, 0)) < 1e-6);
    if (std::abs(c(0, 1)) > 1e-3)
      CHECK(std::abs(sol.V(0, 1) - c(0, 1) / std::abs(c(0, 1))) < 1e-3);
    const auto dec = fris::hermitian_eig(0.5 * (sol.V + sol.V.adjoint()));
    CHECK(dec.eigenvalues.minCoeff() >= -1e-8);
  }
}

TEST_CASE("sdp subproblem: identity cost accepts any feasible point") {
  fris::ConcaveSurrogate s;
  s.linear_cost = -Eigen::MatrixXcd::Identity(3, 3);
  const auto sol = fris::sdp_subproblem(s, 3, Eigen::MatrixXcd::Identity(3, 3));
  CHECK(sol.objective == doctest::Approx(3.0).epsilon(1e-8));
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(sol.V(i, i) - Complex(1, 0)) < 1e-6);
}

TEST_CASE("elliptope projection output is feasible") {
  fris::RngStream rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXcd x = 2.0 * oracle::random_hermitian(5, rng);
    const Eigen::MatrixXcd v = fris::project_elliptope(x);
    for (int i = 0; i < 5; ++i) CHECK(std::abs(v(i, i) - Complex(1, 0)) < 1e-8);
    const auto dec = fris::hermitian_eig(0.5 * (v + v.adjoint()));
    CHECK(dec.eigenvalues.minCoeff() >= -1e-8);
  }
}

TEST_CASE("rank-one extraction recovers an exact lift") {
  fris::RngStream rng(7);
  const Eigen::VectorXcd v = oracle::random_unit_modulus(5, rng);
  fris::LiftedSolution lifted;
  lifted.V = v * v.adjoint();
  const auto phases = fris::extract_rank_one(lifted);
  // equal up to a global unit-modulus rotation
  CHECK(std::abs((phases.adjoint() * v)(0)) == doctest::Approx(5.0).epsilon(1e-9));
  for (Eigen::Index i = 0; i < 5; ++i)
    CHECK(std::abs(phases(i)) == doctest::Approx(1.0).epsilon(1e-12));

  fris::LiftedSolution degenerate;
  degenerate.V = Eigen::MatrixXcd::Identity(2, 2);
  const auto tie = fris::extract_rank_one(degenerate);
  for (Eigen::Index i = 0; i < 2; ++i)
    CHECK(std::abs(tie(i)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("relaxed objective upper-bounds the extracted rate") {
  fris::RngStream rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = random_instance(4, 3, 2, 8.0, rng);
    const auto forms = fris::build_all_quadratics(inst.channels, inst.precoder,
                                                  inst.noise);
    const Eigen::VectorXcd init = Eigen::VectorXcd::Ones(4);
    try {
      const auto result = fris::optimize_phases(inst.channels, inst.precoder,
                                                inst.noise, init);
      CHECK(result.history.back() >=
            fris::sum_rate_from_forms(forms, result.phases) - 1e-9);
    } catch (const fris::SdpFailure& failure) {
      // the propagated failure must still carry a feasible best iterate
      for (Eigen::Index i = 0; i < 4; ++i)
        CHECK(std::abs(failure.best.V(i, i) - Complex(1, 0)) < 1e-6);
      const auto dec = fris::hermitian_eig(
          0.5 * (failure.best.V + failure.best.V.adjoint()));
      CHECK(dec.eigenvalues.minCoeff() >= -1e-8);
    }
  }
}

TEST_CASE("single-user single-antenna phases match the closed-form alignment") {
  fris::RngStream rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    fris::ChannelRealization ch;
    ch.H = random_complex(4, 1, rng);
    ch.G = random_complex(4, 1, rng);
    const double power = 10.0;
    fris::Precoder w{Eigen::MatrixXcd::Constant(1, 1, std::sqrt(power)), power};

    const auto result = fris::optimize_phases(ch, w, 1.0,
                                              Eigen::VectorXcd::Ones(4));
    const double sdr_rate = fris::sum_rate(
        fris::MuMisoInstance{ch, result.phases, w, 1.0});
    const double aligned = fris::su_siso_rate(
        fris::SuSisoInstance{ch.H.col(0), ch.G.col(0), power, 1.0},
        fris::su_siso_optimal_phases(ch.H.col(0), ch.G.col(0)));
    CHECK(sdr_rate >= aligned - 1e-3);
    CHECK(sdr_rate <= aligned + 1e-9);
  }
}

TEST_CASE("an already optimal rank-one start converges immediately") {
  fris::RngStream rng(10);
  fris::ChannelRealization ch;
  ch.H = random_complex(3, 1, rng);
  ch.G = random_complex(3, 1, rng);
  const double power = 4.0;
  fris::Precoder w{Eigen::MatrixXcd::Constant(1, 1, std::sqrt(power)), power};
  const auto aligned = fris::su_siso_optimal_phases(ch.H.col(0), ch.G.col(0));

  const auto result = fris::optimize_phases(ch, w, 1.0, aligned);
  CHECK(result.iterations <= 2);
  const double before = fris::sum_rate(fris::MuMisoInstance{ch, aligned, w, 1.0});
  const double after =
      fris::sum_rate(fris::MuMisoInstance{ch, result.phases, w, 1.0});
  CHECK(after == doctest::Approx(before).epsilon(1e-9));
}

TEST_CASE("two-element two-user phases beat the exhaustive grid") {
  fris::RngStream rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const auto inst = random_instance(2, 4, 2, 10.0, rng);
    const auto forms = fris::build_all_quadratics(inst.channels, inst.precoder,
                                                  inst.noise);
    const auto result = fris::optimize_phases(inst.channels, inst.precoder,
                                              inst.noise,
                                              Eigen::VectorXcd::Ones(2));
    const double mine = fris::sum_rate_from_forms(forms, result.phases);
    const double grid = grid_best_rate(forms, 2, 64);
    CHECK(mine >= grid - 0.05);
  }
}

TEST_CASE("optimized phases stay unit-modulus and never lose rate") {
  fris::RngStream rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = random_instance(5, 3, 3, 6.0, rng);
    const Eigen::VectorXcd init = oracle::random_unit_modulus(5, rng);
    const auto result = fris::optimize_phases(inst.channels, inst.precoder,
                                              inst.noise, init);
    for (Eigen::Index i = 0; i < 5; ++i)
      CHECK(std::abs(std::abs(result.phases(i)) - 1.0) < 1e-9);
    const double before =
        fris::sum_rate(fris::MuMisoInstance{inst.channels, init,
                                            inst.precoder, inst.noise});
    const double after =
        fris::sum_rate(fris::MuMisoInstance{inst.channels, result.phases,
                                            inst.precoder, inst.noise});
    CHECK(after >= before - 1e-9);
    for (std::size_t i = 1; i < result.history.size(); ++i)
      CHECK(result.history[i] >= result.history[i - 1] - 1e-9);
  }
}

}  // TEST_SUITE
