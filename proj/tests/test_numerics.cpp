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
#include <limits>
#include <numbers>

#include <doctest.h>

#include <Eigen/SVD>

#include "fris/numerics.hpp"
#include "fris/rng.hpp"
#include "oracles.hpp"

using fris::Complex;

TEST_SUITE("numerics") {

TEST_CASE("bessel_j0 at zero") { CHECK(fris::bessel_j0(0.0) == 1.0); }

TEST_CASE("bessel_j0 first root") {
  const double root = oracle::bessel_j0_root(2.0, 3.0);
  CHECK(std::abs(root - 2.404826) < 1e-5);
  CHECK(std::abs(fris::bessel_j0(2.404826)) < 1e-5);
  CHECK(std::abs(fris::bessel_j0(root)) < 1e-10);
}

TEST_CASE("bessel_j0 at pi") {
  CHECK(fris::bessel_j0(std::numbers::pi) ==
        doctest::Approx(-0.304242).epsilon(1e-5));
  CHECK(std::abs(fris::bessel_j0(std::numbers::pi) -
                 oracle::bessel_j0_series(std::numbers::pi)) < 1e-12);
}

TEST_CASE("bessel_j0 agrees with the series oracle on [0, 50]") {
  for (int i = 0; i < 100; ++i) {
    const double x = 50.0 * (i + 0.5) / 100.0;
    CHECK(std::abs(fris::bessel_j0(x) - oracle::bessel_j0_series(x)) < 1e-10);
  }
  // even function, and points straddling the series/recurrence switchover
  for (double x : {7.999, 8.0, 8.001, 49.9, 50.0}) {
    CHECK(std::abs(fris::bessel_j0(x) - oracle::bessel_j0_series(x)) < 1e-10);
    CHECK(fris::bessel_j0(-x) == fris::bessel_j0(x));
  }
  // the series oracle loses precision past ~50; check the asymptotic branch
  // against the standard library instead
  for (double x : {59.9, 60.0, 60.1, 120.0, 283.0})
    CHECK(std::abs(fris::bessel_j0(x) - std::cyl_bessel_j(0.0, x)) < 1e-9);
}

TEST_CASE("bessel_j0 rejects non-finite input") {
  CHECK_THROWS_AS(fris::bessel_j0(std::numeric_limits<double>::quiet_NaN()),
                  std::domain_error);
  CHECK_THROWS_AS(fris::bessel_j0(std::numeric_limits<double>::infinity()),
                  std::domain_error);
}

TEST_CASE("hermitian_eig identity and diagonal") {
  const auto id = fris::hermitian_eig(Eigen::MatrixXcd::Identity(3, 3));
  CHECK(id.eigenvalues.isApprox(Eigen::Vector3d::Ones()));

  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
  d.diagonal() << Complex(3), Complex(1), Complex(2);
  const auto dec = fris::hermitian_eig(d);
  CHECK(dec.eigenvalues(0) == doctest::Approx(3.0));
  CHECK(dec.eigenvalues(1) == doctest::Approx(2.0));
  CHECK(dec.eigenvalues(2) == doctest::Approx(1.0));
}

TEST_CASE("hermitian_eig round trip on random matrices") {
  fris::RngStream rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.uniform() * 15.0);
    const Eigen::MatrixXcd m = oracle::random_hermitian(n, rng);
    const auto dec = fris::hermitian_eig(m);
    const Eigen::MatrixXcd rebuilt = dec.eigenvectors *
                                     dec.eigenvalues.asDiagonal() *
                                     dec.eigenvectors.adjoint();
    CHECK((rebuilt - m).norm() / m.norm() < 1e-9);
    CHECK((dec.eigenvectors.adjoint() * dec.eigenvectors -
           Eigen::MatrixXcd::Identity(n, n))
              .norm() < 1e-9);
    for (Eigen::Index i = 1; i < n; ++i)
      CHECK(dec.eigenvalues(i) <= dec.eigenvalues(i - 1));
  }
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  m(0, 1) = Complex(1.0, 0.0);
  m(1, 0) = Complex(0.5, 0.0);
  CHECK_THROWS_AS(fris::hermitian_eig(m), std::invalid_argument);
}

TEST_CASE("coloring_operator trivial maps") {
  const Eigen::MatrixXcd id = fris::coloring_operator(Eigen::MatrixXcd::Identity(3, 3));
  CHECK(id.isApprox(Eigen::MatrixXcd::Identity(3, 3), 1e-12));

  Eigen::MatrixXcd ones = Eigen::MatrixXcd::Ones(2, 2);
  const Eigen::MatrixXcd map = fris::coloring_operator(ones);
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(map);
  CHECK(svd.singularValues()(0) > 1e-6);
  CHECK(svd.singularValues()(1) < 1e-9);
  CHECK((map * map.adjoint() - ones).norm() < 1e-12);
}

TEST_CASE("coloring reproduces Jakes correlation on a 3-element line") {
  // three colinear points, half-wavelength apart
  const double lambda = 0.125;
  Eigen::Matrix2Xd t(2, 3);
  t << 0.0, lambda / 2.0, lambda, 0.0, 0.0, 0.0;
  Eigen::MatrixXd j(3, 3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      j(a, b) = fris::bessel_j0(2.0 * std::numbers::pi *
                                (t.col(a) - t.col(b)).norm() / lambda);
  const Eigen::MatrixXcd map = fris::coloring_operator(j.cast<Complex>());

  fris::RngStream rng(5);
  Eigen::MatrixXcd cov = Eigen::MatrixXcd::Zero(3, 3);
  const int samples = 100000;
  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXcd x = map * fris::complex_gaussian(rng, 3, 1);
    cov += x * x.adjoint();
  }
  cov /= samples;
  CHECK((cov - j.cast<Complex>()).norm() / j.norm() < 0.05);
}

TEST_CASE("complex_gaussian moments and determinism") {
  fris::RngStream rng(42);
  const int n = 1000000;
  Complex mean(0, 0);
  double var = 0.0;
  for (int i = 0; i < n; ++i) {
    const Complex z = rng.complex_normal();
    mean += z;
    var += std::norm(z);
  }
  mean /= static_cast<double>(n);
  var /= static_cast<double>(n);
  CHECK(std::abs(mean) < 0.01);
  CHECK(var == doctest::Approx(1.0).epsilon(0.02));

  fris::RngStream a(7), b(7);
  CHECK(fris::complex_gaussian(a, 4, 3) == fris::complex_gaussian(b, 4, 3));
}

TEST_CASE("rng substreams differ and reproduce") {
  fris::RngStream master(123);
  fris::RngStream s1 = master.substream(1);
  fris::RngStream s2 = master.substream(2);
  CHECK(s1.next_u64() != s2.next_u64());
  fris::RngStream again = fris::RngStream(123).substream(1);
  fris::RngStream s1b = fris::RngStream(123).substream(1);
  CHECK(again.next_u64() == s1b.next_u64());
  for (int i = 0; i < 1000; ++i) {
    const double u = master.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

}  // TEST_SUITE
