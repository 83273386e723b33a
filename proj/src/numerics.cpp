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

#include "fris/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

namespace fris {

namespace {

// Alternating power series sum_k (-1)^k (x/2)^(2k) / (k!)^2. Accurate in
// double up to |x| ~ 8 where the leading terms are still moderate.
double j0_series(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= 64; ++k) {
    term *= -q / (static_cast<double>(k) * static_cast<double>(k));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// Miller backward recurrence normalized with J0 + 2 sum_{k even} J_{2k} = 1.
double j0_recurrence(double x) {
  int start = static_cast<int>(1.25 * x + 40.0);
  if (start % 2 != 0) ++start;
  double fkp1 = 0.0;
  double fk = 1e-280;
  double norm = 0.0;
  double f0 = 0.0;
  for (int k = start; k >= 1; --k) {
    const double fkm1 = (2.0 * k / x) * fk - fkp1;
    fkp1 = fk;
    fk = fkm1;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * fkm1;
    if (k - 1 == 0) f0 = fkm1;
    if (std::abs(fk) > 1e250) {
      fk *= 1e-250;
      fkp1 *= 1e-250;
      norm *= 1e-250;
    }
  }
  return f0 / (norm + f0);
}

// Hankel expansion J0(x) ~ sqrt(2/(pi x)) [P cos(x - pi/4) - Q sin(x - pi/4)].
// Truncation error is negligible for x >= 60.
double j0_asymptotic(double x) {
  // P = 1 - a2/x^2 + a4/x^4 - ..., Q = -a1/x + a3/x^3 - ...
  double a = 1.0;      // a_k = prod (2j-1)^2 / (k! 8^k)
  double p = 1.0;
  double q = 0.0;
  double xp = 1.0;     // x^k
  int sign_p = -1;
  int sign_q = -1;
  for (int k = 1; k <= 24; ++k) {
    const double odd = 2.0 * k - 1.0;
    a *= odd * odd / (8.0 * k);
    xp *= x;
    const double term = a / xp;
    if (term < 1e-19) break;
    if (k % 2 == 1) {
      q += sign_q * term;
      sign_q = -sign_q;
    } else {
      p += sign_p * term;
      sign_p = -sign_p;
    }
  }
  const double chi = x - 0.25 * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) *
         (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j0(double x) {
  if (!std::isfinite(x)) throw std::domain_error("bessel_j0: non-finite argument");
  const double ax = std::abs(x);
  if (ax < 8.0) return j0_series(ax);
  if (ax < 60.0) return j0_recurrence(ax);
  return j0_asymptotic(ax);
}

bool is_hermitian(const Eigen::MatrixXcd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i <= j; ++i)
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
  return true;
}

EigenDecomposition hermitian_eig(const Eigen::MatrixXcd& m) {
  if (!is_hermitian(m))
    throw std::invalid_argument("hermitian_eig: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eig: eigensolver failed to converge");
  // Stable descending order so ties keep the solver's pairing (the identity
  // maps to the identity).
  const Eigen::Index n = m.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return solver.eigenvalues()(a) > solver.eigenvalues()(b);
  });
  EigenDecomposition d;
  d.eigenvalues.resize(n);
  d.eigenvectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d.eigenvalues(i) = solver.eigenvalues()(order[static_cast<std::size_t>(i)]);
    d.eigenvectors.col(i) = solver.eigenvectors().col(order[static_cast<std::size_t>(i)]);
  }
  return d;
}

Eigen::MatrixXcd coloring_operator(const Eigen::MatrixXcd& correlation) {
  const EigenDecomposition d = hermitian_eig(correlation);
  return d.eigenvectors * d.eigenvalues.cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

}  // namespace fris
