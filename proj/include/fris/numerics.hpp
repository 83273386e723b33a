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

#include <complex>

#include <Eigen/Core>

namespace fris {

using Complex = std::complex<double>;

/// Bessel function of the first kind, order zero. Power series below |x| < 8,
/// backward recurrence in the midrange, Hankel asymptotic expansion for large
/// arguments. Absolute accuracy better than 1e-10 on |x| <= 50.
double bessel_j0(double x);

/// True when m(i,j) == conj(m(j,i)) for all entries within `tol` (absolute).
bool is_hermitian(const Eigen::MatrixXcd& m, double tol = 1e-12);

/// Eigen-pairs of a Hermitian matrix, eigenvalues sorted descending.
struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;   // descending
  Eigen::MatrixXcd eigenvectors; // unitary, columns match eigenvalues
};

/// Throws std::invalid_argument if the input is not Hermitian within 1e-12.
EigenDecomposition hermitian_eig(const Eigen::MatrixXcd& m);

/// Linear map L with L L^H = J (eigenvalues floored at zero before the square
/// root), so applying L to unit-variance i.i.d. input produces samples with
/// covariance J.
Eigen::MatrixXcd coloring_operator(const Eigen::MatrixXcd& correlation);

}  // namespace fris
