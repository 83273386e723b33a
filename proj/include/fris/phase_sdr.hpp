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

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "fris/precoder_mmse.hpp"

namespace fris {

/// Unit-modulus reflection coefficients, one per element.
using PhaseConfig = Eigen::VectorXcd;

/// Per-user quadratic forms of the phase vector: v^H signal v is the desired
/// stream power and v^H interference v the aggregate interference power.
struct QuadraticForms {
  Eigen::MatrixXcd signal;        // A_k, Hermitian PSD, rank one
  Eigen::MatrixXcd interference;  // B_k = sum over other users, Hermitian PSD
  double noise_power = 0.0;
};

/// Builds the user-k forms so that for every phase vector v,
/// v^H signal v == |g_k^H diag(v) H w_k|^2 (and likewise per interferer).
QuadraticForms build_quadratics(const Eigen::VectorXcd& g_k,
                                const Eigen::MatrixXcd& h, const Precoder& w,
                                Eigen::Index k, double noise_power);

std::vector<QuadraticForms> build_all_quadratics(const ChannelRealization& channels,
                                                 const Precoder& w,
                                                 double noise_power);

/// Relaxed objective sum_k [log2(tr((A_k+B_k)V) + s2) - log2(tr(B_k V) + s2)];
/// equals the true sum-rate at V = v v^H.
double relaxed_sum_rate(const std::vector<QuadraticForms>& forms,
                        const Eigen::MatrixXcd& v);

/// True sum-rate of a unit-modulus phase vector under the same forms.
double sum_rate_from_forms(const std::vector<QuadraticForms>& forms,
                           const Eigen::VectorXcd& phases);

/// Concave minorant of the relaxed objective: the log of each denominator is
/// linearized at the expansion point, leaving sum_k log2(tr(F_k V) + s2)
/// minus a linear term tr(CV) plus a constant. It is tangent at the
/// expansion point and never exceeds the true relaxed objective.
struct ConcaveSurrogate {
  std::vector<Eigen::MatrixXcd> log_terms;  // F_k = A_k + B_k
  double noise_power = 0.0;
  Eigen::MatrixXcd linear_cost;  // C, Hermitian
  double constant = 0.0;

  [[nodiscard]] double value(const Eigen::MatrixXcd& v) const;
  [[nodiscard]] Eigen::MatrixXcd gradient(const Eigen::MatrixXcd& v) const;
};

ConcaveSurrogate sca_surrogate(const std::vector<QuadraticForms>& forms,
                               const Eigen::MatrixXcd& v_prev);

/// Lifted phase matrix V ~ v v^H with unit diagonal, PSD up to -1e-8.
struct LiftedSolution {
  Eigen::MatrixXcd V;
  double objective = 0.0;
  int iterations = 0;
};

class SdpFailure : public SolverFailure {
 public:
  SdpFailure(const std::string& what, LiftedSolution best_iterate)
      : SolverFailure(what), best(std::move(best_iterate)) {}
  LiftedSolution best;
};

/// Frobenius projection onto {V PSD} intersect {diag(V) = 1} by Dykstra's
/// alternating projections (eigenvalue clipping / diagonal reset).
Eigen::MatrixXcd project_elliptope(const Eigen::MatrixXcd& x,
                                   double tol = 1e-9, int max_rounds = 120);

struct SdpOptions {
  int max_iterations = 5000;
  double step_tolerance = 1e-7;  // Frobenius change per accepted step
};

/// Maximizes the concave surrogate over the unit-diagonal PSD matrices with
/// projected gradient ascent. Monotone from the warm start. Throws SdpFailure
/// (carrying the best iterate) if the iteration cap is hit while still moving.
LiftedSolution sdp_subproblem(const ConcaveSurrogate& objective, Eigen::Index n,
                              const Eigen::MatrixXcd& warm_start,
                              const SdpOptions& options = {});

/// Principal eigenpair extraction v = sqrt(lambda1) u1 followed by entrywise
/// unit-modulus projection (entries below 1e-12 magnitude become 1).
PhaseConfig extract_rank_one(const LiftedSolution& lifted);

struct PhaseOptions {
  int max_iterations = 50;
  double convergence = 1e-4;  // Frobenius change of V between outer iterations
  SdpOptions sdp;
};

struct PhaseOptResult {
  PhaseConfig phases;
  std::vector<double> history;  // relaxed objective per outer iteration
  int iterations = 0;
};

/// Successive convex approximation around the lifted incumbent, then rank-one
/// extraction. The returned phases never achieve a lower true sum-rate than
/// the initial ones (the incumbent is kept otherwise).
PhaseOptResult optimize_phases(const ChannelRealization& channels,
                               const Precoder& w, double noise_power,
                               const PhaseConfig& init,
                               const PhaseOptions& options = {});

}  // namespace fris
