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

#include "fris/precoder_mmse.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/QR>

namespace fris {

Eigen::MatrixXcd effective_channels(const ChannelRealization& channels,
                                    const Eigen::VectorXcd& phases) {
  if (phases.size() != channels.H.rows() || channels.G.rows() != channels.H.rows())
    throw std::invalid_argument("effective_channels: dimension mismatch");
  // row k = g_k^H diag(theta) H
  return channels.G.adjoint() * phases.asDiagonal() * channels.H;
}

double mse(const Eigen::RowVectorXcd& h, const Eigen::VectorXcd& w, Complex u,
           double q) {
  if (q <= 0.0) throw std::invalid_argument("mse: received power must be positive");
  const Complex hw = h * w;
  return 1.0 - 2.0 * std::real(std::conj(u) * hw) + std::norm(u) * q;
}

Eigen::VectorXd received_powers(const Eigen::MatrixXcd& heff,
                                const Eigen::MatrixXcd& w, double noise) {
  const Eigen::MatrixXcd s = heff * w;  // K x K, s(k, l) = h_k w_l
  return s.rowwise().squaredNorm().array() + noise;
}

Eigen::VectorXcd update_receiver_scalars(const Eigen::MatrixXcd& heff,
                                         const Eigen::MatrixXcd& w, double noise) {
  if (noise <= 0.0)
    throw std::invalid_argument("update_receiver_scalars: noise must be positive");
  const Eigen::MatrixXcd s = heff * w;
  const Eigen::VectorXd q = s.rowwise().squaredNorm().array() + noise;
  return s.diagonal().array() / q.array().cast<Complex>();
}

Eigen::VectorXd update_weights(const Eigen::VectorXd& mse_values) {
  if ((mse_values.array() <= 0.0).any())
    throw std::invalid_argument("update_weights: MSE must be positive");
  return mse_values.cwiseInverse();
}

MmseState mmse_state(const Eigen::MatrixXcd& heff, const Eigen::MatrixXcd& w,
                     double noise) {
  MmseState state;
  state.receiver = update_receiver_scalars(heff, w, noise);
  const Eigen::VectorXd q = received_powers(heff, w, noise);
  state.mse_values.resize(heff.rows());
  for (Eigen::Index k = 0; k < heff.rows(); ++k)
    state.mse_values(k) = mse(heff.row(k), w.col(k), state.receiver(k), q(k));
  state.weights = update_weights(state.mse_values);
  return state;
}

namespace {

Eigen::MatrixXcd precoder_at(const Eigen::MatrixXcd& gram,
                             const Eigen::MatrixXcd& rhs, double mu) {
  const Eigen::Index m = gram.rows();
  if (mu > 0.0) {
    return (gram + mu * Eigen::MatrixXcd::Identity(m, m)).llt().solve(rhs);
  }
  // mu = 0 can be rank-deficient; take the minimum-norm solution.
  return gram.completeOrthogonalDecomposition().solve(rhs);
}

}  // namespace

Precoder update_precoder(const Eigen::MatrixXcd& heff,
                         const Eigen::VectorXcd& receiver,
                         const Eigen::VectorXd& weights, double power,
                         double noise) {
  (void)noise;
  if ((weights.array() <= 0.0).any())
    throw std::invalid_argument("update_precoder: weights must be positive");
  if (power < 0.0) throw std::invalid_argument("update_precoder: negative power");
  const Eigen::Index k = heff.rows();
  const Eigen::Index m = heff.cols();

  const Eigen::VectorXcd scale =
      (weights.array() * receiver.array().abs2()).cast<Complex>();
  const Eigen::MatrixXcd gram = heff.adjoint() * (scale.asDiagonal() * heff);
  Eigen::MatrixXcd rhs(m, k);
  for (Eigen::Index j = 0; j < k; ++j)
    rhs.col(j) = weights(j) * receiver(j) * heff.row(j).adjoint();

  Precoder out;
  out.budget = power;
  if (rhs.norm() == 0.0 || power == 0.0) {
    out.W = Eigen::MatrixXcd::Zero(m, k);
    return out;
  }

  Eigen::MatrixXcd w = precoder_at(gram, rhs, 0.0);
  if (w.squaredNorm() <= power * (1.0 + 1e-12)) {
    out.W = w;
    return out;
  }

  // The total power is strictly decreasing in mu; bracket then bisect.
  double lo = 0.0;
  double hi = std::max(gram.trace().real() / m, 1e-12);
  int evals = 0;
  while (precoder_at(gram, rhs, hi).squaredNorm() > power) {
    lo = hi;
    hi *= 4.0;
    if (++evals > 200) throw SolverFailure("update_precoder: cannot bracket multiplier");
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (precoder_at(gram, rhs, mid).squaredNorm() > power)
      lo = mid;
    else
      hi = mid;
  }
  out.W = precoder_at(gram, rhs, hi);
  return out;
}

double sum_rate_from_effective(const Eigen::MatrixXcd& heff,
                               const Eigen::MatrixXcd& w, double noise) {
  const Eigen::MatrixXcd s = heff * w;
  double rate = 0.0;
  for (Eigen::Index k = 0; k < heff.rows(); ++k) {
    const double signal = std::norm(s(k, k));
    const double interference = s.row(k).squaredNorm() - signal;
    rate += std::log2(1.0 + signal / (interference + noise));
  }
  return rate;
}

Precoder matched_filter_precoder(const Eigen::MatrixXcd& heff, double power) {
  const Eigen::Index k = heff.rows();
  const Eigen::Index m = heff.cols();
  Precoder out;
  out.budget = power;
  out.W = Eigen::MatrixXcd::Zero(m, k);
  const double per_user = power / static_cast<double>(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double norm = heff.row(j).norm();
    if (norm > 0.0) out.W.col(j) = std::sqrt(per_user) * heff.row(j).adjoint() / norm;
  }
  return out;
}

WmmseResult wmmse_loop(const ChannelRealization& channels,
                       const Eigen::VectorXcd& phases, double power,
                       double noise, const Eigen::MatrixXcd& w_init,
                       const WmmseOptions& options) {
  const Eigen::MatrixXcd heff = effective_channels(channels, phases);
  if (w_init.squaredNorm() > power * (1.0 + 1e-9) + 1e-12)
    throw std::invalid_argument("wmmse_loop: infeasible initial precoder");

  WmmseResult result;
  result.precoder.W = w_init;
  result.precoder.budget = power;
  double rate = sum_rate_from_effective(heff, result.precoder.W, noise);
  result.rate_history.push_back(rate);

  for (int it = 1; it <= options.max_iterations; ++it) {
    const MmseState state = mmse_state(heff, result.precoder.W, noise);
    result.precoder =
        update_precoder(heff, state.receiver, state.weights, power, noise);
    const double next = sum_rate_from_effective(heff, result.precoder.W, noise);
    result.rate_history.push_back(next);
    result.iterations = it;
    if (std::abs(next - rate) < options.rate_tolerance) {
      rate = next;
      break;
    }
    rate = next;
  }
  return result;
}

}  // namespace fris
