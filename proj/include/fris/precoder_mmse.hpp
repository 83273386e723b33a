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

#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "fris/channel.hpp"

namespace fris {

/// BS precoding matrix (one column per user) under a total power budget.
struct Precoder {
  Eigen::MatrixXcd W;     // M x K
  double budget = 0.0;    // P, linear

  [[nodiscard]] double used_power() const { return W.squaredNorm(); }
};

class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Effective downlink rows h_k = g_k^H diag(theta) H, stacked as a K x M matrix.
Eigen::MatrixXcd effective_channels(const ChannelRealization& channels,
                                    const Eigen::VectorXcd& phases);

/// Scalar mean square error 1 - 2 Re{u* h w} + |u|^2 q, where q is the total
/// received power (all streams plus noise) at the user.
double mse(const Eigen::RowVectorXcd& h, const Eigen::VectorXcd& w, Complex u,
           double q);

/// Per-user total received powers sum_l |h_k w_l|^2 + noise.
Eigen::VectorXd received_powers(const Eigen::MatrixXcd& heff,
                                const Eigen::MatrixXcd& w, double noise);

/// MMSE receiver scalars u_k = h_k w_k / (sum_l |h_k w_l|^2 + noise).
Eigen::VectorXcd update_receiver_scalars(const Eigen::MatrixXcd& heff,
                                         const Eigen::MatrixXcd& w, double noise);

/// Optimal auxiliary weights 1 / e_k. Throws std::invalid_argument when any
/// e_k <= 0 (that indicates a broken upstream MSE).
Eigen::VectorXd update_weights(const Eigen::VectorXd& mse_values);

/// Weighted-MMSE precoder step: the KKT closed form
/// w_k = weight_k u_k (sum_j weight_j |u_j|^2 h_j^H h_j + mu I)^-1 h_k^H with
/// the smallest mu >= 0 that satisfies the power budget, found by bisection.
Precoder update_precoder(const Eigen::MatrixXcd& heff,
                         const Eigen::VectorXcd& receiver,
                         const Eigen::VectorXd& weights, double power,
                         double noise);

/// Receiver scalars, weights and MSE values of one WMMSE pass.
struct MmseState {
  Eigen::VectorXcd receiver;
  Eigen::VectorXd weights;
  Eigen::VectorXd mse_values;
};

MmseState mmse_state(const Eigen::MatrixXcd& heff, const Eigen::MatrixXcd& w,
                     double noise);

struct WmmseOptions {
  int max_iterations = 100;
  double rate_tolerance = 1e-4;  // bits/s/Hz change between full cycles
};

struct WmmseResult {
  Precoder precoder;
  std::vector<double> rate_history;  // sum-rate after each full cycle
  int iterations = 0;
};

/// Sum-rate from effective rows and a precoding matrix.
double sum_rate_from_effective(const Eigen::MatrixXcd& heff,
                               const Eigen::MatrixXcd& w, double noise);

/// Matched-filter columns h_k^H scaled to equal per-user power P/K.
Precoder matched_filter_precoder(const Eigen::MatrixXcd& heff, double power);

/// Block-coordinate WMMSE loop (receiver scalars, weights, precoder) from a
/// feasible start; the sum-rate history is non-decreasing.
WmmseResult wmmse_loop(const ChannelRealization& channels,
                       const Eigen::VectorXcd& phases, double power,
                       double noise, const Eigen::MatrixXcd& w_init,
                       const WmmseOptions& options = {});

}  // namespace fris
