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

#include "fris/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fris {

AngleSet draw_angles(RngStream& rng, int users) {
  AngleSet angles;
  angles.bs_aod = rng.uniform(0.0, std::numbers::pi);
  angles.surface_aoa_azimuth = rng.uniform(0.0, std::numbers::pi);
  angles.surface_aoa_elevation = rng.uniform(0.0, std::numbers::pi);
  angles.user_aod_azimuth.resize(users);
  angles.user_aod_elevation.resize(users);
  for (int k = 0; k < users; ++k) {
    angles.user_aod_azimuth(k) = rng.uniform(0.0, std::numbers::pi);
    angles.user_aod_elevation(k) = rng.uniform(0.0, std::numbers::pi);
  }
  return angles;
}

FadingDraw draw_fading(RngStream& rng, Eigen::Index n, Eigen::Index m,
                       Eigen::Index k, double rician_bs, double rician_users) {
  FadingDraw draw;
  draw.surface_bs = complex_gaussian(rng, n, m);
  draw.surface_users = complex_gaussian(rng, n, k);
  draw.rician_bs = rician_bs;
  draw.rician_users = rician_users;
  return draw;
}

Eigen::VectorXcd steer_bs(double aod, Eigen::Index m) {
  if (m < 1) throw std::invalid_argument("steer_bs: antenna count must be >= 1");
  const double step = std::numbers::pi * std::sin(aod);
  Eigen::VectorXcd a(m);
  for (Eigen::Index i = 0; i < m; ++i) a(i) = std::polar(1.0, i * step);
  return a;
}

Eigen::VectorXcd steer_fris(double azimuth, double elevation,
                            const ElementPositions& t, double wavelength) {
  if (wavelength <= 0.0)
    throw std::invalid_argument("steer_fris: wavelength must be positive");
  const double wave_number = 2.0 * std::numbers::pi / wavelength;
  const double cx = std::sin(azimuth) * std::cos(elevation);
  const double cy = std::sin(elevation);
  Eigen::VectorXcd a(t.cols());
  for (Eigen::Index n = 0; n < t.cols(); ++n)
    a(n) = std::polar(1.0, wave_number * (t(0, n) * cx + t(1, n) * cy));
  return a;
}

Eigen::MatrixXd correlation_matrix(const ElementPositions& t, double wavelength) {
  if (wavelength <= 0.0)
    throw std::invalid_argument("correlation_matrix: wavelength must be positive");
  const Eigen::Index n = t.cols();
  Eigen::MatrixXd j = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = a + 1; b < n; ++b) {
      const double dist = (t.col(a) - t.col(b)).norm();
      j(a, b) = j(b, a) =
          bessel_j0(2.0 * std::numbers::pi * dist / wavelength);
    }
  return j;
}

double path_gain(const ScenarioGeometry& geom, double distance) {
  if (geom.pathloss == PathLossMode::normalized) return 1.0;
  return std::pow(distance / geom.reference_distance, -geom.pathloss_exponent);
}

ChannelRealization realize_channels(const ScenarioGeometry& geom,
                                    const AngleSet& angles,
                                    const FadingDraw& draw,
                                    const ElementPositions& t, Eigen::Index m,
                                    Eigen::Index k) {
  const Eigen::Index n = t.cols();
  if (draw.surface_bs.rows() < n || draw.surface_bs.cols() < m ||
      draw.surface_users.rows() < n || draw.surface_users.cols() < k)
    throw std::invalid_argument("realize_channels: fading draw too small");
  if (angles.user_aod_azimuth.size() < k || angles.user_aod_elevation.size() < k)
    throw std::invalid_argument("realize_channels: missing user angles");
  if (geom.pathloss == PathLossMode::physical && geom.users.cols() < k)
    throw std::invalid_argument("realize_channels: missing user locations");

  const Eigen::MatrixXd corr = correlation_matrix(t, geom.wavelength);
  const Eigen::MatrixXcd color = coloring_operator(corr.cast<Complex>());

  const double rho_b = draw.rician_bs;
  const double los_b = std::sqrt(rho_b / (rho_b + 1.0));
  const double nlos_b = std::sqrt(1.0 / (rho_b + 1.0));
  const double gain_b = path_gain(geom, (geom.surface - geom.bs).norm());

  ChannelRealization ch;
  ch.positions = t;
  const Eigen::VectorXcd a_r = steer_fris(angles.surface_aoa_azimuth,
                                          angles.surface_aoa_elevation, t,
                                          geom.wavelength);
  ch.H = std::sqrt(gain_b) *
         (los_b * (a_r * steer_bs(angles.bs_aod, m).adjoint()) +
          nlos_b * (color * draw.surface_bs.topLeftCorner(n, m)));

  const double rho_k = draw.rician_users;
  const double los_k = std::sqrt(rho_k / (rho_k + 1.0));
  const double nlos_k = std::sqrt(1.0 / (rho_k + 1.0));
  ch.G.resize(n, k);
  for (Eigen::Index u = 0; u < k; ++u) {
    const double gain_u =
        geom.pathloss == PathLossMode::physical
            ? path_gain(geom, (geom.users.col(u) - geom.surface).norm())
            : 1.0;
    const Eigen::VectorXcd a_u = steer_fris(angles.user_aod_azimuth(u),
                                            angles.user_aod_elevation(u), t,
                                            geom.wavelength);
    ch.G.col(u) = std::sqrt(gain_u) *
                  (los_k * a_u +
                   nlos_k * (color * draw.surface_users.col(u).head(n)));
  }
  return ch;
}

}  // namespace fris
