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

#include <Eigen/Core>

#include "fris/geometry.hpp"
#include "fris/numerics.hpp"
#include "fris/rng.hpp"

namespace fris {

enum class PathLossMode { normalized, physical };

/// Node placement and large-scale propagation parameters. In normalized mode
/// all path gains are 1 and only the angles matter; physical mode applies
/// (d/d0)^-alpha with the stored coordinates.
struct ScenarioGeometry {
  Eigen::Vector2d bs{0.0, 0.0};
  Eigen::Vector2d surface{20.0, 20.0};
  Eigen::Matrix2Xd users;  // one column per user, required in physical mode
  double wavelength = 0.125;
  double pathloss_exponent = 2.7;
  double reference_distance = 1.0;
  PathLossMode pathloss = PathLossMode::normalized;
};

/// Azimuth/elevation angles of the two hops, all in (0, pi).
struct AngleSet {
  double bs_aod = 0.0;
  double surface_aoa_azimuth = 0.0;
  double surface_aoa_elevation = 0.0;
  Eigen::VectorXd user_aod_azimuth;    // one per user
  Eigen::VectorXd user_aod_elevation;  // one per user
};

/// One small-scale fading realization, drawn once per Monte Carlo trial and
/// held fixed while candidate element positions are evaluated. The scattered
/// component is a stationary complex Gaussian field synthesized as a sum of
/// plane-wave rays with uniform directions, so sampling it at any two points
/// a distance d apart is correlated by J0(2 pi d / lambda) -- the same Jakes
/// law that couples the surface elements -- and every candidate position sees
/// its own (reproducible) fading value.
struct FadingDraw {
  Eigen::Matrix2Xd bs_rays;          // unit direction per ray, BS hop
  Eigen::MatrixXcd bs_amplitudes;    // rays x M, i.i.d. CN(0, 1/rays)
  Eigen::Matrix2Xd user_rays;        // unit direction per ray, user hop
  Eigen::MatrixXcd user_amplitudes;  // rays x K
  double rician_bs = 3.0;
  double rician_users = 3.0;
};

/// Position-dependent channels for one fading draw.
struct ChannelRealization {
  Eigen::MatrixXcd H;           // N x M, BS to surface
  Eigen::MatrixXcd G;           // N x K, surface to users (columns g_k)
  ElementPositions positions;   // positions the channels were built for
};

AngleSet draw_angles(RngStream& rng, int users);

FadingDraw draw_fading(RngStream& rng, Eigen::Index m, Eigen::Index k,
                       double rician_bs, double rician_users, int rays = 64);

/// Samples the scattered field at the given points: out(n, c) is the fading
/// seen by a reflector at t_n for antenna/user c. Unit variance per entry,
/// independent across columns, Jakes-correlated across positions.
Eigen::MatrixXcd sample_fading_field(const Eigen::Matrix2Xd& ray_directions,
                                     const Eigen::MatrixXcd& ray_amplitudes,
                                     const ElementPositions& t,
                                     double wavelength);

/// Uniform-linear-array response at the BS, [a]_m = exp(j (m-1) pi sin(aod)).
Eigen::VectorXcd steer_bs(double aod, Eigen::Index m);

/// Planar response at the surface,
/// [a]_n = exp(j 2pi/lambda (x_n sin(az) cos(el) + y_n sin(el))).
Eigen::VectorXcd steer_fris(double azimuth, double elevation,
                            const ElementPositions& t, double wavelength);

/// Spatial correlation under isotropic scattering,
/// J(i,j) = J0(2 pi |t_i - t_j| / lambda). Real symmetric, unit diagonal.
Eigen::MatrixXd correlation_matrix(const ElementPositions& t, double wavelength);

/// Rician composition of the line-of-sight steering outer product and the
/// correlation-colored fading draw, for both hops. Deterministic given its
/// inputs: the same draw evaluated at different positions only changes the
/// steering phases and the coloring.
ChannelRealization realize_channels(const ScenarioGeometry& geom,
                                    const AngleSet& angles,
                                    const FadingDraw& draw,
                                    const ElementPositions& t, Eigen::Index m,
                                    Eigen::Index k);

/// (d/d0)^-alpha in physical mode, 1 in normalized mode.
double path_gain(const ScenarioGeometry& geom, double distance);

}  // namespace fris
