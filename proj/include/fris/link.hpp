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

#include <vector>

#include <Eigen/Core>

#include "fris/channel.hpp"
#include "fris/geometry.hpp"
#include "fris/phase_sdr.hpp"
#include "fris/precoder_mmse.hpp"
#include "fris/pso.hpp"

namespace fris {

/// Single-user single-antenna link through the surface.
struct SuSisoInstance {
  Eigen::VectorXcd h;  // BS to surface
  Eigen::VectorXcd g;  // surface to user
  double power = 1.0;
  double noise = 1.0;
};

/// Multi-user downlink through the surface.
struct MuMisoInstance {
  ChannelRealization channels;
  PhaseConfig phases;
  Precoder precoder;
  double noise = 1.0;
};

/// Phase cancellation per element so that g^H diag(theta) h = sum |h_n||g_n|.
PhaseConfig su_siso_optimal_phases(const Eigen::VectorXcd& h,
                                   const Eigen::VectorXcd& g);

double su_siso_rate(const SuSisoInstance& inst, const PhaseConfig& phases);

/// Rate with the optimal phases, log2(1 + P (sum |h_n||g_n|)^2 / noise).
double su_siso_aligned_rate(const SuSisoInstance& inst);

Eigen::VectorXd mu_miso_sinr(const MuMisoInstance& inst);

double sum_rate(const MuMisoInstance& inst);

double sum_rate(const ChannelRealization& channels, const PhaseConfig& phases,
                const Precoder& precoder, double noise);

enum class PositionMethod { grid, pso };

struct PositionSearchOptions {
  PositionMethod method = PositionMethod::grid;
  int grid_x = 10;
  int grid_y = 10;
  int max_passes = 5;  // grid sweeps until no element moves (multi-user step)
  PsoConfig pso;
};

struct SuPositionResult {
  ElementPositions positions;
  double rate = 0.0;
  std::vector<double> history;  // best rate per search iteration, non-decreasing
  std::vector<std::vector<double>> element_histories;  // one curve per element
};

/// Sequential per-element position search for the single-user link. Each
/// candidate is scored with the optimal phases on fully re-synthesized
/// channels; the incumbent is always a candidate, so the result never falls
/// below the fixed-center baseline.
SuPositionResult optimize_positions_su(const SurfaceLayout& layout,
                                       const ScenarioGeometry& geom,
                                       const AngleSet& angles,
                                       const FadingDraw& draw, double power,
                                       double noise,
                                       const PositionSearchOptions& options);

struct MuPositionResult {
  ElementPositions positions;
  double rate = 0.0;
  int iterations = 0;  // per-element selections performed
};

/// Per-element position search for the multi-user link with phases and
/// precoder frozen. Grid mode sweeps the elements repeatedly until a full
/// pass leaves every element in place (or max_passes is reached).
MuPositionResult optimize_positions_mu(const SurfaceLayout& layout,
                                       const ScenarioGeometry& geom,
                                       const AngleSet& angles,
                                       const FadingDraw& draw,
                                       const PhaseConfig& phases,
                                       const Precoder& precoder, double noise,
                                       const PositionSearchOptions& options,
                                       const ElementPositions& start);

/// Sum-rate after every stage plus per-cycle stage iteration counts.
struct OptimizationHistory {
  std::vector<double> sum_rate;  // non-decreasing, first entry = initial rate
  std::vector<int> position_iterations;
  std::vector<int> phase_iterations;
  std::vector<int> precoder_iterations;
};

struct AlternatingConfig {
  bool optimize_positions = true;  // false reproduces the fixed-position system
  int max_cycles = 30;
  double tolerance = 1e-3;  // bits/s/Hz improvement per cycle
  PositionSearchOptions position;
  PhaseOptions phase;
  WmmseOptions wmmse;
};

struct AlternatingResult {
  ElementPositions positions;
  PhaseConfig phases;
  Precoder precoder;
  OptimizationHistory history;
  double rate = 0.0;
  bool flagged = false;  // a sub-solver failed and its incumbent was kept
};

/// Alternating position / phase / precoder optimization of the multi-user
/// sum-rate, every stage safeguarded against decreasing the objective.
/// Starts from subarea centers, all-ones phases and a matched-filter precoder.
AlternatingResult alternating_optimize(const SurfaceLayout& layout,
                                       const ScenarioGeometry& geom,
                                       const AngleSet& angles,
                                       const FadingDraw& draw, double power,
                                       double noise,
                                       const AlternatingConfig& config);

}  // namespace fris
