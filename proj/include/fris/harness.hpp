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

#include <cstdint>
#include <string>
#include <vector>

#include "fris/link.hpp"

namespace fris {

enum class Model { su_siso, mu_miso };
enum class Scheme { fris, ris };

std::string to_string(Model model);
std::string to_string(Scheme scheme);

/// One experiment description: a scalar cell (elements/antennas/area/SNR)
/// plus optional sweep lists expanded by sweep() as a Cartesian product.
struct ScenarioConfig {
  Model model = Model::su_siso;
  Scheme scheme = Scheme::fris;
  PositionMethod method = PositionMethod::grid;

  int elements = 4;
  int antennas = 8;
  int users = 4;
  double area = 4.0;
  double spacing = 0.0625;  // lambda/2
  double wavelength = 0.125;
  double rician_bs = 3.0;
  double rician_users = 3.0;
  double pathloss_exponent = 2.7;
  PathLossMode pathloss = PathLossMode::normalized;
  double snr_db = 10.0;  // P/noise with noise fixed at 1

  std::vector<double> snr_sweep{10.0};
  std::vector<int> element_sweep;   // empty: use the scalar
  std::vector<int> antenna_sweep;   // empty: use the scalar
  std::vector<double> area_sweep;   // empty: use the scalar

  int trials = 100;
  std::uint64_t seed = 1;
  int grid_x = 10;
  int grid_y = 10;
  PsoConfig pso;
  bool redraw_users = true;
  int threads = 0;  // 0: hardware concurrency
  std::string output = "results.csv";

  // Site geometry (meters); only the angles matter in normalized mode.
  Eigen::Vector2d bs_location{0.0, 0.0};
  Eigen::Vector2d surface_location{20.0, 20.0};
  Eigen::Vector2d user_center{20.0, 0.0};
  double user_radius = 10.0;

  void validate() const;
};

/// Parses a flat `key = value` document ('#' starts a comment). Unknown keys
/// are rejected. Every key has a CLI flag counterpart that overrides it.
ScenarioConfig load_config(const std::string& path);

struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::fris;
  Model model = Model::su_siso;
  int elements = 0;
  int antennas = 0;
  int users = 0;
  double snr_db = 0.0;
  double area = 0.0;
  double rate = 0.0;
  double rate_stderr = 0.0;  // aggregate rows only
  double position_iterations = 0.0;
  double phase_iterations = 0.0;
  double precoder_iterations = 0.0;
  double wall_seconds = 0.0;
  bool flagged = false;
};

/// Record plus the per-stage traces needed for convergence reporting.
struct TrialOutcome {
  TrialRecord record;
  OptimizationHistory history;                       // multi-user stages
  std::vector<double> position_history;              // single-user search
  std::vector<std::vector<double>> element_histories;
};

/// Runs one Monte Carlo trial of the configured pipeline. Deterministic given
/// (config, trial): the substream, angles, user drop and fading draw depend
/// only on the master seed and the trial index, never on the scheme.
TrialRecord run_trial(const ScenarioConfig& cfg, int trial);

TrialOutcome run_trial_full(const ScenarioConfig& cfg, int trial);

/// Cartesian product of the sweep lists x trials, with one aggregate row per
/// cell (trial = -1) carrying the mean rate and its standard error. Writes
/// cfg.output as CSV when non-empty and returns all rows.
std::vector<TrialRecord> sweep(const ScenarioConfig& cfg);

void write_sweep_csv(const std::vector<TrialRecord>& records,
                     const std::string& path);

struct ConvergenceRow {
  int trial = 0;
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::fris;
  Model model = Model::su_siso;
  double snr_db = 0.0;
  std::string stage;  // "position", "phase", "precoder" or "init"
  int step = 0;       // running index within the trial
  int inner_iterations = 0;
  double rate = 0.0;
};

/// Per-iteration objective traces: the position-search best value for the
/// single-user model, per-stage sum-rates for the multi-user model. Writes
/// cfg.output as CSV when non-empty.
std::vector<ConvergenceRow> convergence_report(const ScenarioConfig& cfg);

void write_convergence_csv(const std::vector<ConvergenceRow>& rows,
                           const std::string& path);

}  // namespace fris
