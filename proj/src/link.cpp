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

#include "fris/link.hpp"

#include <cmath>
#include <stdexcept>

namespace fris {

PhaseConfig su_siso_optimal_phases(const Eigen::VectorXcd& h,
                                   const Eigen::VectorXcd& g) {
  if (h.size() != g.size())
    throw std::invalid_argument("su_siso_optimal_phases: size mismatch");
  PhaseConfig phases(h.size());
  // The cascade term is conj(g_n) theta_n h_n; cancelling its phase needs
  // theta_n = exp(-j(arg h_n - arg g_n)).
  for (Eigen::Index n = 0; n < h.size(); ++n)
    phases(n) = std::polar(1.0, std::arg(g(n)) - std::arg(h(n)));
  return phases;
}

double su_siso_rate(const SuSisoInstance& inst, const PhaseConfig& phases) {
  if (inst.noise <= 0.0) throw std::invalid_argument("su_siso_rate: noise <= 0");
  if (phases.size() != inst.h.size() || inst.g.size() != inst.h.size())
    throw std::invalid_argument("su_siso_rate: size mismatch");
  const Complex cascade = inst.g.adjoint() * phases.asDiagonal() * inst.h;
  return std::log2(1.0 + inst.power * std::norm(cascade) / inst.noise);
}

double su_siso_aligned_rate(const SuSisoInstance& inst) {
  const double gain =
      (inst.h.cwiseAbs().array() * inst.g.cwiseAbs().array()).sum();
  return std::log2(1.0 + inst.power * gain * gain / inst.noise);
}

Eigen::VectorXd mu_miso_sinr(const MuMisoInstance& inst) {
  const Eigen::MatrixXcd heff = effective_channels(inst.channels, inst.phases);
  const Eigen::MatrixXcd s = heff * inst.precoder.W;
  Eigen::VectorXd sinr(s.rows());
  for (Eigen::Index k = 0; k < s.rows(); ++k) {
    const double signal = std::norm(s(k, k));
    const double interference = s.row(k).squaredNorm() - signal;
    sinr(k) = signal / (interference + inst.noise);
  }
  return sinr;
}

double sum_rate(const MuMisoInstance& inst) {
  return (mu_miso_sinr(inst).array() + 1.0).log2().sum();
}

double sum_rate(const ChannelRealization& channels, const PhaseConfig& phases,
                const Precoder& precoder, double noise) {
  return sum_rate_from_effective(effective_channels(channels, phases),
                                 precoder.W, noise);
}

namespace {

// Single-user rate at positions t: synthesize the channels and align phases.
double su_rate_at(const ScenarioGeometry& geom, const AngleSet& angles,
                  const FadingDraw& draw, const ElementPositions& t,
                  double power, double noise) {
  const ChannelRealization ch = realize_channels(geom, angles, draw, t, 1, 1);
  SuSisoInstance inst{ch.H.col(0), ch.G.col(0), power, noise};
  return su_siso_aligned_rate(inst);
}

double mu_rate_at(const ScenarioGeometry& geom, const AngleSet& angles,
                  const FadingDraw& draw, const ElementPositions& t,
                  Eigen::Index m, Eigen::Index k, const PhaseConfig& phases,
                  const Precoder& precoder, double noise) {
  const ChannelRealization ch = realize_channels(geom, angles, draw, t, m, k);
  return sum_rate(ch, phases, precoder, noise);
}

}  // namespace

SuPositionResult optimize_positions_su(const SurfaceLayout& layout,
                                       const ScenarioGeometry& geom,
                                       const AngleSet& angles,
                                       const FadingDraw& draw, double power,
                                       double noise,
                                       const PositionSearchOptions& options) {
  SuPositionResult result;
  result.positions = ris_baseline_positions(layout);
  result.rate = su_rate_at(geom, angles, draw, result.positions, power, noise);

  for (int n = 0; n < layout.count; ++n) {
    if (options.method == PositionMethod::grid) {
      Eigen::Matrix2Xd candidates =
          candidate_grid(layout, n, options.grid_x, options.grid_y);
      candidates.conservativeResize(Eigen::NoChange, candidates.cols() + 1);
      candidates.col(candidates.cols() - 1) = result.positions.col(n);
      ElementPositions trial = result.positions;
      for (Eigen::Index c = 0; c < candidates.cols(); ++c) {
        trial.col(n) = candidates.col(c);
        const double rate = su_rate_at(geom, angles, draw, trial, power, noise);
        if (rate > result.rate) {
          result.rate = rate;
          result.positions.col(n) = candidates.col(c);
        }
      }
      result.history.push_back(result.rate);
      result.element_histories.push_back({result.rate});
    } else {
      ElementPositions trial = result.positions;
      const auto objective = [&](const Eigen::Matrix2Xd& p) {
        trial.col(n) = p.col(0);
        const double rate = su_rate_at(geom, angles, draw, trial, power, noise);
        return penalized_fitness(rate, trial, layout.spacing,
                                 options.pso.penalty);
      };
      PsoConfig cfg = options.pso;
      cfg.seed = options.pso.seed + static_cast<std::uint64_t>(n);
      const PsoBounds bounds{layout.subareas[static_cast<std::size_t>(n)]};
      const PsoResult swarm = pso_optimize(
          objective, bounds, cfg,
          Eigen::Matrix2Xd(result.positions.col(n)));
      result.positions.col(n) = swarm.best_position.col(0);
      result.rate = su_rate_at(geom, angles, draw, result.positions, power, noise);
      result.history.insert(result.history.end(), swarm.history.begin(),
                            swarm.history.end());
      result.element_histories.push_back(swarm.history);
    }
  }
  return result;
}

MuPositionResult optimize_positions_mu(const SurfaceLayout& layout,
                                       const ScenarioGeometry& geom,
                                       const AngleSet& angles,
                                       const FadingDraw& draw,
                                       const PhaseConfig& phases,
                                       const Precoder& precoder, double noise,
                                       const PositionSearchOptions& options,
                                       const ElementPositions& start) {
  const Eigen::Index m = precoder.W.rows();
  const Eigen::Index k = precoder.W.cols();
  MuPositionResult result;
  result.positions = start;
  result.rate =
      mu_rate_at(geom, angles, draw, start, m, k, phases, precoder, noise);

  const int passes =
      options.method == PositionMethod::grid ? std::max(options.max_passes, 1) : 1;
  for (int pass = 0; pass < passes; ++pass) {
    bool moved = false;
    for (int n = 0; n < layout.count; ++n) {
      ++result.iterations;
      if (options.method == PositionMethod::grid) {
        const Eigen::Matrix2Xd candidates =
            candidate_grid(layout, n, options.grid_x, options.grid_y);
        ElementPositions trial = result.positions;
        for (Eigen::Index c = 0; c < candidates.cols(); ++c) {
          trial.col(n) = candidates.col(c);
          const double rate = mu_rate_at(geom, angles, draw, trial, m, k,
                                         phases, precoder, noise);
          if (rate > result.rate) {
            result.rate = rate;
            result.positions.col(n) = candidates.col(c);
            moved = true;
          }
        }
      } else {
        ElementPositions trial = result.positions;
        const auto objective = [&](const Eigen::Matrix2Xd& p) {
          trial.col(n) = p.col(0);
          const double rate = mu_rate_at(geom, angles, draw, trial, m, k,
                                         phases, precoder, noise);
          return penalized_fitness(rate, trial, layout.spacing,
                                   options.pso.penalty);
        };
        PsoConfig cfg = options.pso;
        cfg.seed = options.pso.seed + static_cast<std::uint64_t>(n);
        const PsoBounds bounds{layout.subareas[static_cast<std::size_t>(n)]};
        const PsoResult swarm = pso_optimize(
            objective, bounds, cfg, Eigen::Matrix2Xd(result.positions.col(n)));
        if (swarm.best_value > result.rate) {
          result.positions.col(n) = swarm.best_position.col(0);
          result.rate = mu_rate_at(geom, angles, draw, result.positions, m, k,
                                   phases, precoder, noise);
          moved = true;
        }
      }
    }
    if (!moved) break;
  }
  return result;
}

AlternatingResult alternating_optimize(const SurfaceLayout& layout,
                                       const ScenarioGeometry& geom,
                                       const AngleSet& angles,
                                       const FadingDraw& draw, double power,
                                       double noise,
                                       const AlternatingConfig& config) {
  const Eigen::Index m = draw.surface_bs.cols();
  const Eigen::Index k = draw.surface_users.cols();

  AlternatingResult result;
  result.positions = ris_baseline_positions(layout);
  result.phases = PhaseConfig::Ones(layout.count);

  ChannelRealization channels =
      realize_channels(geom, angles, draw, result.positions, m, k);
  result.precoder = matched_filter_precoder(
      effective_channels(channels, result.phases), power);
  result.rate = sum_rate(channels, result.phases, result.precoder, noise);
  result.history.sum_rate.push_back(result.rate);

  for (int cycle = 0; cycle < config.max_cycles; ++cycle) {
    const double cycle_start = result.rate;

    if (config.optimize_positions) {
      const MuPositionResult pos = optimize_positions_mu(
          layout, geom, angles, draw, result.phases, result.precoder, noise,
          config.position, result.positions);
      if (pos.rate >= result.rate) {
        result.positions = pos.positions;
        result.rate = pos.rate;
        channels = realize_channels(geom, angles, draw, result.positions, m, k);
      }
      result.history.position_iterations.push_back(pos.iterations);
    } else {
      result.history.position_iterations.push_back(0);
    }
    result.history.sum_rate.push_back(result.rate);

    try {
      const PhaseOptResult phase = optimize_phases(
          channels, result.precoder, noise, result.phases, config.phase);
      const double rate =
          sum_rate(channels, phase.phases, result.precoder, noise);
      if (rate >= result.rate) {
        result.phases = phase.phases;
        result.rate = rate;
      }
      result.history.phase_iterations.push_back(phase.iterations);
    } catch (const SolverFailure&) {
      result.flagged = true;
      result.history.phase_iterations.push_back(config.phase.max_iterations);
    }
    result.history.sum_rate.push_back(result.rate);

    try {
      const WmmseResult wmmse = wmmse_loop(channels, result.phases, power,
                                           noise, result.precoder.W,
                                           config.wmmse);
      const double rate = sum_rate(channels, result.phases, wmmse.precoder, noise);
      if (rate >= result.rate) {
        result.precoder = wmmse.precoder;
        result.rate = rate;
      }
      result.history.precoder_iterations.push_back(wmmse.iterations);
    } catch (const SolverFailure&) {
      result.flagged = true;
      result.history.precoder_iterations.push_back(config.wmmse.max_iterations);
    }
    result.history.sum_rate.push_back(result.rate);

    if (result.rate - cycle_start < config.tolerance) break;
  }
  return result;
}

}  // namespace fris
