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

#include "fris/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace fris {

std::string to_string(Model model) {
  return model == Model::su_siso ? "su-siso" : "mu-miso";
}

std::string to_string(Scheme scheme) {
  return scheme == Scheme::fris ? "fris" : "ris";
}

void ScenarioConfig::validate() const {
  if (elements < 1 || antennas < 1 || users < 1 || trials < 1)
    throw std::invalid_argument("config: counts must be >= 1");
  if (snr_sweep.empty()) throw std::invalid_argument("config: empty SNR list");
  if (grid_x < 1 || grid_y < 1)
    throw std::invalid_argument("config: grid resolution must be >= 1");
  if (area <= 0.0 || spacing < 0.0 || wavelength <= 0.0)
    throw std::invalid_argument("config: invalid surface dimensions");
  pso.validate();
}

namespace {

void run_parallel(int count, int threads, const std::function<void(int)>& body) {
  int workers = threads > 0 ? threads
                            : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int i = w; i < count; i += workers) body(i);
    });
  for (std::thread& t : pool) t.join();
}

Eigen::Matrix2Xd draw_user_drop(RngStream& rng, int users,
                                const Eigen::Vector2d& center, double radius) {
  Eigen::Matrix2Xd drop(2, users);
  for (int k = 0; k < users; ++k) {
    const double r = radius * std::sqrt(rng.uniform());
    const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
    drop.col(k) = center + r * Eigen::Vector2d(std::cos(a), std::sin(a));
  }
  return drop;
}

}  // namespace

TrialOutcome run_trial_full(const ScenarioConfig& cfg, int trial) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();

  const bool multi_user = cfg.model == Model::mu_miso;
  const Eigen::Index m = multi_user ? cfg.antennas : 1;
  const Eigen::Index k = multi_user ? cfg.users : 1;

  const RngStream master(cfg.seed);
  const RngStream base = master.substream(1 + static_cast<std::uint64_t>(trial));
  RngStream angle_rng = base.substream(0);
  RngStream fading_rng = base.substream(1);
  RngStream user_rng = cfg.redraw_users ? base.substream(2) : master.substream(0);

  ScenarioGeometry geom;
  geom.bs = cfg.bs_location;
  geom.surface = cfg.surface_location;
  geom.users = draw_user_drop(user_rng, static_cast<int>(k), cfg.user_center,
                              cfg.user_radius);
  geom.wavelength = cfg.wavelength;
  geom.pathloss_exponent = cfg.pathloss_exponent;
  geom.pathloss = cfg.pathloss;

  const AngleSet angles = draw_angles(angle_rng, static_cast<int>(k));
  const SurfaceLayout layout =
      partition_surface(cfg.area, cfg.elements, cfg.spacing);
  const FadingDraw draw = draw_fading(fading_rng, cfg.elements, m, k,
                                      cfg.rician_bs, cfg.rician_users);

  const double power = std::pow(10.0, cfg.snr_db / 10.0);
  const double noise = 1.0;

  PositionSearchOptions search;
  search.method = cfg.method;
  search.grid_x = cfg.grid_x;
  search.grid_y = cfg.grid_y;
  search.pso = cfg.pso;
  search.pso.seed = base.substream(3).seed();

  TrialOutcome outcome;
  TrialRecord& rec = outcome.record;
  rec.trial = trial;
  rec.seed = base.seed();
  rec.scheme = cfg.scheme;
  rec.model = cfg.model;
  rec.elements = cfg.elements;
  rec.antennas = static_cast<int>(m);
  rec.users = static_cast<int>(k);
  rec.snr_db = cfg.snr_db;
  rec.area = cfg.area;

  if (!multi_user) {
    if (cfg.scheme == Scheme::fris) {
      SuPositionResult pos = optimize_positions_su(layout, geom, angles, draw,
                                                   power, noise, search);
      rec.rate = pos.rate;
      rec.position_iterations = static_cast<double>(pos.history.size());
      outcome.position_history = std::move(pos.history);
      outcome.element_histories = std::move(pos.element_histories);
    } else {
      const ElementPositions centers = ris_baseline_positions(layout);
      const ChannelRealization ch =
          realize_channels(geom, angles, draw, centers, 1, 1);
      rec.rate = su_siso_aligned_rate(
          SuSisoInstance{ch.H.col(0), ch.G.col(0), power, noise});
      outcome.position_history = {rec.rate};
    }
  } else {
    AlternatingConfig alt;
    alt.optimize_positions = cfg.scheme == Scheme::fris;
    alt.position = search;
    const AlternatingResult result = alternating_optimize(
        layout, geom, angles, draw, power, noise, alt);
    rec.rate = result.rate;
    rec.flagged = result.flagged;
    const auto total = [](const std::vector<int>& counts) {
      double sum = 0.0;
      for (int c : counts) sum += c;
      return sum;
    };
    rec.position_iterations = total(result.history.position_iterations);
    rec.phase_iterations = total(result.history.phase_iterations);
    rec.precoder_iterations = total(result.history.precoder_iterations);
    outcome.history = result.history;
  }

  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return outcome;
}

TrialRecord run_trial(const ScenarioConfig& cfg, int trial) {
  return run_trial_full(cfg, trial).record;
}

std::vector<TrialRecord> sweep(const ScenarioConfig& cfg) {
  cfg.validate();
  const std::vector<int> elements =
      cfg.element_sweep.empty() ? std::vector<int>{cfg.elements} : cfg.element_sweep;
  const std::vector<int> antennas =
      cfg.antenna_sweep.empty() ? std::vector<int>{cfg.antennas} : cfg.antenna_sweep;
  const std::vector<double> areas =
      cfg.area_sweep.empty() ? std::vector<double>{cfg.area} : cfg.area_sweep;

  std::vector<TrialRecord> rows;
  for (double snr : cfg.snr_sweep)
    for (int n : elements)
      for (int m : antennas)
        for (double a : areas) {
          ScenarioConfig cell = cfg;
          cell.snr_db = snr;
          cell.elements = n;
          cell.antennas = m;
          cell.area = a;
          std::vector<TrialRecord> cell_rows(static_cast<std::size_t>(cfg.trials));
          run_parallel(cfg.trials, cfg.threads,
                       [&](int t) { cell_rows[static_cast<std::size_t>(t)] =
                                        run_trial(cell, t); });

          double mean = 0.0;
          for (const TrialRecord& r : cell_rows) mean += r.rate;
          mean /= cfg.trials;
          double var = 0.0;
          for (const TrialRecord& r : cell_rows)
            var += (r.rate - mean) * (r.rate - mean);
          const double stderr_rate =
              cfg.trials > 1 ? std::sqrt(var / (cfg.trials - 1) / cfg.trials) : 0.0;

          TrialRecord agg = cell_rows.front();
          agg.trial = -1;
          agg.seed = cfg.seed;
          agg.rate = mean;
          agg.rate_stderr = stderr_rate;
          agg.position_iterations = 0.0;
          agg.phase_iterations = 0.0;
          agg.precoder_iterations = 0.0;
          agg.wall_seconds = 0.0;
          for (const TrialRecord& r : cell_rows) {
            agg.position_iterations += r.position_iterations / cfg.trials;
            agg.phase_iterations += r.phase_iterations / cfg.trials;
            agg.precoder_iterations += r.precoder_iterations / cfg.trials;
            agg.wall_seconds += r.wall_seconds;
          }

          rows.insert(rows.end(), cell_rows.begin(), cell_rows.end());
          rows.push_back(agg);
        }

  if (!cfg.output.empty()) write_sweep_csv(rows, cfg.output);
  return rows;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

void write_sweep_csv(const std::vector<TrialRecord>& records,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << "trial,seed,scheme,model,n_elements,m_antennas,k_users,snr_db,area_m,"
         "rate_bps_hz,rate_stderr_bps_hz,pos_iters,phase_iters,prec_iters,wall_s\n";
  for (const TrialRecord& r : records) {
    out << r.trial << ',' << r.seed << ',' << to_string(r.scheme) << ','
        << to_string(r.model) << ',' << r.elements << ',' << r.antennas << ','
        << r.users << ',' << format_double(r.snr_db) << ','
        << format_double(r.area) << ',' << format_double(r.rate) << ','
        << format_double(r.rate_stderr) << ','
        << format_double(r.position_iterations) << ','
        << format_double(r.phase_iterations) << ','
        << format_double(r.precoder_iterations) << ','
        << format_double(r.wall_seconds) << '\n';
  }
  if (!out) throw std::runtime_error("failed while writing: " + path);
}

std::vector<ConvergenceRow> convergence_report(const ScenarioConfig& cfg) {
  cfg.validate();
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(cfg.trials));
  run_parallel(cfg.trials, cfg.threads, [&](int t) {
    outcomes[static_cast<std::size_t>(t)] = run_trial_full(cfg, t);
  });

  std::vector<ConvergenceRow> rows;
  for (const TrialOutcome& outcome : outcomes) {
    ConvergenceRow base;
    base.trial = outcome.record.trial;
    base.seed = outcome.record.seed;
    base.scheme = outcome.record.scheme;
    base.model = outcome.record.model;
    base.snr_db = outcome.record.snr_db;
    int step = 0;
    if (cfg.model == Model::su_siso) {
      for (double value : outcome.position_history) {
        ConvergenceRow row = base;
        row.stage = "position";
        row.step = step++;
        row.inner_iterations = 1;
        row.rate = value;
        rows.push_back(row);
      }
    } else {
      const OptimizationHistory& h = outcome.history;
      ConvergenceRow init = base;
      init.stage = "init";
      init.step = step++;
      init.rate = h.sum_rate.empty() ? 0.0 : h.sum_rate.front();
      rows.push_back(init);
      const std::size_t cycles = h.position_iterations.size();
      for (std::size_t c = 0; c < cycles; ++c) {
        const char* names[3] = {"position", "phase", "precoder"};
        const int counts[3] = {h.position_iterations[c], h.phase_iterations[c],
                               h.precoder_iterations[c]};
        for (int s = 0; s < 3; ++s) {
          ConvergenceRow row = base;
          row.stage = names[s];
          row.step = step++;
          row.inner_iterations = counts[s];
          const std::size_t idx = 1 + 3 * c + static_cast<std::size_t>(s);
          row.rate = idx < h.sum_rate.size() ? h.sum_rate[idx] : h.sum_rate.back();
          rows.push_back(row);
        }
      }
    }
  }
  if (!cfg.output.empty()) write_convergence_csv(rows, cfg.output);
  return rows;
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows,
                           const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << "trial,seed,scheme,model,snr_db,stage,step,inner_iters,rate_bps_hz\n";
  for (const ConvergenceRow& r : rows) {
    out << r.trial << ',' << r.seed << ',' << to_string(r.scheme) << ','
        << to_string(r.model) << ',' << format_double(r.snr_db) << ','
        << r.stage << ',' << r.step << ',' << r.inner_iterations << ','
        << format_double(r.rate) << '\n';
  }
  if (!out) throw std::runtime_error("failed while writing: " + path);
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> items;
  std::stringstream stream(s);
  std::string item;
  while (std::getline(stream, item, ',')) items.push_back(trim(item));
  return items;
}

}  // namespace

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  ScenarioConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    const auto as_int_list = [&] {
      std::vector<int> v;
      for (const std::string& item : split_list(value)) v.push_back(std::stoi(item));
      return v;
    };
    const auto as_double_list = [&] {
      std::vector<double> v;
      for (const std::string& item : split_list(value)) v.push_back(std::stod(item));
      return v;
    };

    if (key == "model") {
      if (value == "su-siso") cfg.model = Model::su_siso;
      else if (value == "mu-miso") cfg.model = Model::mu_miso;
      else throw std::runtime_error("config: unknown model " + value);
    } else if (key == "scheme") {
      if (value == "fris") cfg.scheme = Scheme::fris;
      else if (value == "ris") cfg.scheme = Scheme::ris;
      else throw std::runtime_error("config: unknown scheme " + value);
    } else if (key == "method") {
      if (value == "grid") cfg.method = PositionMethod::grid;
      else if (value == "pso") cfg.method = PositionMethod::pso;
      else throw std::runtime_error("config: unknown method " + value);
    } else if (key == "path_loss") {
      if (value == "normalized") cfg.pathloss = PathLossMode::normalized;
      else if (value == "physical") cfg.pathloss = PathLossMode::physical;
      else throw std::runtime_error("config: unknown path_loss " + value);
    } else if (key == "n_elements") {
      cfg.element_sweep = as_int_list();
      cfg.elements = cfg.element_sweep.front();
      if (cfg.element_sweep.size() == 1) cfg.element_sweep.clear();
    } else if (key == "m_antennas") {
      cfg.antenna_sweep = as_int_list();
      cfg.antennas = cfg.antenna_sweep.front();
      if (cfg.antenna_sweep.size() == 1) cfg.antenna_sweep.clear();
    } else if (key == "k_users") {
      cfg.users = std::stoi(value);
    } else if (key == "area") {
      cfg.area_sweep = as_double_list();
      cfg.area = cfg.area_sweep.front();
      if (cfg.area_sweep.size() == 1) cfg.area_sweep.clear();
    } else if (key == "spacing") {
      cfg.spacing = std::stod(value);
    } else if (key == "wavelength") {
      cfg.wavelength = std::stod(value);
    } else if (key == "rician_bs") {
      cfg.rician_bs = std::stod(value);
    } else if (key == "rician_users") {
      cfg.rician_users = std::stod(value);
    } else if (key == "pathloss_exponent") {
      cfg.pathloss_exponent = std::stod(value);
    } else if (key == "snr_db") {
      cfg.snr_sweep = as_double_list();
      cfg.snr_db = cfg.snr_sweep.front();
    } else if (key == "trials") {
      cfg.trials = std::stoi(value);
    } else if (key == "seed") {
      cfg.seed = std::stoull(value);
    } else if (key == "grid_res") {
      const auto x = value.find('x');
      if (x == std::string::npos)
        throw std::runtime_error("config: grid_res must look like 10x10");
      cfg.grid_x = std::stoi(value.substr(0, x));
      cfg.grid_y = std::stoi(value.substr(x + 1));
    } else if (key == "swarm") {
      cfg.pso.swarm = std::stoi(value);
    } else if (key == "pso_iterations") {
      cfg.pso.iterations = std::stoi(value);
    } else if (key == "inertia") {
      cfg.pso.inertia = std::stod(value);
    } else if (key == "cognitive") {
      cfg.pso.cognitive = std::stod(value);
    } else if (key == "social") {
      cfg.pso.social = std::stod(value);
    } else if (key == "penalty") {
      cfg.pso.penalty = std::stod(value);
    } else if (key == "redraw_users") {
      cfg.redraw_users = value == "true" || value == "1";
    } else if (key == "threads") {
      cfg.threads = std::stoi(value);
    } else if (key == "out") {
      cfg.output = value;
    } else {
      throw std::runtime_error("config: unknown key " + key);
    }
  }
  return cfg;
}

}  // namespace fris
