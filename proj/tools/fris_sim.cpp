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

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fris/harness.hpp"

namespace {

struct CliOverrides {
  std::string config_path;
  std::vector<double> snr_db;
  std::vector<int> elements;
  std::vector<int> antennas;
  int users = -1;
  std::vector<double> area;
  double spacing = -1.0;
  int trials = -1;
  std::int64_t seed = -1;
  std::string scheme;
  std::string method;
  std::string model;
  std::string grid_res;
  std::string path_loss;
  int threads = -1;
  std::string out;
};

void add_common_flags(CLI::App* cmd, CliOverrides& opt) {
  cmd->add_option("--config", opt.config_path, "flat key = value config file");
  cmd->add_option("--snr-db", opt.snr_db, "transmit SNR points in dB")
      ->delimiter(',');
  cmd->add_option("--n-elements", opt.elements, "surface element count(s)")
      ->delimiter(',');
  cmd->add_option("--m-antennas", opt.antennas, "BS antenna count(s)")
      ->delimiter(',');
  cmd->add_option("--k-users", opt.users, "number of users");
  cmd->add_option("--area", opt.area, "surface edge length(s) in meters")
      ->delimiter(',');
  cmd->add_option("--spacing", opt.spacing, "minimum element spacing in meters");
  cmd->add_option("--trials", opt.trials, "Monte Carlo trials per cell");
  cmd->add_option("--seed", opt.seed, "master seed");
  cmd->add_option("--scheme", opt.scheme, "fris|ris")
      ->check(CLI::IsMember({"fris", "ris"}));
  cmd->add_option("--method", opt.method, "position search: pso|grid")
      ->check(CLI::IsMember({"pso", "grid"}));
  cmd->add_option("--grid-res", opt.grid_res, "candidate grid, e.g. 10x10");
  cmd->add_option("--path-loss", opt.path_loss, "normalized|physical")
      ->check(CLI::IsMember({"normalized", "physical"}));
  cmd->add_option("--threads", opt.threads, "worker threads (0 = all cores)");
  cmd->add_option("--out", opt.out, "output CSV path");
}

fris::ScenarioConfig make_config(const CliOverrides& opt) {
  fris::ScenarioConfig cfg;
  if (!opt.config_path.empty()) cfg = fris::load_config(opt.config_path);

  if (!opt.model.empty())
    cfg.model = opt.model == "su-siso" ? fris::Model::su_siso : fris::Model::mu_miso;
  if (!opt.scheme.empty())
    cfg.scheme = opt.scheme == "fris" ? fris::Scheme::fris : fris::Scheme::ris;
  if (!opt.method.empty())
    cfg.method = opt.method == "grid" ? fris::PositionMethod::grid
                                      : fris::PositionMethod::pso;
  if (!opt.path_loss.empty())
    cfg.pathloss = opt.path_loss == "physical" ? fris::PathLossMode::physical
                                               : fris::PathLossMode::normalized;
  if (!opt.snr_db.empty()) {
    cfg.snr_sweep = opt.snr_db;
    cfg.snr_db = opt.snr_db.front();
  }
  if (!opt.elements.empty()) {
    cfg.elements = opt.elements.front();
    cfg.element_sweep = opt.elements.size() > 1 ? opt.elements : std::vector<int>{};
  }
  if (!opt.antennas.empty()) {
    cfg.antennas = opt.antennas.front();
    cfg.antenna_sweep = opt.antennas.size() > 1 ? opt.antennas : std::vector<int>{};
  }
  if (opt.users > 0) cfg.users = opt.users;
  if (!opt.area.empty()) {
    cfg.area = opt.area.front();
    cfg.area_sweep = opt.area.size() > 1 ? opt.area : std::vector<double>{};
  }
  if (opt.spacing >= 0.0) cfg.spacing = opt.spacing;
  if (opt.trials > 0) cfg.trials = opt.trials;
  if (opt.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opt.seed);
  if (!opt.grid_res.empty()) {
    const auto x = opt.grid_res.find('x');
    if (x == std::string::npos)
      throw CLI::ValidationError("--grid-res", "expected GxG, e.g. 10x10");
    cfg.grid_x = std::stoi(opt.grid_res.substr(0, x));
    cfg.grid_y = std::stoi(opt.grid_res.substr(x + 1));
  }
  if (opt.threads >= 0) cfg.threads = opt.threads;
  if (!opt.out.empty()) cfg.output = opt.out;
  return cfg;
}

int run_sweep(const fris::ScenarioConfig& cfg) {
  const std::vector<fris::TrialRecord> rows = fris::sweep(cfg);
  int cells = 0;
  for (const fris::TrialRecord& r : rows)
    if (r.trial == -1) {
      ++cells;
      std::printf("%s %s N=%d M=%d A=%.3g SNR=%.3g dB: %.4f bits/s/Hz (+/- %.4f)\n",
                  fris::to_string(r.scheme).c_str(), fris::to_string(r.model).c_str(),
                  r.elements, r.antennas, r.area, r.snr_db, r.rate, r.rate_stderr);
    }
  std::printf("wrote %zu rows (%d cells) to %s\n", rows.size(), cells,
              cfg.output.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Link-level simulator for fluid reconfigurable intelligent surfaces"};
  app.require_subcommand(1);

  CliOverrides su_opt, mu_opt, conv_opt, sweep_opt;
  std::string conv_model = "su-siso";
  std::string sweep_model;

  CLI::App* su = app.add_subcommand("su-siso", "single-user SISO rate sweep");
  add_common_flags(su, su_opt);
  CLI::App* mu = app.add_subcommand("mu-miso", "multi-user MISO sum-rate sweep");
  add_common_flags(mu, mu_opt);
  CLI::App* conv = app.add_subcommand("convergence",
                                      "per-iteration optimizer traces");
  add_common_flags(conv, conv_opt);
  conv->add_option("--model", conv_model, "su-siso|mu-miso")
      ->check(CLI::IsMember({"su-siso", "mu-miso"}));
  CLI::App* sw = app.add_subcommand("sweep", "generic Cartesian sweep");
  add_common_flags(sw, sweep_opt);
  sw->add_option("--model", sweep_model, "su-siso|mu-miso")
      ->check(CLI::IsMember({"su-siso", "mu-miso"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (su->parsed()) {
      su_opt.model = "su-siso";
      return run_sweep(make_config(su_opt));
    }
    if (mu->parsed()) {
      mu_opt.model = "mu-miso";
      return run_sweep(make_config(mu_opt));
    }
    if (conv->parsed()) {
      conv_opt.model = conv_model;
      fris::ScenarioConfig cfg = make_config(conv_opt);
      const auto rows = fris::convergence_report(cfg);
      std::printf("wrote %zu rows to %s\n", rows.size(), cfg.output.c_str());
      return 0;
    }
    if (sw->parsed()) {
      sweep_opt.model = sweep_model;
      return run_sweep(make_config(sweep_opt));
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
