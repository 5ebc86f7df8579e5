// Copyright 2026 The Relax Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "relax/error.h"
#include "relax/harness.h"
#include "relax/matrix_market.h"
#include "relax/sampler.h"
#include "relax/solvers.h"
#include "relax/spectral.h"
#include "relax/surrogates.h"

namespace {

using relax::ExperimentConfig;

void WriteText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw relax::StructuralError("cannot write " + path);
  out << text;
}

std::vector<double> Linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) /
                                  static_cast<double>(n - 1);
  }
  return v;
}

struct MatrixFlags {
  std::size_t rows = 20;
  std::size_t cols = 20;
  std::string mtx;

  void Add(CLI::App* app) {
    app->add_option("--rows", rows, "Laplacian grid rows");
    app->add_option("--cols", cols, "Laplacian grid columns");
    app->add_option("--mtx", mtx, "Matrix Market file (overrides the Laplacian)");
  }
  relax::MatrixSpec Spec() const { return {rows, cols, mtx}; }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online tuning of SOR/SSOR relaxation parameters"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "Run one solver instance");
  MatrixFlags solve_matrix;
  solve_matrix.Add(solve);
  std::string solve_kind = "sor";
  double solve_omega = 1.0, solve_shift = 0.0, solve_eps = 1e-8;
  std::size_t solve_cap = 10000;
  std::uint64_t solve_seed = 1;
  bool solve_history = false;
  solve->add_option("--solver", solve_kind, "sor | ssor | pcg");
  solve->add_option("--omega", solve_omega, "relaxation parameter");
  solve->add_option("--shift", solve_shift, "diagonal shift c");
  solve->add_option("--epsilon", solve_eps, "tolerance");
  solve->add_option("--cap", solve_cap, "iteration cap");
  solve->add_option("--seed", solve_seed, "target seed");
  solve->add_flag("--history", solve_history, "print the residual history");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Iterations and bounds versus omega");
  MatrixFlags sweep_matrix;
  sweep_matrix.Add(sweep);
  std::string sweep_kind = "sor", sweep_out = "-";
  double sweep_shift = 0.0, sweep_eps = 1e-8, sweep_lo = 1.0, sweep_hi = 1.9;
  std::size_t sweep_points = 19, sweep_targets = 5, sweep_cap = 10000;
  std::uint64_t sweep_seed = 1;
  sweep->add_option("--solver", sweep_kind, "sor | ssor | pcg");
  sweep->add_option("--shift", sweep_shift, "diagonal shift c");
  sweep->add_option("--epsilon", sweep_eps, "tolerance");
  sweep->add_option("--omega-lo", sweep_lo, "first omega");
  sweep->add_option("--omega-max", sweep_hi, "last omega");
  sweep->add_option("--points", sweep_points, "number of omegas");
  sweep->add_option("--targets", sweep_targets, "number of right-hand sides");
  sweep->add_option("--cap", sweep_cap, "iteration cap");
  sweep->add_option("--seed", sweep_seed, "target seed");
  sweep->add_option("--out", sweep_out, "CSV output path");

  // tune
  auto* tune = app.add_subcommand("tune", "Run an online tuning experiment");
  std::string tune_config, tune_out = "-", tune_summary, tune_curve;
  std::optional<std::uint64_t> o_seed;
  std::optional<std::size_t> o_T, o_grid_d, o_threads, o_trials;
  std::optional<std::string> o_tuner;
  std::optional<double> o_eps, o_omega_max;
  tune->add_option("--config", tune_config, "JSON experiment config");
  tune->add_option("--seed", o_seed, "master seed");
  tune->add_option("--T", o_T, "instances per trial");
  tune->add_option("--trials", o_trials, "number of trials");
  tune->add_option("--tuner", o_tuner,
                   "tsallis | contextual | chebcb | fixed | instance_optimal | approx_beta");
  tune->add_option("--epsilon", o_eps, "solver tolerance");
  tune->add_option("--grid-d", o_grid_d, "number of grid arms");
  tune->add_option("--omega-max", o_omega_max, "largest grid omega");
  tune->add_option("--threads", o_threads, "trial-level worker threads");
  tune->add_option("--out", tune_out, "records CSV path");
  tune->add_option("--summary", tune_summary, "summary JSON path");
  tune->add_option("--curve", tune_curve, "learning-curve CSV path");

  // report
  auto* report = app.add_subcommand("report", "Regret report from a records CSV");
  std::string report_csv, report_mode = "fixed_arm";
  report->add_option("--csv", report_csv, "records CSV")->required();
  report->add_option("--mode", report_mode, "fixed_arm | instance_optimal");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      const auto kind = relax::parse_solver_kind(solve_kind);
      const relax::SparseMatrix a =
          relax::shift(solve_matrix.Spec().Build(), solve_shift);
      relax::TargetSampler sampler(a.size(), solve_seed);
      const relax::Vector b = sampler.sample();
      relax::SolverConfig cfg;
      cfg.omega = solve_omega;
      cfg.tolerance = solve_eps;
      cfg.tolerance_mode = relax::default_tolerance_mode(kind);
      cfg.cap = solve_cap;
      cfg.record_history = solve_history;
      nlohmann::json j;
      j["solver"] = std::string(relax::to_string(kind));
      j["n"] = a.size();
      j["omega"] = solve_omega;
      try {
        const relax::SolveReport r = relax::solve(kind, a, b, cfg);
        j["iterations"] = r.iterations;
        j["converged"] = r.converged;
        j["final_residual"] = r.final_residual;
        if (solve_history) j["residual_history"] = r.residual_history;
      } catch (const relax::DivergenceError& e) {
        j["iterations"] = e.iterations();
        j["converged"] = false;
        j["diverged"] = true;
      } catch (const relax::NumericalError& e) {
        j["converged"] = false;
        j["error"] = e.what();
      }
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (*sweep) {
      relax::SweepOptions o;
      o.matrix = sweep_matrix.Spec();
      o.shift = sweep_shift;
      o.solver = relax::parse_solver_kind(sweep_kind);
      o.epsilon = sweep_eps;
      o.omegas = Linspace(sweep_lo, sweep_hi, sweep_points);
      o.targets = sweep_targets;
      o.seed = sweep_seed;
      o.cap = sweep_cap;
      WriteText(sweep_out, relax::asymptotic_curves(o));
      return 0;
    }
    if (*tune) {
      ExperimentConfig cfg = tune_config.empty()
                                 ? ExperimentConfig{}
                                 : ExperimentConfig::FromFile(tune_config);
      if (o_seed) cfg.seed = *o_seed;
      if (o_T) cfg.T = *o_T;
      if (o_trials) cfg.trials = *o_trials;
      if (o_tuner) cfg.tuner.kind = *o_tuner;
      if (o_eps) cfg.epsilon = *o_eps;
      if (o_grid_d) cfg.tuner.grid_d = *o_grid_d;
      if (o_omega_max) cfg.tuner.omega_max = *o_omega_max;
      if (o_threads) cfg.threads = *o_threads;
      cfg.Validate();
      const relax::ExperimentResult result = relax::run_experiment(cfg);
      std::ostringstream csv;
      relax::write_csv(csv, result.table);
      WriteText(tune_out, csv.str());
      if (!tune_summary.empty()) {
        WriteText(tune_summary, relax::summary_json(cfg, result.summary) + "\n");
      }
      if (!tune_curve.empty()) {
        WriteText(tune_curve, relax::learning_curve(result.table));
      }
      return 0;
    }
    if (*report) {
      std::ifstream in(report_csv);
      if (!in) throw relax::StructuralError("cannot open " + report_csv);
      const relax::RunTable table = relax::read_csv(in);
      const relax::RegretReport rep =
          relax::regret_report(table, relax::parse_regret_mode(report_mode));
      nlohmann::json j;
      j["comparator"] = rep.comparator;
      j["final_average_regret"] = rep.final_average;
      j["mean"] = rep.mean;
      j["stderr"] = rep.stderr_;
      std::vector<double> finals;
      for (const auto& traj : rep.trajectories) {
        finals.push_back(traj.empty() ? 0.0 : traj.back());
      }
      j["final_regret"] = finals;
      std::cout << j.dump(2) << "\n";
      return 0;
    }
  } catch (const relax::ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
