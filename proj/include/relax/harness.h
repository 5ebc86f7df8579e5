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

#ifndef RELAX_HARNESS_H_
#define RELAX_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relax/policies.h"
#include "relax/sampler.h"
#include "relax/solvers.h"
#include "relax/spectral.h"

namespace relax {

struct MatrixSpec {
  std::size_t rows = 20;
  std::size_t cols = 20;
  std::string mtx_path;  // overrides the Laplacian when set

  SparseMatrix Build() const;
};

// Shifts c_t = (12 x - 3) / 20 with x ~ Beta(a, b), an explicit cyclic list,
// or none (every instance uses A itself).
struct ShiftLaw {
  enum class Kind { kNone, kBeta, kList };
  Kind kind = Kind::kBeta;
  double a = 2.0;
  double b = 6.0;
  std::vector<double> values;

  double c_min() const;
  double range() const;
};

struct TunerSpec {
  std::string kind = "tsallis";  // tsallis | contextual | chebcb | fixed |
                                 // instance_optimal | approx_beta
  std::size_t grid_d = 8;
  double omega_lo = 1.0;
  double omega_max = 1.9;
  bool centered = false;
  double normalization = 500.0;  // K
  StepMode step_mode = StepMode::kAnytime;
  double eta_scale = 0.0;        // Tsallis step-size numerator, 0 = default
  double fixed_omega = 1.0;
  std::size_t bins = 8;          // contextual
  std::size_t degree = 8;        // chebcb m
  double lipschitz = 10.0;       // chebcb L
  std::optional<double> n_norm;  // chebcb N
  std::optional<double> gamma;   // chebcb step size
  std::size_t d_ctx = 8;         // approx_beta
  std::size_t power_iters = 50;  // approx_beta
};

struct ExperimentConfig {
  MatrixSpec matrix{10, 10, {}};
  ShiftLaw shifts;
  std::size_t T = 2000;
  std::size_t trials = 5;
  std::uint64_t seed = 1;
  double epsilon = 1e-8;
  SolverKind solver = SolverKind::kSor;
  std::size_t cap = 10000;
  TunerSpec tuner;
  std::vector<double> comparators;   // fixed-omega columns
  bool instance_optimal_column = false;
  std::size_t threads = 1;

  void Validate() const;
  static ExperimentConfig FromJson(std::string_view text);
  static ExperimentConfig FromFile(const std::string& path);
  std::string ToJson() const;
};

struct Instance {
  double c = 0.0;
  Vector b;
};

// Deterministic per-trial instance source: shifts and targets draw from
// separate substreams of the master seed.
class InstanceStream {
 public:
  InstanceStream(const ExperimentConfig& config, std::size_t n,
                 std::size_t trial);

  Instance next();

 private:
  ShiftLaw law_;
  Rng shift_rng_;
  TargetSampler targets_;
  std::gamma_distribution<double> gamma_a_;
  std::gamma_distribution<double> gamma_b_;
  std::size_t index_ = 0;
};

std::vector<Instance> generate_stream(const ExperimentConfig& config,
                                      std::size_t trial = 0);

std::uint64_t tuner_seed(std::uint64_t seed, std::size_t trial);

struct RunRecord {
  std::size_t trial = 0;
  std::size_t t = 0;  // 1-based
  double c = 0.0;
  long arm = -1;      // -1 for deterministic policies
  double omega = 0.0;
  std::size_t iterations = 0;
  bool converged = true;
  std::size_t cumulative_iterations = 0;
  std::vector<std::size_t> comparator_iterations;
};

struct RunTable {
  std::string tuner;
  std::uint64_t seed = 0;
  std::vector<std::string> comparator_names;
  std::vector<RunRecord> records;  // ordered by (trial, t)
};

struct PolicyTotal {
  std::string name;
  std::vector<std::size_t> per_trial;
  double mean = 0.0;
};

struct ExperimentSummary {
  std::size_t trials = 0;
  std::size_t T = 0;
  PolicyTotal tuner;
  std::vector<PolicyTotal> comparators;
  std::size_t diverged = 0;
  std::optional<double> regret_vs_best_fixed;      // mean over trials
  std::optional<double> regret_vs_instance_optimal;
};

struct ExperimentResult {
  RunTable table;
  ExperimentSummary summary;
};

// Runs the cost of one solve, mapping divergence or breakdown to the cap.
struct SolveCost {
  std::size_t iterations = 0;
  bool converged = false;
};
SolveCost solve_cost(SolverKind kind, const SparseMatrix& a,
                     std::span<const double> b, double omega, double epsilon,
                     std::size_t cap);

std::unique_ptr<Policy> make_policy(
    const ExperimentConfig& config, const ShiftedEnsemble& ensemble,
    std::shared_ptr<const InstanceOptimalOracle> oracle);

ExperimentResult run_experiment(const ExperimentConfig& config);

ExperimentSummary summarize(const RunTable& table);

void write_csv(std::ostream& out, const RunTable& table);
RunTable read_csv(std::istream& in);
std::string summary_json(const ExperimentConfig& config,
                         const ExperimentSummary& summary);

enum class RegretMode { kFixedArm, kInstanceOptimal };
RegretMode parse_regret_mode(std::string_view name);

struct RegretReport {
  // regret after t rounds, per trial
  std::vector<std::vector<double>> trajectories;
  std::vector<double> final_average;  // final regret / T, per trial
  double mean = 0.0;
  double stderr_ = 0.0;
  std::string comparator;
};

// Fixed-arm mode compares against the best fixed comparator column over each
// prefix; instance-optimal mode needs an "instance_optimal" column.
RegretReport regret_report(const RunTable& table, RegretMode mode);

// Plot data as CSV text.
struct SweepOptions {
  MatrixSpec matrix;
  double shift = 0.0;
  SolverKind solver = SolverKind::kSor;
  double epsilon = 1e-8;
  std::vector<double> omegas;
  std::size_t targets = 5;
  std::uint64_t seed = 1;
  std::size_t cap = 10000;
};
std::string asymptotic_curves(const SweepOptions& options);
std::string comparator_avg(const ExperimentConfig& config,
                           const std::vector<double>& omegas);
std::string learning_curve(const RunTable& table);

// 17 significant digits, as written to CSV.
std::string format_double(double v);
// Shortest round-trip form, used in column names.
std::string short_double(double v);

}  // namespace relax

#endif  // RELAX_HARNESS_H_
