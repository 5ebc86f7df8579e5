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

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "relax/error.h"
#include "relax/harness.h"
#include "relax/solvers.h"

using namespace relax;

namespace {

ExperimentConfig SmallConfig() {
  ExperimentConfig c;
  c.matrix = MatrixSpec{6, 6, {}};
  c.shifts.kind = ShiftLaw::Kind::kBeta;
  c.shifts.a = 0.5;
  c.shifts.b = 1.5;
  c.T = 40;
  c.trials = 2;
  c.seed = 17;
  c.epsilon = 1e-6;
  c.tuner.kind = "tsallis";
  c.tuner.grid_d = 4;
  c.comparators = {1.0, 1.5};
  c.instance_optimal_column = true;
  return c;
}

std::string Csv(const RunTable& t) {
  std::ostringstream out;
  write_csv(out, t);
  return out.str();
}

std::vector<std::vector<std::string>> Rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("beta shift law: support and moments") {
  ExperimentConfig c = SmallConfig();
  c.T = 20000;
  const auto stream = generate_stream(c, 0);
  double sum = 0.0, sq = 0.0;
  for (const Instance& inst : stream) {
    CHECK(inst.c >= -0.15);
    CHECK(inst.c <= 0.45);
    sum += inst.c;
    sq += inst.c * inst.c;
  }
  const double mean = sum / c.T;
  const double var = sq / c.T - mean * mean;
  // x ~ Beta(1/2, 3/2): E x = 1/4, Var x = 1/16
  CHECK(std::abs(mean - 0.0) <= 0.005);
  CHECK(var == doctest::Approx(0.36 / 16.0).epsilon(0.05));
  CHECK(c.shifts.c_min() == doctest::Approx(-0.15));
  CHECK(c.shifts.range() == doctest::Approx(0.6));
}

TEST_CASE("instance streams are reproducible and differ across trials") {
  const ExperimentConfig c = SmallConfig();
  const auto a = generate_stream(c, 0);
  const auto b = generate_stream(c, 0);
  const auto other = generate_stream(c, 1);
  REQUIRE(a.size() == c.T);
  bool differs = false;
  for (std::size_t t = 0; t < c.T; ++t) {
    CHECK(a[t].c == b[t].c);
    CHECK(a[t].b == b[t].b);
    differs = differs || a[t].c != other[t].c;
  }
  CHECK(differs);
  CHECK(tuner_seed(c.seed, 0) != tuner_seed(c.seed, 1));
}

TEST_CASE("list and none shift laws") {
  ExperimentConfig c = SmallConfig();
  c.shifts.kind = ShiftLaw::Kind::kList;
  c.shifts.values = {0.1, -0.05, 0.2};
  c.T = 7;
  const auto s = generate_stream(c);
  const double expect[] = {0.1, -0.05, 0.2, 0.1, -0.05, 0.2, 0.1};
  for (std::size_t t = 0; t < 7; ++t) CHECK(s[t].c == expect[t]);
  c.shifts.kind = ShiftLaw::Kind::kNone;
  for (const Instance& inst : generate_stream(c)) CHECK(inst.c == 0.0);
}

TEST_CASE("fixed tuner accounting") {
  ExperimentConfig c = SmallConfig();
  c.tuner.kind = "fixed";
  c.tuner.fixed_omega = 1.5;
  const ExperimentResult r = run_experiment(c);
  REQUIRE(r.table.records.size() == c.T * c.trials);
  REQUIRE(r.table.comparator_names.size() == 3);
  CHECK(r.table.comparator_names[1] == "fixed(1.5)");
  CHECK(r.table.comparator_names[2] == "instance_optimal");
  std::size_t cum = 0;
  for (std::size_t i = 0; i < r.table.records.size(); ++i) {
    const RunRecord& rec = r.table.records[i];
    CHECK(rec.trial == i / c.T);
    CHECK(rec.t == i % c.T + 1);
    if (rec.t == 1) cum = 0;
    cum += rec.iterations;
    CHECK(rec.cumulative_iterations == cum);
    CHECK(rec.arm == -1);
    CHECK(rec.omega == 1.5);
    CHECK(rec.iterations == rec.comparator_iterations[1]);
  }
  // direct re-solve of the first instance
  const auto stream = generate_stream(c, 0);
  const SparseMatrix a = shift(c.matrix.Build(), stream[0].c);
  SolverConfig sc;
  sc.omega = 1.5;
  sc.tolerance = c.epsilon;
  CHECK(r.table.records[0].iterations == sor_solve(a, stream[0].b, sc).iterations);
  CHECK(r.summary.regret_vs_best_fixed.has_value());
  CHECK(*r.summary.regret_vs_best_fixed <= 0.0);
}

TEST_CASE("runs are deterministic across thread counts") {
  ExperimentConfig c = SmallConfig();
  c.trials = 3;
  const std::string one = Csv(run_experiment(c).table);
  c.threads = 3;
  const std::string three = Csv(run_experiment(c).table);
  CHECK(one == three);
}

TEST_CASE("instance-optimal beats fixed comparators on the beta ensemble") {
  ExperimentConfig c = SmallConfig();
  c.matrix = MatrixSpec{8, 8, {}};
  c.tuner.kind = "instance_optimal";
  c.comparators = {1.0, 1.4, 1.8};
  c.T = 100;
  c.trials = 1;
  const ExperimentSummary s = run_experiment(c).summary;
  for (const PolicyTotal& p : s.comparators) {
    if (p.name != "instance_optimal") CHECK(s.tuner.mean <= p.mean);
  }
}

TEST_CASE("regret report on a hand-built table") {
  RunTable t;
  t.tuner = "tsallis";
  t.comparator_names = {"fixed(1)", "fixed(1.5)", "instance_optimal"};
  const std::size_t tuner[] = {10, 10, 10};
  const std::size_t f1[] = {5, 20, 20};
  const std::size_t f2[] = {12, 12, 12};
  std::size_t cum = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    RunRecord r;
    r.t = i + 1;
    r.iterations = tuner[i];
    cum += tuner[i];
    r.cumulative_iterations = cum;
    r.omega = 1.2;
    r.arm = 0;
    r.comparator_iterations = {f1[i], f2[i], 4};
    t.records.push_back(r);
  }
  const RegretReport fixed = regret_report(t, RegretMode::kFixedArm);
  REQUIRE(fixed.trajectories.size() == 1);
  CHECK(fixed.trajectories[0] == std::vector<double>{5.0, -4.0, -6.0});
  CHECK(fixed.final_average[0] == doctest::Approx(-2.0));
  CHECK(fixed.mean == doctest::Approx(-2.0));
  const RegretReport io = regret_report(t, RegretMode::kInstanceOptimal);
  CHECK(io.trajectories[0] == std::vector<double>{6.0, 12.0, 18.0});
  CHECK(io.mean == doctest::Approx(6.0));

  const ExperimentSummary s = summarize(t);
  CHECK(*s.regret_vs_best_fixed == doctest::Approx(-6.0));
  CHECK(*s.regret_vs_instance_optimal == doctest::Approx(18.0));

  t.comparator_names.pop_back();
  for (auto& r : t.records) r.comparator_iterations.pop_back();
  CHECK_THROWS(regret_report(t, RegretMode::kInstanceOptimal));
  CHECK(parse_regret_mode("fixed_arm") == RegretMode::kFixedArm);
  CHECK_THROWS_AS(parse_regret_mode("best"), ParameterError);
}

TEST_CASE("CSV round trip") {
  ExperimentConfig c = SmallConfig();
  const RunTable t = run_experiment(c).table;
  const std::string text = Csv(t);
  std::istringstream in(text);
  const RunTable back = read_csv(in);
  CHECK(back.tuner == t.tuner);
  CHECK(back.seed == t.seed);
  CHECK(back.comparator_names == t.comparator_names);
  REQUIRE(back.records.size() == t.records.size());
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    CHECK(back.records[i].c == t.records[i].c);
    CHECK(back.records[i].omega == t.records[i].omega);
    CHECK(back.records[i].arm == t.records[i].arm);
    CHECK(back.records[i].comparator_iterations == t.records[i].comparator_iterations);
  }
  CHECK(Csv(back) == text);
  std::istringstream bad("trial,t\n1,2\n");
  CHECK_THROWS(read_csv(bad));
}

TEST_CASE("learning curve is nondecreasing") {
  const RunTable t = run_experiment(SmallConfig()).table;
  const auto rows = Rows(learning_curve(t));
  REQUIRE(rows.size() == 41);
  CHECK(rows[0][0] == "t");
  for (std::size_t r = 2; r < rows.size(); ++r) {
    for (std::size_t c = 1; c < rows[r].size(); ++c) {
      CHECK(std::stod(rows[r][c]) >= std::stod(rows[r - 1][c]));
    }
  }
}

TEST_CASE("comparator averages on a single instance") {
  ExperimentConfig c = SmallConfig();
  c.shifts.kind = ShiftLaw::Kind::kList;
  c.shifts.values = {0.1};
  c.T = 1;
  const auto rows = Rows(comparator_avg(c, {1.2, 1.6}));
  REQUIRE(rows.size() == 4);
  const Instance inst = generate_stream(c)[0];
  const SparseMatrix a = shift(c.matrix.Build(), 0.1);
  SolverConfig sc;
  sc.tolerance = c.epsilon;
  sc.omega = 1.2;
  CHECK(std::stod(rows[1][2]) == sor_solve(a, inst.b, sc).iterations);
  sc.omega = 1.6;
  CHECK(std::stod(rows[2][2]) == sor_solve(a, inst.b, sc).iterations);
  CHECK(rows[3][0] == "instance_optimal");
}

TEST_CASE("asymptotic curves: surrogate dominates measured counts") {
  SweepOptions o;
  o.matrix = MatrixSpec{6, 6, {}};
  o.shift = 0.05;
  o.targets = 3;
  for (int i = 0; i <= 18; ++i) o.omegas.push_back(1.0 + 0.05 * i);
  const auto rows = Rows(asymptotic_curves(o));
  REQUIRE(rows.size() == 20);
  CHECK(rows[0][0] == "omega");
  CHECK(rows[0][3] == "surrogate");
  for (std::size_t r = 1; r < rows.size(); ++r) {
    CHECK(std::stod(rows[r][1]) <= std::stod(rows[r][2]));
    CHECK(std::stod(rows[r][3]) >= std::stod(rows[r][2]));
  }
}

TEST_CASE("config parsing") {
  const ExperimentConfig c = ExperimentConfig::FromJson(R"({
    "matrix": {"rows": 8, "cols": 8},
    "shifts": {"law": "beta", "a": 0.5, "b": 1.5},
    "T": 300, "trials": 2, "seed": 9, "solver": "ssor",
    "comparators": [1.0, 1.4],
    "tuner": {"kind": "chebcb", "grid_d": 6, "K": 200, "degree": 4, "gamma": 50}
  })");
  CHECK(c.matrix.rows == 8);
  CHECK(c.T == 300);
  CHECK(c.solver == SolverKind::kSsor);
  CHECK(c.tuner.kind == "chebcb");
  CHECK(c.tuner.normalization == 200.0);
  CHECK(*c.tuner.gamma == 50.0);
  const ExperimentConfig again = ExperimentConfig::FromJson(c.ToJson());
  CHECK(again.ToJson() == c.ToJson());

  CHECK_THROWS_AS(ExperimentConfig::FromJson(R"({"bogus": 1})"), ParameterError);
  CHECK_THROWS_AS(ExperimentConfig::FromJson(R"({"solver": "jacobi"})"), ParameterError);
  CHECK_THROWS_AS(ExperimentConfig::FromJson(R"({"T": 0})"), ParameterError);
  CHECK_THROWS_AS(ExperimentConfig::FromJson(R"({"shifts": {"law": "gauss"}})"), ParameterError);
  CHECK_THROWS_AS(ExperimentConfig::FromJson("[1, 2"), ParameterError);
  CHECK_THROWS_AS(ExperimentConfig::FromJson(R"({"tuner": {"omega_max": 2.5}})"), ParameterError);
  // A + c_min I indefinite
  CHECK_THROWS(run_experiment(ExperimentConfig::FromJson(
      R"({"matrix": {"rows": 20, "cols": 20}, "T": 5, "trials": 1})")));
}

TEST_CASE("divergence maps to the cap") {
  const SparseMatrix a = laplacian_2d(4, 4);
  const Vector b(16, 1.0);
  const SolveCost ok = solve_cost(SolverKind::kSor, a, b, 1.2, 1e-8, 10000);
  CHECK(ok.converged);
  const SolveCost capped = solve_cost(SolverKind::kSor, a, b, 1.2, 1e-8, 3);
  CHECK(capped.iterations == 3);
  CHECK_FALSE(capped.converged);
}
