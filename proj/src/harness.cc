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

#include "relax/harness.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "relax/error.h"
#include "relax/matrix_market.h"
#include "relax/surrogates.h"

namespace relax {
namespace {

using nlohmann::json;

constexpr std::uint64_t kShiftStream = 0;
constexpr std::uint64_t kTargetStream = 1;
constexpr std::uint64_t kTunerStream = 2;

template <typename T>
void Take(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void RejectUnknown(const json& j, std::initializer_list<const char*> keys,
                   const char* where) {
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(keys.begin(), keys.end(), [&](const char* k) {
          return key == k;
        }) == keys.end()) {
      throw ParameterError(std::string("unknown key '") + key + "' in " + where);
    }
  }
}

StepMode ParseStepMode(const std::string& s) {
  if (s == "fixed") return StepMode::kFixed;
  if (s == "anytime") return StepMode::kAnytime;
  throw ParameterError("step_mode must be 'fixed' or 'anytime'");
}

bool IsKnownTuner(const std::string& kind) {
  return kind == "tsallis" || kind == "contextual" || kind == "chebcb" ||
         kind == "fixed" || kind == "instance_optimal" || kind == "approx_beta";
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double Mean(const std::vector<std::size_t>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t x : v) s += static_cast<double>(x);
  return s / static_cast<double>(v.size());
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string short_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

SparseMatrix MatrixSpec::Build() const {
  if (!mtx_path.empty()) return read_matrix_market(mtx_path);
  if (rows == 0 || cols == 0) {
    throw StructuralError("Laplacian dimensions must be positive");
  }
  return laplacian_2d(rows, cols);
}

double ShiftLaw::c_min() const {
  switch (kind) {
    case Kind::kBeta:
      return -0.15;
    case Kind::kList:
      return *std::min_element(values.begin(), values.end());
    case Kind::kNone:
      break;
  }
  return 0.0;
}

double ShiftLaw::range() const {
  switch (kind) {
    case Kind::kBeta:
      return 0.6;
    case Kind::kList:
      return *std::max_element(values.begin(), values.end()) - c_min();
    case Kind::kNone:
      break;
  }
  return 0.0;
}

void ExperimentConfig::Validate() const {
  if (T < 1) throw ParameterError("T must be >= 1");
  if (trials < 1) throw ParameterError("trials must be >= 1");
  if (threads < 1) throw ParameterError("threads must be >= 1");
  if (!(epsilon > 0.0)) throw ParameterError("epsilon must be > 0");
  if (cap < 1) throw ParameterError("cap must be >= 1");
  if (shifts.kind == ShiftLaw::Kind::kBeta &&
      !(shifts.a > 0.0 && shifts.b > 0.0)) {
    throw ParameterError("Beta parameters must be positive");
  }
  if (shifts.kind == ShiftLaw::Kind::kList) {
    if (shifts.values.empty()) throw ParameterError("shift list is empty");
    for (double c : shifts.values) {
      if (!std::isfinite(c)) throw ParameterError("shift list has a non-finite value");
    }
  }
  if (!IsKnownTuner(tuner.kind)) {
    throw ParameterError("unknown tuner '" + tuner.kind + "'");
  }
  if (tuner.grid_d < 1) throw ParameterError("grid_d must be >= 1");
  if (!(tuner.omega_lo > 0.0 && tuner.omega_lo < tuner.omega_max &&
        tuner.omega_max < 2.0)) {
    throw ParameterError("need 0 < omega_lo < omega_max < 2");
  }
  if (!(tuner.normalization > 0.0)) throw ParameterError("K must be > 0");
  if (!(tuner.eta_scale >= 0.0)) throw ParameterError("eta must be >= 0");
  if (!(tuner.fixed_omega > 0.0 && tuner.fixed_omega < 2.0)) {
    throw ParameterError("fixed omega must lie in (0, 2)");
  }
  if (tuner.bins < 1) throw ParameterError("bins must be >= 1");
  if (!(tuner.lipschitz > 0.0)) throw ParameterError("L must be > 0");
  if (tuner.n_norm && !(*tuner.n_norm > 0.0)) throw ParameterError("N must be > 0");
  if (tuner.gamma && !(*tuner.gamma > 0.0)) throw ParameterError("gamma must be > 0");
  if (tuner.d_ctx < 1 || tuner.power_iters < 1) {
    throw ParameterError("d_ctx and power_iters must be >= 1");
  }
  for (double w : comparators) {
    if (!(w > 0.0 && w < 2.0)) throw ParameterError("comparator omega outside (0, 2)");
  }
  const bool contextual = tuner.kind == "contextual" || tuner.kind == "chebcb";
  if (contextual && !(shifts.range() > 0.0)) {
    throw ParameterError("contextual tuners need a nondegenerate shift range");
  }
}

ExperimentConfig ExperimentConfig::FromJson(std::string_view text) {
  ExperimentConfig cfg;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParameterError(std::string("malformed config: ") + e.what());
  }
  try {
    RejectUnknown(j,
                  {"matrix", "shifts", "T", "trials", "seed", "epsilon",
                   "solver", "cap", "tuner", "comparators",
                   "instance_optimal_column", "threads"},
                  "config");
    if (j.contains("matrix")) {
      const json& m = j.at("matrix");
      RejectUnknown(m, {"rows", "cols", "mtx"}, "matrix");
      Take(m, "rows", cfg.matrix.rows);
      Take(m, "cols", cfg.matrix.cols);
      Take(m, "mtx", cfg.matrix.mtx_path);
    }
    if (j.contains("shifts")) {
      const json& s = j.at("shifts");
      RejectUnknown(s, {"law", "a", "b", "values"}, "shifts");
      const std::string law = s.value("law", "beta");
      if (law == "beta") {
        cfg.shifts.kind = ShiftLaw::Kind::kBeta;
      } else if (law == "list") {
        cfg.shifts.kind = ShiftLaw::Kind::kList;
      } else if (law == "none") {
        cfg.shifts.kind = ShiftLaw::Kind::kNone;
      } else {
        throw ParameterError("unknown shift law '" + law + "'");
      }
      Take(s, "a", cfg.shifts.a);
      Take(s, "b", cfg.shifts.b);
      Take(s, "values", cfg.shifts.values);
    }
    Take(j, "T", cfg.T);
    Take(j, "trials", cfg.trials);
    Take(j, "seed", cfg.seed);
    Take(j, "epsilon", cfg.epsilon);
    if (j.contains("solver")) {
      cfg.solver = parse_solver_kind(j.at("solver").get<std::string>());
    }
    Take(j, "cap", cfg.cap);
    Take(j, "comparators", cfg.comparators);
    Take(j, "instance_optimal_column", cfg.instance_optimal_column);
    Take(j, "threads", cfg.threads);
    if (j.contains("tuner")) {
      const json& t = j.at("tuner");
      RejectUnknown(t,
                    {"kind", "grid_d", "omega_lo", "omega_max", "centered",
                     "K", "step_mode", "eta", "omega", "bins", "degree", "L", "N",
                     "gamma", "d_ctx", "power_iters"},
                    "tuner");
      TunerSpec& ts = cfg.tuner;
      Take(t, "kind", ts.kind);
      Take(t, "grid_d", ts.grid_d);
      Take(t, "omega_lo", ts.omega_lo);
      Take(t, "omega_max", ts.omega_max);
      Take(t, "centered", ts.centered);
      Take(t, "K", ts.normalization);
      if (t.contains("step_mode")) {
        ts.step_mode = ParseStepMode(t.at("step_mode").get<std::string>());
      }
      Take(t, "eta", ts.eta_scale);
      Take(t, "omega", ts.fixed_omega);
      Take(t, "bins", ts.bins);
      Take(t, "degree", ts.degree);
      Take(t, "L", ts.lipschitz);
      if (t.contains("N")) ts.n_norm = t.at("N").get<double>();
      if (t.contains("gamma")) ts.gamma = t.at("gamma").get<double>();
      Take(t, "d_ctx", ts.d_ctx);
      Take(t, "power_iters", ts.power_iters);
    }
  } catch (const json::exception& e) {
    throw ParameterError(std::string("bad config value: ") + e.what());
  }
  cfg.Validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return FromJson(buf.str());
}

std::string ExperimentConfig::ToJson() const {
  json j;
  if (matrix.mtx_path.empty()) {
    j["matrix"] = {{"rows", matrix.rows}, {"cols", matrix.cols}};
  } else {
    j["matrix"] = {{"mtx", matrix.mtx_path}};
  }
  switch (shifts.kind) {
    case ShiftLaw::Kind::kBeta:
      j["shifts"] = {{"law", "beta"}, {"a", shifts.a}, {"b", shifts.b}};
      break;
    case ShiftLaw::Kind::kList:
      j["shifts"] = {{"law", "list"}, {"values", shifts.values}};
      break;
    case ShiftLaw::Kind::kNone:
      j["shifts"] = {{"law", "none"}};
      break;
  }
  j["T"] = T;
  j["trials"] = trials;
  j["seed"] = seed;
  j["epsilon"] = epsilon;
  j["solver"] = std::string(to_string(solver));
  j["cap"] = cap;
  json t = {{"kind", tuner.kind},
            {"grid_d", tuner.grid_d},
            {"omega_lo", tuner.omega_lo},
            {"omega_max", tuner.omega_max},
            {"centered", tuner.centered},
            {"K", tuner.normalization},
            {"step_mode", tuner.step_mode == StepMode::kFixed ? "fixed" : "anytime"},
            {"eta", tuner.eta_scale},
            {"omega", tuner.fixed_omega},
            {"bins", tuner.bins},
            {"degree", tuner.degree},
            {"L", tuner.lipschitz},
            {"d_ctx", tuner.d_ctx},
            {"power_iters", tuner.power_iters}};
  if (tuner.n_norm) t["N"] = *tuner.n_norm;
  if (tuner.gamma) t["gamma"] = *tuner.gamma;
  j["tuner"] = std::move(t);
  j["comparators"] = comparators;
  j["instance_optimal_column"] = instance_optimal_column;
  j["threads"] = threads;
  return j.dump(2);
}

InstanceStream::InstanceStream(const ExperimentConfig& config, std::size_t n,
                               std::size_t trial)
    : law_(config.shifts),
      shift_rng_(derive_seed(config.seed, kShiftStream, trial)),
      targets_(n, derive_seed(config.seed, kTargetStream, trial)),
      gamma_a_(law_.kind == ShiftLaw::Kind::kBeta ? law_.a : 1.0, 1.0),
      gamma_b_(law_.kind == ShiftLaw::Kind::kBeta ? law_.b : 1.0, 1.0) {}

Instance InstanceStream::next() {
  Instance inst;
  switch (law_.kind) {
    case ShiftLaw::Kind::kBeta: {
      const double x = gamma_a_(shift_rng_);
      const double y = gamma_b_(shift_rng_);
      const double u = x + y > 0.0 ? x / (x + y) : 0.5;
      inst.c = (12.0 * u - 3.0) / 20.0;
      break;
    }
    case ShiftLaw::Kind::kList:
      inst.c = law_.values[index_ % law_.values.size()];
      break;
    case ShiftLaw::Kind::kNone:
      inst.c = 0.0;
      break;
  }
  ++index_;
  inst.b = targets_.sample();
  return inst;
}

std::vector<Instance> generate_stream(const ExperimentConfig& config,
                                      std::size_t trial) {
  config.Validate();
  const SparseMatrix a = config.matrix.Build();
  InstanceStream stream(config, a.size(), trial);
  std::vector<Instance> out;
  out.reserve(config.T);
  for (std::size_t t = 0; t < config.T; ++t) out.push_back(stream.next());
  return out;
}

std::uint64_t tuner_seed(std::uint64_t seed, std::size_t trial) {
  return derive_seed(seed, kTunerStream, trial);
}

SolveCost solve_cost(SolverKind kind, const SparseMatrix& a,
                     std::span<const double> b, double omega, double epsilon,
                     std::size_t cap) {
  SolverConfig cfg;
  cfg.omega = omega;
  cfg.tolerance = epsilon;
  cfg.tolerance_mode = default_tolerance_mode(kind);
  cfg.cap = cap;
  try {
    const SolveReport r = solve(kind, a, b, cfg);
    return {r.iterations, r.converged};
  } catch (const DivergenceError&) {
    return {cap, false};
  } catch (const NumericalError&) {
    return {cap, false};
  }
}

std::unique_ptr<Policy> make_policy(
    const ExperimentConfig& config, const ShiftedEnsemble& ensemble,
    std::shared_ptr<const InstanceOptimalOracle> oracle) {
  const TunerSpec& t = config.tuner;
  if (t.kind == "fixed") return std::make_unique<FixedPolicy>(t.fixed_omega);
  if (t.kind == "instance_optimal") {
    if (!oracle) oracle = std::make_shared<InstanceOptimalOracle>(ensemble);
    return std::make_unique<InstanceOptimalPolicy>(std::move(oracle));
  }
  if (t.kind == "approx_beta") {
    return std::make_unique<ApproxBetaBaseline>(ensemble, t.d_ctx,
                                                t.power_iters);
  }
  ActionGrid grid = make_grid(t.omega_lo, t.omega_max, t.grid_d, t.centered);
  if (t.kind == "tsallis") {
    return std::make_unique<TsallisPolicy>(std::move(grid), t.normalization,
                                           t.step_mode, config.T,
                                           t.eta_scale);
  }
  if (t.kind == "contextual") {
    return std::make_unique<ContextualPolicy>(
        ContextualTsallis(std::move(grid), t.bins, ensemble.c_min(),
                          ensemble.range(), t.normalization, t.eta_scale));
  }
  if (t.kind == "chebcb") {
    ChebConfig cc;
    cc.degree = t.degree;
    cc.c_min = ensemble.c_min();
    cc.range = ensemble.range();
    cc.normalization = t.normalization;
    cc.lipschitz = t.lipschitz;
    cc.n_norm = t.n_norm;
    cc.gamma = t.gamma;
    cc.horizon = config.T;
    return std::make_unique<ChebCBPolicy>(ChebCB(std::move(grid), cc));
  }
  throw ParameterError("unknown tuner '" + t.kind + "'");
}

namespace {

struct TrialOutput {
  std::vector<RunRecord> records;
  std::string tuner_name;
};

TrialOutput RunTrial(const ExperimentConfig& config,
                     const ShiftedEnsemble& ensemble,
                     const std::shared_ptr<const InstanceOptimalOracle>& oracle,
                     std::size_t trial) {
  TrialOutput out;
  std::unique_ptr<Policy> policy = make_policy(config, ensemble, oracle);
  out.tuner_name = policy->name();
  Rng rng(tuner_seed(config.seed, trial));
  InstanceStream stream(config, ensemble.base().size(), trial);
  out.records.reserve(config.T);
  std::size_t cumulative = 0;
  for (std::size_t t = 1; t <= config.T; ++t) {
    const Instance inst = stream.next();
    const SparseMatrix a = ensemble.at(inst.c);
    const PolicyDecision d = policy->select(inst.c, rng);
    const SolveCost cost =
        solve_cost(config.solver, a, inst.b, d.omega, config.epsilon, config.cap);
    policy->update(d, inst.c, cost.iterations);
    cumulative += cost.iterations;

    RunRecord r;
    r.trial = trial;
    r.t = t;
    r.c = inst.c;
    r.arm = d.probabilities.empty() ? -1 : static_cast<long>(d.arm);
    r.omega = d.omega;
    r.iterations = cost.iterations;
    r.converged = cost.converged;
    r.cumulative_iterations = cumulative;
    for (double w : config.comparators) {
      r.comparator_iterations.push_back(
          solve_cost(config.solver, a, inst.b, w, config.epsilon, config.cap)
              .iterations);
    }
    if (config.instance_optimal_column) {
      r.comparator_iterations.push_back(
          solve_cost(config.solver, a, inst.b, oracle->omega(inst.c),
                     config.epsilon, config.cap)
              .iterations);
    }
    out.records.push_back(std::move(r));
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.Validate();
  const ShiftedEnsemble ensemble(config.matrix.Build(), config.shifts.c_min(),
                                 config.shifts.range());
  std::shared_ptr<const InstanceOptimalOracle> oracle;
  if (config.instance_optimal_column || config.tuner.kind == "instance_optimal") {
    oracle = std::make_shared<InstanceOptimalOracle>(ensemble);
  }

  std::vector<TrialOutput> outputs(config.trials);
  std::vector<std::exception_ptr> errors(config.trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < config.trials; k = next++) {
      try {
        outputs[k] = RunTrial(config, ensemble, oracle, k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min(config.threads, config.trials);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ExperimentResult result;
  RunTable& table = result.table;
  table.tuner = outputs.front().tuner_name;
  table.seed = config.seed;
  for (double w : config.comparators) {
    table.comparator_names.push_back("fixed(" + short_double(w) + ")");
  }
  if (config.instance_optimal_column) {
    table.comparator_names.push_back("instance_optimal");
  }
  for (auto& o : outputs) {
    for (auto& r : o.records) table.records.push_back(std::move(r));
  }
  result.summary = summarize(table);
  return result;
}

ExperimentSummary summarize(const RunTable& table) {
  ExperimentSummary s;
  std::size_t trials = 0;
  for (const RunRecord& r : table.records) {
    trials = std::max(trials, r.trial + 1);
    s.T = std::max(s.T, r.t);
  }
  s.trials = trials;
  s.tuner.name = table.tuner;
  s.tuner.per_trial.assign(trials, 0);
  s.comparators.resize(table.comparator_names.size());
  for (std::size_t c = 0; c < s.comparators.size(); ++c) {
    s.comparators[c].name = table.comparator_names[c];
    s.comparators[c].per_trial.assign(trials, 0);
  }
  for (const RunRecord& r : table.records) {
    s.tuner.per_trial[r.trial] += r.iterations;
    if (!r.converged) ++s.diverged;
    if (r.comparator_iterations.size() != s.comparators.size()) {
      throw StructuralError("record has the wrong number of comparator columns");
    }
    for (std::size_t c = 0; c < s.comparators.size(); ++c) {
      s.comparators[c].per_trial[r.trial] += r.comparator_iterations[c];
    }
  }
  s.tuner.mean = Mean(s.tuner.per_trial);
  for (auto& c : s.comparators) c.mean = Mean(c.per_trial);

  bool any_fixed = false;
  double regret_fixed = 0.0, regret_io = 0.0;
  std::optional<std::size_t> io;
  for (std::size_t c = 0; c < s.comparators.size(); ++c) {
    if (s.comparators[c].name == "instance_optimal") io = c;
    else any_fixed = true;
  }
  for (std::size_t k = 0; k < trials; ++k) {
    const double tuner = static_cast<double>(s.tuner.per_trial[k]);
    if (any_fixed) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < s.comparators.size(); ++c) {
        if (io && c == *io) continue;
        best = std::min(best, static_cast<double>(s.comparators[c].per_trial[k]));
      }
      regret_fixed += tuner - best;
    }
    if (io) regret_io += tuner - static_cast<double>(s.comparators[*io].per_trial[k]);
  }
  if (trials > 0 && any_fixed) regret_fixed /= static_cast<double>(trials);
  if (trials > 0 && io) regret_io /= static_cast<double>(trials);
  if (any_fixed) s.regret_vs_best_fixed = regret_fixed;
  if (io) s.regret_vs_instance_optimal = regret_io;
  return s;
}

void write_csv(std::ostream& out, const RunTable& table) {
  out << "# relax tune seed=" << table.seed << " tuner=" << table.tuner << "\n";
  out << "trial,t,c,arm,omega,iterations,converged,cumulative_iterations";
  for (const auto& name : table.comparator_names) out << ',' << name;
  out << '\n';
  for (const RunRecord& r : table.records) {
    out << r.trial << ',' << r.t << ',' << format_double(r.c) << ',' << r.arm
        << ',' << format_double(r.omega) << ',' << r.iterations << ','
        << (r.converged ? 1 : 0) << ',' << r.cumulative_iterations;
    for (std::size_t v : r.comparator_iterations) out << ',' << v;
    out << '\n';
  }
}

RunTable read_csv(std::istream& in) {
  RunTable table;
  std::string line;
  bool header = false;
  std::size_t width = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream meta(line.substr(1));
      std::string tok;
      while (meta >> tok) {
        if (tok.rfind("seed=", 0) == 0) table.seed = std::stoull(tok.substr(5));
        if (tok.rfind("tuner=", 0) == 0) table.tuner = tok.substr(6);
      }
      continue;
    }
    const auto cells = SplitCsv(line);
    if (!header) {
      static const char* kFixed[] = {"trial", "t", "c", "arm", "omega",
                                     "iterations", "converged",
                                     "cumulative_iterations"};
      if (cells.size() < 8) throw StructuralError("CSV header is too short");
      for (std::size_t i = 0; i < 8; ++i) {
        if (cells[i] != kFixed[i]) {
          throw StructuralError("unexpected CSV column '" + cells[i] + "'");
        }
      }
      table.comparator_names.assign(cells.begin() + 8, cells.end());
      width = cells.size();
      header = true;
      continue;
    }
    if (cells.size() != width) {
      throw StructuralError("CSV line " + std::to_string(line_no) +
                            " has the wrong number of fields");
    }
    try {
      RunRecord r;
      r.trial = std::stoull(cells[0]);
      r.t = std::stoull(cells[1]);
      r.c = std::stod(cells[2]);
      r.arm = std::stol(cells[3]);
      r.omega = std::stod(cells[4]);
      r.iterations = std::stoull(cells[5]);
      r.converged = cells[6] == "1";
      r.cumulative_iterations = std::stoull(cells[7]);
      for (std::size_t i = 8; i < width; ++i) {
        r.comparator_iterations.push_back(std::stoull(cells[i]));
      }
      table.records.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw StructuralError("CSV line " + std::to_string(line_no) +
                            " is not numeric");
    }
  }
  if (!header) throw StructuralError("CSV has no header");
  return table;
}

std::string summary_json(const ExperimentConfig& config,
                         const ExperimentSummary& summary) {
  auto total = [](const PolicyTotal& p) {
    return json{{"name", p.name}, {"per_trial", p.per_trial}, {"mean", p.mean}};
  };
  json j;
  j["config"] = json::parse(config.ToJson());
  j["trials"] = summary.trials;
  j["T"] = summary.T;
  j["tuner"] = total(summary.tuner);
  json comps = json::array();
  for (const auto& c : summary.comparators) comps.push_back(total(c));
  j["comparators"] = std::move(comps);
  j["unconverged_runs"] = summary.diverged;
  if (summary.regret_vs_best_fixed) {
    j["regret_vs_best_fixed"] = *summary.regret_vs_best_fixed;
  }
  if (summary.regret_vs_instance_optimal) {
    j["regret_vs_instance_optimal"] = *summary.regret_vs_instance_optimal;
  }
  return j.dump(2);
}

RegretMode parse_regret_mode(std::string_view name) {
  if (name == "fixed_arm") return RegretMode::kFixedArm;
  if (name == "instance_optimal") return RegretMode::kInstanceOptimal;
  throw ParameterError("regret mode must be fixed_arm or instance_optimal");
}

RegretReport regret_report(const RunTable& table, RegretMode mode) {
  std::vector<std::size_t> columns;
  for (std::size_t c = 0; c < table.comparator_names.size(); ++c) {
    const bool io = table.comparator_names[c] == "instance_optimal";
    if ((mode == RegretMode::kInstanceOptimal) == io) columns.push_back(c);
  }
  if (columns.empty()) {
    throw StructuralError(mode == RegretMode::kFixedArm
                              ? "no fixed comparator columns"
                              : "no instance_optimal column");
  }
  RegretReport rep;
  rep.comparator = mode == RegretMode::kFixedArm ? "best fixed" : "instance_optimal";
  std::size_t trials = 0;
  for (const RunRecord& r : table.records) trials = std::max(trials, r.trial + 1);
  rep.trajectories.assign(trials, {});
  std::vector<double> tuner(trials, 0.0);
  std::vector<std::vector<double>> cum(trials, std::vector<double>(columns.size(), 0.0));
  for (const RunRecord& r : table.records) {
    if (r.comparator_iterations.size() != table.comparator_names.size()) {
      throw StructuralError("record has the wrong number of comparator columns");
    }
    tuner[r.trial] += static_cast<double>(r.iterations);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < columns.size(); ++k) {
      cum[r.trial][k] += static_cast<double>(r.comparator_iterations[columns[k]]);
      best = std::min(best, cum[r.trial][k]);
    }
    rep.trajectories[r.trial].push_back(tuner[r.trial] - best);
  }
  for (std::size_t k = 0; k < trials; ++k) {
    const auto& traj = rep.trajectories[k];
    rep.final_average.push_back(
        traj.empty() ? 0.0 : traj.back() / static_cast<double>(traj.size()));
  }
  const double n = static_cast<double>(rep.final_average.size());
  if (n > 0) {
    rep.mean = std::accumulate(rep.final_average.begin(), rep.final_average.end(), 0.0) / n;
    if (n > 1) {
      double ss = 0.0;
      for (double v : rep.final_average) ss += (v - rep.mean) * (v - rep.mean);
      rep.stderr_ = std::sqrt(ss / (n - 1.0) / n);
    }
  }
  return rep;
}

std::string asymptotic_curves(const SweepOptions& o) {
  if (o.omegas.empty()) throw ParameterError("sweep needs at least one omega");
  if (o.targets < 1) throw ParameterError("sweep needs at least one target");
  const SparseMatrix a = shift(o.matrix.Build(), o.shift);
  TargetSampler sampler(a.size(), derive_seed(o.seed, kTargetStream, 0));
  std::vector<Vector> targets;
  for (std::size_t k = 0; k < o.targets; ++k) targets.push_back(sampler.sample());

  std::vector<double> mean(o.omegas.size(), 0.0), worst(o.omegas.size(), 0.0);
  for (std::size_t i = 0; i < o.omegas.size(); ++i) {
    for (const Vector& b : targets) {
      const double it = static_cast<double>(
          solve_cost(o.solver, a, b, o.omegas[i], o.epsilon, o.cap).iterations);
      mean[i] += it / static_cast<double>(targets.size());
      worst[i] = std::max(worst[i], it);
    }
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> bound(o.omegas.size(), nan), cap(o.omegas.size(), nan);
  if (o.solver == SolverKind::kSor) {
    const double beta = jacobi_spectral_radius(a);
    double tau = 0.0;
    for (double w : o.omegas) {
      for (const Vector& b : targets) {
        tau = std::max(tau, estimate_tau(a, b, w, o.epsilon, beta).tau);
      }
    }
    SpectralProfile p;
    p.beta = beta;
    p.tau = tau;
    p.epsilon = o.epsilon;
    p.omega_max = *std::max_element(o.omegas.begin(), o.omegas.end());
    for (std::size_t i = 0; i < o.omegas.size(); ++i) {
      try {
        bound[i] = surrogate_bound(p, o.omegas[i]);
      } catch (const NumericalError&) {
        bound[i] = std::numeric_limits<double>::infinity();
      }
    }
  } else if (o.solver == SolverKind::kPcg) {
    const CGProfile p = cg_profile(a);
    for (std::size_t i = 0; i < o.omegas.size(); ++i) {
      bound[i] = cg_bound(p, o.omegas[i], o.epsilon);
    }
  }
  if (o.solver != SolverKind::kPcg) {
    const EnergyInputs in = energy_inputs(a);
    double b_max = 0.0;
    for (const Vector& b : targets) b_max = std::max(b_max, norm2(b));
    for (std::size_t i = 0; i < o.omegas.size(); ++i) {
      const auto k = energy_cap(in, o.omegas[i], o.epsilon,
                                default_tolerance_mode(o.solver), b_max);
      cap[i] = k ? static_cast<double>(*k) : std::numeric_limits<double>::infinity();
    }
  }

  std::ostringstream out;
  out << "omega,measured_mean,measured_max,surrogate,energy_cap\n";
  for (std::size_t i = 0; i < o.omegas.size(); ++i) {
    out << format_double(o.omegas[i]) << ',' << format_double(mean[i]) << ','
        << format_double(worst[i]) << ',' << format_double(bound[i]) << ','
        << format_double(cap[i]) << '\n';
  }
  return out.str();
}

std::string comparator_avg(const ExperimentConfig& config,
                           const std::vector<double>& omegas) {
  config.Validate();
  if (omegas.empty()) throw ParameterError("comparator_avg needs omegas");
  const ShiftedEnsemble ensemble(config.matrix.Build(), config.shifts.c_min(),
                                 config.shifts.range());
  const InstanceOptimalOracle oracle(ensemble);
  InstanceStream stream(config, ensemble.base().size(), 0);
  std::vector<double> sums(omegas.size(), 0.0);
  double io = 0.0;
  for (std::size_t t = 0; t < config.T; ++t) {
    const Instance inst = stream.next();
    const SparseMatrix a = ensemble.at(inst.c);
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      sums[i] += static_cast<double>(
          solve_cost(config.solver, a, inst.b, omegas[i], config.epsilon,
                     config.cap)
              .iterations);
    }
    io += static_cast<double>(solve_cost(config.solver, a, inst.b,
                                         oracle.omega(inst.c), config.epsilon,
                                         config.cap)
                                  .iterations);
  }
  const double n = static_cast<double>(config.T);
  std::ostringstream out;
  out << "policy,omega,avg_iterations\n";
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    out << "fixed," << format_double(omegas[i]) << ','
        << format_double(sums[i] / n) << '\n';
  }
  out << "instance_optimal,nan," << format_double(io / n) << '\n';
  return out.str();
}

std::string learning_curve(const RunTable& table) {
  std::size_t trials = 0, horizon = 0;
  for (const RunRecord& r : table.records) {
    trials = std::max(trials, r.trial + 1);
    horizon = std::max(horizon, r.t);
  }
  const std::size_t cols = 1 + table.comparator_names.size();
  std::vector<std::vector<double>> sum(horizon, std::vector<double>(cols, 0.0));
  std::vector<std::vector<double>> cum(trials, std::vector<double>(cols, 0.0));
  for (const RunRecord& r : table.records) {
    if (r.t < 1) throw StructuralError("record with t = 0");
    cum[r.trial][0] += static_cast<double>(r.iterations);
    for (std::size_t c = 1; c < cols; ++c) {
      cum[r.trial][c] += static_cast<double>(r.comparator_iterations.at(c - 1));
    }
    for (std::size_t c = 0; c < cols; ++c) sum[r.t - 1][c] += cum[r.trial][c];
  }
  std::ostringstream out;
  out << "t," << (table.tuner.empty() ? "tuner" : table.tuner);
  for (const auto& name : table.comparator_names) out << ',' << name;
  out << '\n';
  for (std::size_t t = 0; t < horizon; ++t) {
    out << t + 1;
    for (std::size_t c = 0; c < cols; ++c) {
      out << ',' << format_double(sum[t][c] / static_cast<double>(trials));
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace relax
