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

#include "relax/solvers.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "relax/error.h"

namespace relax {
namespace {

void RequireMode(const SolverConfig& cfg, ToleranceMode mode,
                 const char* solver) {
  cfg.Validate();
  if (cfg.tolerance_mode != mode) {
    throw ParameterError(std::string(solver) +
                         (mode == ToleranceMode::kRelative
                              ? " uses a relative tolerance"
                              : " uses an absolute tolerance"));
  }
}

// Shared bookkeeping for the residual test, history, and divergence guard.
class Monitor {
 public:
  Monitor(const SolverConfig& cfg, double r0_norm, SolveReport& report)
      : cfg_(cfg),
        threshold_(cfg.tolerance_mode == ToleranceMode::kRelative
                       ? cfg.tolerance * r0_norm
                       : cfg.tolerance),
        blowup_(kDivergenceFactor * std::max(1.0, r0_norm)),
        report_(report) {}

  // Records ||r_k|| and returns true when the test passes.
  bool Check(double residual_norm, std::size_t k) {
    if (!std::isfinite(residual_norm) || residual_norm > blowup_) {
      throw DivergenceError("residual diverged at iteration " +
                                std::to_string(k),
                            k);
    }
    report_.iterations = k;
    report_.final_residual = residual_norm;
    if (cfg_.record_history) report_.residual_history.push_back(residual_norm);
    if (residual_norm <= threshold_) {
      report_.converged = true;
      return true;
    }
    return false;
  }

 private:
  const SolverConfig& cfg_;
  double threshold_;
  double blowup_;
  SolveReport& report_;
};

void Residual(const SparseMatrix& a, std::span<const double> b,
              std::span<const double> x, std::span<double> r) {
  matvec(a, x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
}

// Stationary iteration x <- x + W^{-1} r shared by SOR and SSOR.
template <typename ApplyInverse>
SolveReport Stationary(const SparseMatrix& a, std::span<const double> b,
                       const SolverConfig& cfg, ApplyInverse&& apply_inverse) {
  const std::size_t n = a.size();
  if (b.size() != n) throw StructuralError("right-hand side dimension mismatch");
  SolveReport report;
  report.solution.assign(n, 0.0);
  Vector r(b.begin(), b.end());
  Vector z(n);
  Monitor monitor(cfg, norm2(r), report);
  for (std::size_t k = 0;; ++k) {
    if (monitor.Check(norm2(r), k)) break;
    if (k == cfg.cap) break;
    apply_inverse(r, z);
    for (std::size_t i = 0; i < n; ++i) report.solution[i] += z[i];
    Residual(a, b, report.solution, r);
  }
  return report;
}

SolveReport ConjugateGradient(const SparseMatrix& a, std::span<const double> b,
                              const SolverConfig& cfg,
                              const Splitting* preconditioner) {
  const std::size_t n = a.size();
  if (b.size() != n) throw StructuralError("right-hand side dimension mismatch");
  SolveReport report;
  report.solution.assign(n, 0.0);
  Vector r(b.begin(), b.end());
  Vector z(n), p(n), q(n);
  auto precondition = [&](const Vector& in, Vector& out) {
    if (preconditioner != nullptr) {
      apply_ssor_inverse(*preconditioner, cfg.omega, in, out);
    } else {
      out = in;
    }
  };
  Monitor monitor(cfg, norm2(r), report);
  if (monitor.Check(norm2(r), 0)) return report;
  precondition(r, z);
  p = z;
  double rz = dot(r, z);
  for (std::size_t k = 1; k <= cfg.cap; ++k) {
    matvec(a, p, q);
    const double pq = dot(p, q);
    if (!(pq > 0.0)) {
      throw NumericalError(
          "conjugate gradient breakdown: p^T A p <= 0 (matrix not positive "
          "definite)");
    }
    const double alpha = rz / pq;
    for (std::size_t i = 0; i < n; ++i) {
      report.solution[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    if (monitor.Check(norm2(r), k)) break;
    precondition(r, z);
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  return report;
}

}  // namespace

void SolverConfig::Validate() const {
  if (!(omega > 0.0 && omega < 2.0)) {
    throw ParameterError("omega must lie in (0, 2), got " +
                         std::to_string(omega));
  }
  if (!(tolerance > 0.0)) throw ParameterError("tolerance must be positive");
  if (cap < 1) throw ParameterError("iteration cap must be at least 1");
}

void apply_ssor_inverse(const Splitting& s, double omega,
                        std::span<const double> r, std::span<double> z) {
  if (omega == 2.0) throw ParameterError("SSOR is undefined at omega = 2");
  const TriangularOperator lower = TriangularOperator::Relaxed(s, omega, true);
  const TriangularOperator upper = TriangularOperator::Relaxed(s, omega, false);
  Vector w = triangular_solve(lower, r);
  const double scale = (2.0 - omega) / omega;
  for (std::size_t i = 0; i < w.size(); ++i) w[i] *= scale * s.diag[i];
  triangular_solve(upper, w, z);
}

SolveReport sor_solve(const SparseMatrix& a, std::span<const double> b,
                      const SolverConfig& cfg) {
  RequireMode(cfg, ToleranceMode::kRelative, "SOR");
  const Splitting s = split(a);
  const TriangularOperator sweep =
      TriangularOperator::Relaxed(s, cfg.omega, true);
  return Stationary(a, b, cfg, [&](const Vector& r, Vector& z) {
    triangular_solve(sweep, r, z);
  });
}

SolveReport ssor_solve(const SparseMatrix& a, std::span<const double> b,
                       const SolverConfig& cfg) {
  RequireMode(cfg, ToleranceMode::kAbsolute, "SSOR");
  const Splitting s = split(a);
  return Stationary(a, b, cfg, [&](const Vector& r, Vector& z) {
    apply_ssor_inverse(s, cfg.omega, r, z);
  });
}

SolveReport pcg_ssor_solve(const SparseMatrix& a, std::span<const double> b,
                           const SolverConfig& cfg) {
  RequireMode(cfg, ToleranceMode::kRelative, "preconditioned CG");
  const Splitting s = split(a);
  return ConjugateGradient(a, b, cfg, &s);
}

SolveReport cg_solve(const SparseMatrix& a, std::span<const double> b,
                     const SolverConfig& cfg) {
  SolverConfig plain = cfg;
  plain.omega = 1.0;
  RequireMode(plain, ToleranceMode::kRelative, "CG");
  return ConjugateGradient(a, b, plain, nullptr);
}

SolverKind parse_solver_kind(std::string_view name) {
  if (name == "sor") return SolverKind::kSor;
  if (name == "ssor") return SolverKind::kSsor;
  if (name == "pcg") return SolverKind::kPcg;
  throw ParameterError("unknown solver kind: " + std::string(name));
}

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::kSor:
      return "sor";
    case SolverKind::kSsor:
      return "ssor";
    case SolverKind::kPcg:
      return "pcg";
  }
  return "?";
}

ToleranceMode default_tolerance_mode(SolverKind kind) {
  return kind == SolverKind::kSsor ? ToleranceMode::kAbsolute
                                   : ToleranceMode::kRelative;
}

SolveReport solve(SolverKind kind, const SparseMatrix& a,
                  std::span<const double> b, const SolverConfig& cfg) {
  switch (kind) {
    case SolverKind::kSor:
      return sor_solve(a, b, cfg);
    case SolverKind::kSsor:
      return ssor_solve(a, b, cfg);
    case SolverKind::kPcg:
      return pcg_ssor_solve(a, b, cfg);
  }
  throw ParameterError("unknown solver kind");
}

}  // namespace relax
