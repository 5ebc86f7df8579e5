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

#ifndef RELAX_SOLVERS_H_
#define RELAX_SOLVERS_H_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "relax/sparse_matrix.h"

namespace relax {

enum class ToleranceMode { kRelative, kAbsolute };

struct SolverConfig {
  double omega = 1.0;
  double tolerance = 1e-8;
  ToleranceMode tolerance_mode = ToleranceMode::kRelative;
  std::size_t cap = 10000;
  bool record_history = false;

  // Throws ParameterError unless omega is in (0, 2), tolerance > 0, cap >= 1.
  void Validate() const;
};

// `iterations` counts applications of the sweep (or CG steps) performed
// before the convergence test passed; the test runs before every update, so
// a zero right-hand side reports 0. `converged` is false exactly when the cap
// was reached without passing the test.
struct SolveReport {
  std::size_t iterations = 0;
  bool converged = false;
  double final_residual = 0.0;
  // ||r_k||_2 for k = 0..iterations when history is recorded.
  std::vector<double> residual_history;
  Vector solution;
};

// Residual norms beyond this multiple of max(1, ||r_0||) abort the solve.
inline constexpr double kDivergenceFactor = 1e15;

// SOR from x = 0 with the relative test ||r_k|| <= eps ||b||. The residual is
// recomputed as b - A x after every sweep.
SolveReport sor_solve(const SparseMatrix& a, std::span<const double> b,
                      const SolverConfig& cfg);

// Symmetric SOR from x = 0 with the absolute test ||r_k|| <= eps.
SolveReport ssor_solve(const SparseMatrix& a, std::span<const double> b,
                       const SolverConfig& cfg);

// Conjugate gradient preconditioned by the SSOR matrix, relative test.
SolveReport pcg_ssor_solve(const SparseMatrix& a, std::span<const double> b,
                           const SolverConfig& cfg);

// Unpreconditioned CG (cfg.omega is ignored), relative test.
SolveReport cg_solve(const SparseMatrix& a, std::span<const double> b,
                     const SolverConfig& cfg);

enum class SolverKind { kSor, kSsor, kPcg };

SolverKind parse_solver_kind(std::string_view name);
std::string_view to_string(SolverKind kind);
ToleranceMode default_tolerance_mode(SolverKind kind);

SolveReport solve(SolverKind kind, const SparseMatrix& a,
                  std::span<const double> b, const SolverConfig& cfg);

// z = W_ssor^{-1} r with W_ssor = (omega / (2 - omega)) (D/omega + L) D^{-1}
// (D/omega + L^T), applied as two triangular solves and a diagonal scaling.
void apply_ssor_inverse(const Splitting& s, double omega,
                        std::span<const double> r, std::span<double> z);

}  // namespace relax

#endif  // RELAX_SOLVERS_H_
