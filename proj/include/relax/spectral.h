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

#ifndef RELAX_SPECTRAL_H_
#define RELAX_SPECTRAL_H_

#include <cstddef>
#include <functional>
#include <span>

#include "relax/sparse_matrix.h"

namespace relax {

using LinearOperator =
    std::function<void(std::span<const double>, std::span<double>)>;

struct PowerResult {
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

// Largest eigenvalue magnitude of a symmetric operator, estimated as ||S x||
// over unit iterates x. Starts from a fixed pseudo-random positive vector.
// Stops when successive estimates agree to relative tolerance `tol`, or after
// `max_iterations` applications (converged = false). A `tol` of zero runs
// exactly `max_iterations` steps.
PowerResult power_iteration(const LinearOperator& op, std::size_t n,
                            double tol, std::size_t max_iterations);

// Applies I - D^{-1/2} A D^{-1/2}.
LinearOperator symmetric_jacobi_operator(const SparseMatrix& a);

inline constexpr std::size_t kPowerIterationCap = 10000;
inline constexpr double kPowerIterationTol = 1e-8;

// beta = rho(I - D^{-1} A), via the symmetric similar matrix. Throws
// ConvergenceError (carrying the last estimate) at the iteration cap.
double jacobi_spectral_radius(const SparseMatrix& a,
                              double tol = kPowerIterationTol,
                              std::size_t cap = kPowerIterationCap);

// Fixed-budget variant used by the approximate-beta baseline: exactly `steps`
// operator applications.
double jacobi_spectral_radius_steps(const SparseMatrix& a, std::size_t steps);

double largest_eigenvalue(const SparseMatrix& a,
                          double tol = kPowerIterationTol,
                          std::size_t cap = 100 * kPowerIterationCap);

// Power iteration on (sigma I - A) with sigma a Gershgorin upper bound.
double smallest_eigenvalue(const SparseMatrix& a,
                           double tol = kPowerIterationTol,
                           std::size_t cap = 100 * kPowerIterationCap);

// Family A + c I for c in [c_min, c_min + range].
class ShiftedEnsemble {
 public:
  // Throws StructuralError unless A + c_min I is positive definite.
  ShiftedEnsemble(SparseMatrix base, double c_min, double range);

  const SparseMatrix& base() const { return base_; }
  double c_min() const { return c_min_; }
  double range() const { return range_; }
  double c_max() const { return c_min_ + range_; }
  bool contains(double c) const { return c >= c_min_ && c <= c_max(); }
  SparseMatrix at(double c) const { return shift(base_, c); }

 private:
  SparseMatrix base_;
  double c_min_;
  double range_;
};

}  // namespace relax

#endif  // RELAX_SPECTRAL_H_
