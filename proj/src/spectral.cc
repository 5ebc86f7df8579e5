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

#include "relax/spectral.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "relax/error.h"

namespace relax {
namespace {

Vector StartVector(std::size_t n) {
  std::mt19937_64 rng(0x5eed5eedULL);
  std::uniform_real_distribution<double> unif(0.5, 1.5);
  Vector x(n);
  for (double& v : x) v = unif(rng);
  const double nx = norm2(x);
  for (double& v : x) v /= nx;
  return x;
}

}  // namespace

PowerResult power_iteration(const LinearOperator& op, std::size_t n,
                            double tol, std::size_t max_iterations) {
  PowerResult result;
  if (n == 0) {
    result.converged = true;
    return result;
  }
  Vector x = StartVector(n);
  Vector y(n);
  double previous = 0.0;
  for (std::size_t k = 1; k <= max_iterations; ++k) {
    op(x, y);
    const double lambda = norm2(y);
    result.value = lambda;
    result.iterations = k;
    if (lambda == 0.0) {
      result.converged = true;
      return result;
    }
    if (tol > 0.0 && k > 1 && std::abs(lambda - previous) <= tol * lambda) {
      result.converged = true;
      return result;
    }
    previous = lambda;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / lambda;
  }
  result.converged = tol <= 0.0;
  return result;
}

LinearOperator symmetric_jacobi_operator(const SparseMatrix& a) {
  Vector inv_sqrt_d = a.diagonal();
  for (double& v : inv_sqrt_d) {
    if (!(v > 0.0)) throw StructuralError("nonpositive diagonal");
    v = 1.0 / std::sqrt(v);
  }
  return [&a, inv_sqrt_d](std::span<const double> x, std::span<double> y) {
    const std::size_t n = a.size();
    const auto& off = a.row_offsets();
    const auto& cols = a.col_indices();
    const auto& vals = a.values();
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (std::size_t k = off[i]; k < off[i + 1]; ++k) {
        const std::size_t j = cols[k];
        if (j != i) sum -= vals[k] * inv_sqrt_d[j] * x[j];
      }
      y[i] = inv_sqrt_d[i] * sum;
    }
  };
}

double jacobi_spectral_radius(const SparseMatrix& a, double tol,
                              std::size_t cap) {
  const PowerResult r =
      power_iteration(symmetric_jacobi_operator(a), a.size(), tol, cap);
  if (!r.converged) {
    throw ConvergenceError("Jacobi spectral radius did not converge in " +
                               std::to_string(cap) + " iterations",
                           r.value);
  }
  return r.value;
}

double jacobi_spectral_radius_steps(const SparseMatrix& a, std::size_t steps) {
  return power_iteration(symmetric_jacobi_operator(a), a.size(), 0.0, steps)
      .value;
}

double largest_eigenvalue(const SparseMatrix& a, double tol, std::size_t cap) {
  const PowerResult r = power_iteration(
      [&a](std::span<const double> x, std::span<double> y) { matvec(a, x, y); },
      a.size(), tol, cap);
  if (!r.converged) {
    throw ConvergenceError("largest eigenvalue did not converge", r.value);
  }
  return r.value;
}

double smallest_eigenvalue(const SparseMatrix& a, double tol,
                           std::size_t cap) {
  double sigma = 0.0;
  const auto& off = a.row_offsets();
  const auto& vals = a.values();
  const auto& cols = a.col_indices();
  for (std::size_t i = 0; i < a.size(); ++i) {
    double radius = 0.0;
    for (std::size_t k = off[i]; k < off[i + 1]; ++k) {
      radius += cols[k] == i ? vals[k] : std::abs(vals[k]);
    }
    sigma = std::max(sigma, radius);
  }
  const PowerResult r = power_iteration(
      [&a, sigma](std::span<const double> x, std::span<double> y) {
        matvec(a, x, y);
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = sigma * x[i] - y[i];
      },
      a.size(), tol, cap);
  if (!r.converged) {
    throw ConvergenceError("smallest eigenvalue did not converge",
                           sigma - r.value);
  }
  return sigma - r.value;
}

ShiftedEnsemble::ShiftedEnsemble(SparseMatrix base, double c_min, double range)
    : base_(std::move(base)), c_min_(c_min), range_(range) {
  if (!(range_ >= 0.0) || !std::isfinite(c_min_)) {
    throw ParameterError("shift range must be finite and nonnegative");
  }
  const Vector d = base_.diagonal();
  if (*std::min_element(d.begin(), d.end()) + c_min_ <= 0.0) {
    throw StructuralError("shift c_min makes a diagonal entry nonpositive");
  }
  const double lambda_min = smallest_eigenvalue(base_);
  if (!(lambda_min + c_min_ > 0.0)) {
    throw StructuralError(
        "A + c_min I is not positive definite: lambda_min(A) = " +
        std::to_string(lambda_min) + ", c_min = " + std::to_string(c_min_));
  }
}

}  // namespace relax
