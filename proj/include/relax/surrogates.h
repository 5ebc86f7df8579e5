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

#ifndef RELAX_SURROGATES_H_
#define RELAX_SURROGATES_H_

#include <cstddef>
#include <optional>
#include <span>

#include "relax/solvers.h"
#include "relax/sparse_matrix.h"

namespace relax {

// Spectral radius of the SOR defect reduction matrix C_omega for a
// consistently ordered SPD matrix with Jacobi radius beta (Young's formula).
double young_rho(double beta, double omega);

// omega* = 1 + beta^2 / (1 + sqrt(1 - beta^2))^2, the minimiser of young_rho.
double optimal_omega(double beta);

struct SpectralProfile {
  double beta = 0.0;
  double tau = 0.3;
  double omega_max = 1.9;
  double epsilon = 1e-8;

  // tau + (1 - tau) max(beta^2, omega_max - 1).
  double alpha() const;
  void Validate() const;
};

// U(omega) = 1 + (-log eps) / (-log(rho + tau (1 - rho))), rho = young_rho.
// Throws NumericalError when the surrogate rate is >= 1.
double surrogate_bound(const SpectralProfile& profile, double omega);

// 1 + (-log eps) / (-log alpha): uniform bound on U over (0, omega_max].
double surrogate_uniform_bound(const SpectralProfile& profile);

// Lipschitz constant of U on [omega*, omega_max] when tau >= e^-2.
double surrogate_lipschitz(const SpectralProfile& profile);

struct TauEstimate {
  double tau = 0.0;
  // Index k = min{i : ||C^{i+1} b|| < eps ||b||}.
  std::size_t k = 0;
  // ||C^k||_2^{1/k}, zero when k = 0.
  double sigma = 0.0;
  double rho = 0.0;
};

inline constexpr std::size_t kTauMaxDimension = 20000;

// Smallest tau with ||C_omega^k||_2 <= (rho + tau (1 - rho))^k at the last
// pre-convergence index k. The spectral norm comes from power iteration on
// (C^k)^T C^k applied through sparse sweeps. `beta` defaults to
// jacobi_spectral_radius(a). Throws ParameterError for n > kTauMaxDimension
// and NumericalError when the powers do not reach eps within `max_power`.
TauEstimate estimate_tau(const SparseMatrix& a, std::span<const double> b,
                         double omega, double epsilon,
                         std::optional<double> beta = std::nullopt,
                         std::size_t max_power = 1000000);

// Inputs of the preconditioned CG bound.
struct CGProfile {
  double mu = 1.0;     // lambda_max(D A^{-1})
  double nu = 0.0;     // lambda_max((L D^{-1} L^T - D/4) A^{-1})
  double kappa = 1.0;  // condition number of A
  double tau = 1.0;

  void Validate() const;
};

inline constexpr std::size_t kDenseProfileMaxDimension = 2000;

// Dense generalized eigensolves; n <= kDenseProfileMaxDimension.
CGProfile cg_profile(const SparseMatrix& a);

// Upper bound on SSOR-preconditioned CG iterations for relative tolerance eps.
double cg_bound(const CGProfile& profile, double omega, double epsilon);

// 2 / (1 + sqrt((2 / mu)(1 + 2 nu))), the minimiser of cg_bound when mu > 1.
double cg_optimal_omega(const CGProfile& profile);

// Spectral inputs of the energy-norm contraction bound.
struct EnergyInputs {
  double gamma = 1.0;        // 1 - rho(D^{-1}(L + L^T))
  double rho_lower = 0.0;    // rho(D^{-1} L D^{-1} L^T)
  double kappa = 1.0;        // condition number of A
};

EnergyInputs energy_inputs(const SparseMatrix& a);

// Upper bound on the squared energy norm of the SOR iteration matrix.
double energy_norm_bound(const EnergyInputs& in, double omega);

// Iteration cap certified by the energy-norm bound: SOR with the relative
// test (b_norm unused) or SSOR with the absolute test. nullopt when the bound
// does not certify contraction, in which case callers fall back to a
// configured cap.
std::optional<std::size_t> energy_cap(const EnergyInputs& in, double omega,
                                      double epsilon, ToleranceMode mode,
                                      double b_norm);
std::optional<std::size_t> energy_cap(const SparseMatrix& a, double omega,
                                      double epsilon, ToleranceMode mode,
                                      double b_norm);

}  // namespace relax

#endif  // RELAX_SURROGATES_H_
