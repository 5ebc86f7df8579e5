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

#include "relax/surrogates.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "relax/error.h"
#include "relax/spectral.h"

namespace relax {
namespace {

void RequireBeta(double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw ParameterError("Jacobi radius beta must lie in [0, 1), got " +
                         std::to_string(beta));
  }
}

void RequireOmega(double omega) {
  if (!(omega > 0.0 && omega < 2.0)) {
    throw ParameterError("omega must lie in (0, 2), got " +
                         std::to_string(omega));
  }
}

Eigen::MatrixXd Dense(const SparseMatrix& a) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(a.size(), a.size());
  for (const Triplet& t : a.triplets()) m(t.row, t.col) = t.value;
  return m;
}

}  // namespace

double young_rho(double beta, double omega) {
  RequireBeta(beta);
  RequireOmega(omega);
  if (omega >= optimal_omega(beta)) return omega - 1.0;
  const double disc =
      std::max(0.0, omega * omega * beta * beta - 4.0 * (omega - 1.0));
  const double root = omega * beta + std::sqrt(disc);
  return 0.25 * root * root;
}

double optimal_omega(double beta) {
  RequireBeta(beta);
  const double q = beta / (1.0 + std::sqrt(1.0 - beta * beta));
  return 1.0 + q * q;
}

double SpectralProfile::alpha() const {
  return tau + (1.0 - tau) * std::max(beta * beta, omega_max - 1.0);
}

void SpectralProfile::Validate() const {
  RequireBeta(beta);
  if (!(tau >= 0.0 && tau < 1.0)) throw ParameterError("tau must lie in [0, 1)");
  if (!(omega_max > 0.0 && omega_max < 2.0)) {
    throw ParameterError("omega_max must lie in (0, 2)");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ParameterError("epsilon must lie in (0, 1)");
  }
}

double surrogate_bound(const SpectralProfile& profile, double omega) {
  profile.Validate();
  if (!(omega > 0.0 && omega <= profile.omega_max)) {
    throw ParameterError("surrogate bound needs omega in (0, omega_max]");
  }
  const double rho = young_rho(profile.beta, omega);
  const double rate = rho + profile.tau * (1.0 - rho);
  if (!(rate < 1.0)) {
    throw NumericalError("surrogate rate >= 1; convergence not certified");
  }
  if (rate == 0.0) return 1.0;
  return 1.0 + std::log(profile.epsilon) / std::log(rate);
}

double surrogate_uniform_bound(const SpectralProfile& profile) {
  profile.Validate();
  const double a = profile.alpha();
  if (a == 0.0) return 1.0;
  return 1.0 + std::log(profile.epsilon) / std::log(a);
}

double surrogate_lipschitz(const SpectralProfile& profile) {
  profile.Validate();
  const double a = profile.alpha();
  const double la = std::log(a);
  return -(1.0 - profile.tau) * std::log(profile.epsilon) / (a * la * la);
}

TauEstimate estimate_tau(const SparseMatrix& a, std::span<const double> b,
                         double omega, double epsilon,
                         std::optional<double> beta, std::size_t max_power) {
  RequireOmega(omega);
  const std::size_t n = a.size();
  if (n > kTauMaxDimension) {
    throw ParameterError("estimate_tau is limited to n <= " +
                         std::to_string(kTauMaxDimension));
  }
  if (b.size() != n) throw StructuralError("target dimension mismatch");
  const double b_norm = norm2(b);
  if (b_norm == 0.0) throw ParameterError("estimate_tau needs a nonzero target");

  const Splitting s = split(a);
  const TriangularOperator w = TriangularOperator::Relaxed(s, omega, true);
  const TriangularOperator wt = TriangularOperator::Relaxed(s, omega, false);
  Vector tmp(n), tmp2(n);
  // C x = x - A W^{-1} x and C^T x = x - W^{-T} A x, in place.
  auto apply_c = [&](Vector& x) {
    triangular_solve(w, x, tmp);
    matvec(a, tmp, tmp2);
    for (std::size_t i = 0; i < n; ++i) x[i] -= tmp2[i];
  };
  auto apply_ct = [&](Vector& x) {
    matvec(a, x, tmp);
    triangular_solve(wt, tmp, tmp2);
    for (std::size_t i = 0; i < n; ++i) x[i] -= tmp2[i];
  };

  TauEstimate est;
  est.rho = young_rho(beta ? *beta : jacobi_spectral_radius(a), omega);

  Vector v(b.begin(), b.end());
  bool reached = false;
  for (std::size_t i = 0; i < max_power; ++i) {
    apply_c(v);
    if (norm2(v) < epsilon * b_norm) {
      est.k = i;
      reached = true;
      break;
    }
  }
  if (!reached) {
    throw NumericalError("C_omega^k b did not reach tolerance; omega = " +
                         std::to_string(omega) + " does not converge");
  }
  if (est.k == 0) return est;

  const std::size_t k = est.k;
  const PowerResult top = power_iteration(
      [&](std::span<const double> x, std::span<double> y) {
        Vector z(x.begin(), x.end());
        for (std::size_t j = 0; j < k; ++j) apply_c(z);
        for (std::size_t j = 0; j < k; ++j) apply_ct(z);
        std::copy(z.begin(), z.end(), y.begin());
      },
      n, 1e-8, kPowerIterationCap);
  const double norm_ck = std::sqrt(top.value);
  est.sigma = std::pow(norm_ck, 1.0 / static_cast<double>(k));
  est.tau = std::max(0.0, (est.sigma - est.rho) / (1.0 - est.rho));
  return est;
}

void CGProfile::Validate() const {
  constexpr double kSlack = 1e-9;
  if (!(mu >= 1.0 - kSlack)) throw ParameterError("mu must be >= 1");
  if (!(nu >= -0.25 - kSlack && nu <= kSlack)) {
    throw ParameterError("nu must lie in [-1/4, 0]");
  }
  if (!(kappa >= 1.0 - kSlack)) throw ParameterError("kappa must be >= 1");
  if (!(tau > 0.0 && tau <= 1.0)) throw ParameterError("tau must lie in (0, 1]");
}

CGProfile cg_profile(const SparseMatrix& a) {
  const std::size_t n = a.size();
  if (n > kDenseProfileMaxDimension) {
    throw ParameterError("cg_profile is limited to n <= " +
                         std::to_string(kDenseProfileMaxDimension));
  }
  const Splitting s = split(a);
  const Eigen::MatrixXd am = Dense(a);
  const Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(s.diag.data(), n);
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (const Triplet& t : s.strict_lower.triplets()) l(t.row, t.col) = t.value;

  CGProfile p;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(am,
                                                     Eigen::EigenvaluesOnly);
  p.kappa = eig.eigenvalues().maxCoeff() / eig.eigenvalues().minCoeff();

  // lambda_max(M A^{-1}) = largest eigenvalue of the pencil M x = lambda A x.
  const Eigen::MatrixXd dm = d.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> mu_solver(
      dm, am, Eigen::EigenvaluesOnly);
  p.mu = mu_solver.eigenvalues().maxCoeff();

  const Eigen::MatrixXd m =
      l * d.cwiseInverse().asDiagonal() * l.transpose() - 0.25 * dm;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> nu_solver(
      m, am, Eigen::EigenvaluesOnly);
  p.nu = nu_solver.eigenvalues().maxCoeff();
  p.tau = 1.0;
  return p;
}

double cg_bound(const CGProfile& profile, double omega, double epsilon) {
  profile.Validate();
  RequireOmega(omega);
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ParameterError("epsilon must lie in (0, 1)");
  }
  const double two_minus = 2.0 - omega;
  const double inner = 4.0 / two_minus + profile.mu * two_minus / omega +
                       4.0 * profile.nu * omega / two_minus;
  const double rate = 1.0 - 4.0 / (2.0 + std::sqrt(inner));
  if (!(rate > 0.0 && rate < 1.0)) {
    throw NumericalError("CG contraction rate outside (0, 1)");
  }
  const double ratio = std::sqrt(profile.kappa) / epsilon;
  const double numer = std::log(ratio + std::sqrt(ratio * ratio - 1.0));
  return 1.0 + profile.tau * numer / -std::log(rate);
}

double cg_optimal_omega(const CGProfile& profile) {
  profile.Validate();
  return 2.0 / (1.0 + std::sqrt((2.0 / profile.mu) * (1.0 + 2.0 * profile.nu)));
}

EnergyInputs energy_inputs(const SparseMatrix& a) {
  const Splitting s = split(a);
  EnergyInputs in;
  in.gamma = 1.0 - jacobi_spectral_radius(a, 1e-10, 100 * kPowerIterationCap);

  // rho(D^{-1} L D^{-1} L^T) = ||B||^2 with B = D^{-1/2} L D^{-1/2}.
  const std::size_t n = a.size();
  Vector inv_sqrt_d(n);
  for (std::size_t i = 0; i < n; ++i) inv_sqrt_d[i] = 1.0 / std::sqrt(s.diag[i]);
  const SparseMatrix& l = s.strict_lower;
  const PowerResult bbt = power_iteration(
      [&](std::span<const double> x, std::span<double> y) {
        // y = B B^T x
        Vector t(n, 0.0);
        const auto& off = l.row_offsets();
        const auto& cols = l.col_indices();
        const auto& vals = l.values();
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t k = off[i]; k < off[i + 1]; ++k) {
            t[cols[k]] += vals[k] * inv_sqrt_d[i] * inv_sqrt_d[cols[k]] * x[i];
          }
        }
        for (std::size_t i = 0; i < n; ++i) {
          double sum = 0.0;
          for (std::size_t k = off[i]; k < off[i + 1]; ++k) {
            sum += vals[k] * inv_sqrt_d[i] * inv_sqrt_d[cols[k]] * t[cols[k]];
          }
          y[i] = sum;
        }
      },
      n, 1e-10, 100 * kPowerIterationCap);
  in.rho_lower = bbt.value;
  in.kappa = largest_eigenvalue(a, 1e-10) / smallest_eigenvalue(a, 1e-10);
  return in;
}

double energy_norm_bound(const EnergyInputs& in, double omega) {
  RequireOmega(omega);
  const double q = (2.0 - omega) / omega;
  const double denom =
      0.25 * q * q + in.gamma / omega + in.rho_lower - 0.25;
  return 1.0 - q * in.gamma / denom;
}

std::optional<std::size_t> energy_cap(const EnergyInputs& in, double omega,
                                      double epsilon, ToleranceMode mode,
                                      double b_norm) {
  const double bound = energy_norm_bound(in, omega);
  if (!(bound < 1.0)) return std::nullopt;
  if (bound <= 0.0) return std::size_t{1};
  const double log_nu = 0.5 * std::log(bound);
  double k = 0.0;
  if (mode == ToleranceMode::kRelative) {
    k = 1.0 + std::log(epsilon / (2.0 * std::sqrt(in.kappa))) / log_nu;
  } else {
    if (!(b_norm > 0.0)) return std::size_t{1};
    k = 1.0 + std::log(epsilon / (2.0 * b_norm * std::sqrt(in.kappa))) /
                  (2.0 * log_nu);
  }
  return static_cast<std::size_t>(std::max(1.0, std::ceil(k)));
}

std::optional<std::size_t> energy_cap(const SparseMatrix& a, double omega,
                                      double epsilon, ToleranceMode mode,
                                      double b_norm) {
  return energy_cap(energy_inputs(a), omega, epsilon, mode, b_norm);
}

}  // namespace relax
