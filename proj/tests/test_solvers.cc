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

#include "dense_oracle.h"
#include "relax/error.h"
#include "relax/sampler.h"
#include "relax/solvers.h"
#include "relax/spectral.h"
#include "relax/surrogates.h"

using namespace relax;
using oracle::Dense;
using oracle::ToEigen;

namespace {

SparseMatrix Identity(std::size_t n) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return SparseMatrix::FromTriplets(n, t, true);
}

SolverConfig Config(double omega, double tol, ToleranceMode mode,
                    std::size_t cap = 10000) {
  SolverConfig c;
  c.omega = omega;
  c.tolerance = tol;
  c.tolerance_mode = mode;
  c.cap = cap;
  return c;
}

constexpr auto kRel = ToleranceMode::kRelative;
constexpr auto kAbs = ToleranceMode::kAbsolute;

}  // namespace

TEST_CASE("config validation") {
  CHECK_THROWS_AS(Config(0.0, 1e-8, kRel).Validate(), ParameterError);
  CHECK_THROWS_AS(Config(2.0, 1e-8, kRel).Validate(), ParameterError);
  CHECK_THROWS_AS(Config(1.0, 0.0, kRel).Validate(), ParameterError);
  CHECK_THROWS_AS(Config(1.0, 1e-8, kRel, 0).Validate(), ParameterError);
  const Vector b(3, 1.0);
  CHECK_THROWS_AS(sor_solve(Identity(3), b, Config(1.0, 1e-8, kAbs)), ParameterError);
  CHECK_THROWS_AS(ssor_solve(Identity(3), b, Config(1.0, 1e-8, kRel)), ParameterError);
}

TEST_CASE("SOR trivial cases") {
  const SolveReport r = sor_solve(Identity(4), Vector{1, -2, 3, 0.5}, Config(1.0, 1e-8, kRel));
  CHECK(r.iterations == 1);
  CHECK(r.converged);
  CHECK(r.final_residual == 0.0);
  const SolveReport zero = sor_solve(laplacian_2d(3, 3), Vector(9, 0.0), Config(1.3, 1e-8, kRel));
  CHECK(zero.iterations == 0);
  CHECK(zero.converged);
}

TEST_CASE("SOR at omega* beats Gauss-Seidel and matches powering") {
  const SparseMatrix a = laplacian_2d(20, 20);
  TargetSampler s(a.size(), 5);
  const Vector b = s.sample();
  const double w = optimal_omega(jacobi_spectral_radius(a));
  const SolveReport fast = sor_solve(a, b, Config(w, 1e-8, kRel));
  const SolveReport gs = sor_solve(a, b, Config(1.0, 1e-8, kRel));
  CHECK(fast.converged);
  CHECK(fast.iterations < gs.iterations);
  const oracle::Mat d = Dense(a);
  const oracle::Vec bb = ToEigen(b);
  CHECK(fast.iterations ==
        oracle::PoweringCount(oracle::SorResidualMatrix(d, w), bb, 1e-8 * bb.norm(), 10000));
}

TEST_CASE("SSOR trivial and powering cases") {
  const SolveReport r = ssor_solve(Identity(3), Vector{1, 2, 3}, Config(1.0, 1e-8, kAbs));
  CHECK(r.iterations == 1);
  const SparseMatrix a = laplacian_2d(5, 5);
  const oracle::Mat d = Dense(a);
  TargetSampler s(a.size(), 17);
  const Vector b = s.sample();
  for (double w : {1.0, 1.3, 1.6}) {
    const SolveReport rep = ssor_solve(a, b, Config(w, 1e-8, kAbs));
    CHECK(rep.iterations ==
          oracle::PoweringCount(oracle::SsorResidualMatrix(d, w), ToEigen(b), 1e-8, 10000));
  }
  Vector z(b.size());
  CHECK_THROWS_AS(apply_ssor_inverse(split(a), 2.0, b, z), ParameterError);
}

TEST_CASE("SSOR at omega* is no slower than at 1.9") {
  const SparseMatrix a = laplacian_2d(20, 20);
  TargetSampler s(a.size(), 8);
  const Vector b = s.sample();
  const double w = optimal_omega(jacobi_spectral_radius(a));
  CHECK(ssor_solve(a, b, Config(w, 1e-8, kAbs)).iterations <=
        ssor_solve(a, b, Config(1.9, 1e-8, kAbs)).iterations);
}

TEST_CASE("PCG cases") {
  CHECK(pcg_ssor_solve(Identity(5), Vector(5, 2.0), Config(1.0, 1e-8, kRel)).iterations == 1);
  const SparseMatrix d2 = SparseMatrix::FromTriplets(2, {{0, 0, 1.0}, {1, 1, 2.0}}, true);
  const SolveReport cg = cg_solve(d2, Vector{1.0, 1.0}, Config(1.0, 1e-12, kRel));
  CHECK(cg.converged);
  CHECK(cg.iterations <= 2);

  const SparseMatrix a = laplacian_2d(20, 20);
  TargetSampler s(a.size(), 9);
  const Vector b = s.sample();
  const double lo = 2.0 * std::sqrt(2.0) - 2.0;
  for (int i = 0; i <= 20; ++i) {
    const double w = lo + (1.9 - lo) * i / 20.0;
    const auto pcg = pcg_ssor_solve(a, b, Config(w, 1e-8, kRel));
    const auto ssor = ssor_solve(a, b, Config(w, 1e-8, kAbs));
    CHECK(pcg.converged);
    CHECK(pcg.iterations <= ssor.iterations);
  }
}

TEST_CASE("PCG breakdown on an indefinite matrix") {
  const SparseMatrix a = SparseMatrix::FromTriplets(
      2, {{0, 0, 1.0}, {0, 1, 2.0}, {1, 0, 2.0}, {1, 1, 1.0}}, true);
  CHECK_THROWS_AS(cg_solve(a, Vector{1.0, -1.0}, Config(1.0, 1e-10, kRel)), NumericalError);
}

TEST_CASE("SOR residual recurrence") {
  for (auto [r, c] : {std::pair{5, 5}, {10, 10}, {4, 9}}) {
    const SparseMatrix a = shift(laplacian_2d(r, c), 0.05);
    const oracle::Mat d = Dense(a);
    TargetSampler s(a.size(), 21);
    const Vector b = s.sample();
    const oracle::Vec bb = ToEigen(b);
    for (double w : {0.7, 1.0, 1.5, 1.8}) {
      const oracle::Mat cm = oracle::SorResidualMatrix(d, w);
      SolverConfig cfg = Config(w, 1e-300, kRel, 1);
      cfg.record_history = true;
      for (std::size_t k = 1; k < 30; ++k) {
        cfg.cap = k;
        const SolveReport now = sor_solve(a, b, cfg);
        cfg.cap = k + 1;
        const SolveReport next = sor_solve(a, b, cfg);
        CHECK(now.residual_history.size() == k + 1);
        const oracle::Vec rk = bb - d * ToEigen(now.solution);
        const oracle::Vec rk1 = bb - d * ToEigen(next.solution);
        // Below this level the residual is dominated by rounding in b - A x.
        if (rk.norm() < 1e-6 * bb.norm()) break;
        CHECK((rk1 - cm * rk).norm() <= 1e-8 * rk.norm());
        CHECK(now.residual_history.back() == doctest::Approx(rk.norm()).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("halving the tolerance never lowers the count") {
  const SparseMatrix a = laplacian_2d(8, 8);
  TargetSampler s(a.size(), 4);
  const Vector b = s.sample();
  for (double w : {0.8, 1.2, 1.6, 1.9}) {
    std::size_t prev_sor = 0, prev_ssor = 0, prev_pcg = 0;
    for (double eps = 1e-2; eps > 1e-12; eps /= 2) {
      const auto sor = sor_solve(a, b, Config(w, eps, kRel)).iterations;
      const auto ssor = ssor_solve(a, b, Config(w, eps, kAbs)).iterations;
      const auto pcg = pcg_ssor_solve(a, b, Config(w, eps, kRel)).iterations;
      CHECK(sor >= prev_sor);
      CHECK(ssor >= prev_ssor);
      CHECK(pcg >= prev_pcg);
      prev_sor = sor;
      prev_ssor = ssor;
      prev_pcg = pcg;
    }
  }
}

TEST_CASE("cap semantics") {
  const SparseMatrix a = laplacian_2d(10, 10);
  TargetSampler s(a.size(), 1);
  const Vector b = s.sample();
  REQUIRE(sor_solve(a, b, Config(1.0, 1e-8, kRel)).iterations >= 10);
  for (auto kind : {SolverKind::kSor, SolverKind::kSsor, SolverKind::kPcg}) {
    const SolveReport r = solve(kind, a, b, Config(1.0, 1e-8, default_tolerance_mode(kind), 3));
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 3);
  }
}

TEST_CASE("converged implies the criterion holds") {
  const SparseMatrix a = laplacian_2d(6, 6);
  TargetSampler s(a.size(), 2);
  const Vector b = s.sample();
  const double bn = norm2(b);
  for (double w : {0.5, 1.0, 1.5, 1.95}) {
    const SolveReport sor = sor_solve(a, b, Config(w, 1e-9, kRel));
    CHECK(sor.converged);
    CHECK(sor.final_residual <= 1e-9 * bn);
    const SolveReport ssor = ssor_solve(a, b, Config(w, 1e-9, kAbs));
    CHECK(ssor.converged);
    CHECK(ssor.final_residual <= 1e-9);
  }
}

TEST_CASE("solver kind parsing") {
  CHECK(parse_solver_kind("sor") == SolverKind::kSor);
  CHECK(parse_solver_kind("ssor") == SolverKind::kSsor);
  CHECK(parse_solver_kind("pcg") == SolverKind::kPcg);
  CHECK(to_string(SolverKind::kPcg) == "pcg");
  CHECK_THROWS_AS(parse_solver_kind("gmres"), ParameterError);
  CHECK(default_tolerance_mode(SolverKind::kSsor) == kAbs);
}
