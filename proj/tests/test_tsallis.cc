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
#include <functional>
#include <limits>
#include <random>

#include "relax/error.h"
#include "relax/tsallis.h"

using namespace relax;

namespace {

double Objective(const std::vector<double>& k, const std::vector<double>& p,
                 double eta, double big_k) {
  double v = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    v += k[i] * p[i] - 4.0 * big_k / eta * std::sqrt(p[i]);
  }
  return v;
}

// Exhaustive search over the simplex on a lattice of spacing h (d = 3).
std::vector<double> GridArgmin3(const std::vector<double>& k, double eta,
                                double big_k, int steps) {
  const double h = 1.0 / steps;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> arg(3);
  const double c = 4.0 * big_k / eta;
  for (int i = 0; i <= steps; ++i) {
    const double p0 = i * h;
    const double s0 = k[0] * p0 - c * std::sqrt(p0);
    for (int j = 0; i + j <= steps; ++j) {
      const double p1 = j * h;
      const double p2 = std::max(0.0, 1.0 - p0 - p1);
      const double v = s0 + k[1] * p1 - c * std::sqrt(p1) + k[2] * p2 - c * std::sqrt(p2);
      if (v < best) {
        best = v;
        arg = {p0, p1, p2};
      }
    }
  }
  return arg;
}

}  // namespace

TEST_CASE("grid construction") {
  const ActionGrid g = make_grid(1.0, 1.8, 4);
  REQUIRE(g.size() == 4);
  const double expect[] = {1.2, 1.4, 1.6, 1.8};
  for (int i = 0; i < 4; ++i) CHECK(g[i] == doctest::Approx(expect[i]).epsilon(1e-15));
  const ActionGrid one = make_grid(1.0, 1.7, 1);
  CHECK(one.size() == 1);
  CHECK(one[0] == 1.7);
  const ActionGrid centered = make_grid(1.0, 1.8, 4, true);
  CHECK(centered[0] == doctest::Approx(1.1));
  CHECK(centered[3] == doctest::Approx(1.7));
  CHECK_THROWS_AS(make_grid(1.0, 2.0, 4), ParameterError);
  CHECK_THROWS_AS(make_grid(1.5, 1.2, 4), ParameterError);
  CHECK_THROWS_AS(make_grid(1.0, 1.5, 0), ParameterError);
  CHECK_THROWS_AS(ActionGrid({1.2, 1.2}), ParameterError);
  CHECK_THROWS_AS(ActionGrid({0.0, 1.2}), ParameterError);
}

TEST_CASE("regret grid size") {
  // cbrt(2500 / log^2 0.9) = 60.84
  const double l = std::log(0.9);
  CHECK(std::cbrt(2500.0 / (l * l)) == doctest::Approx(60.84).epsilon(1e-3));
  CHECK(regret_grid_size(5000, 0.9, 1000) == 61);
  CHECK(regret_grid_size(5000, 0.9) == 61);
  CHECK(regret_grid_size(100000, 0.9) == 64);
  CHECK(regret_grid_size(1, 0.1) == 1);
  CHECK_THROWS_AS(regret_grid_size(10, 1.0), ParameterError);
}

TEST_CASE("regret bound formula") {
  CHECK(tsallis_regret_bound(1.0, 8, 1000) == doctest::Approx(2.0 * std::sqrt(16000.0)));
}

TEST_CASE("uniform probabilities at zero cost") {
  for (std::size_t d : {1u, 2u, 5u, 64u}) {
    const auto p = tsallis_probabilities(std::vector<double>(d, 0.0), 0.3, 500.0);
    for (double v : p) CHECK(v == doctest::Approx(1.0 / d).epsilon(1e-12));
  }
}

TEST_CASE("probabilities are invariant to a constant shift") {
  const std::vector<double> k = {3.0, 1.0, 7.5, 2.0};
  const auto p = tsallis_probabilities(k, 0.4, 2.0);
  for (double c : {-100.0, 0.5, 1e4}) {
    std::vector<double> shifted = k;
    for (double& v : shifted) v += c;
    const auto q = tsallis_probabilities(shifted, 0.4, 2.0);
    for (std::size_t i = 0; i < k.size(); ++i) CHECK(q[i] == doctest::Approx(p[i]).epsilon(1e-10));
  }
}

TEST_CASE("Newton solution matches a simplex grid search") {
  const std::vector<double> k = {0.0, 5.0, 10.0};
  const auto p = tsallis_probabilities(k, 0.5, 1.0);
  const auto g = GridArgmin3(k, 0.5, 1.0, 10000);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(p[i] - g[i]) <= 1e-3);
}

TEST_CASE("probabilities form a strictly positive simplex element") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 10000; ++rep) {
    const std::size_t d = 1 + static_cast<std::size_t>(u(rng) * 40);
    std::vector<double> k(d);
    const double scale = std::pow(10.0, 6.0 * u(rng));
    for (double& v : k) v = scale * u(rng);
    const double eta = std::pow(10.0, -3.0 + 3.0 * u(rng));
    const double big_k = std::pow(10.0, 3.0 * u(rng));
    const auto p = tsallis_probabilities(k, eta, big_k);
    double sum = 0.0;
    for (double v : p) {
      CHECK(v > 0.0);
      sum += v;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-10);
  }
}

TEST_CASE("Newton objective is no worse than a grid search") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t d = 2 + rep % 3;
    std::vector<double> k(d);
    for (double& v : k) v = 20.0 * u(rng);
    const double eta = 0.2 + u(rng);
    const auto p = tsallis_probabilities(k, eta, 1.0);
    const double newton = Objective(k, p, eta, 1.0);
    double best = std::numeric_limits<double>::infinity();
    const int steps = d == 2 ? 100000 : (d == 3 ? 1000 : 100);
    std::vector<double> q(d);
    // enumerate the lattice recursively
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
      if (i + 1 == d) {
        q[i] = static_cast<double>(left) / steps;
        best = std::min(best, Objective(k, q, eta, 1.0));
        return;
      }
      for (int j = 0; j <= left; ++j) {
        q[i] = static_cast<double>(j) / steps;
        rec(i + 1, left - j);
      }
    };
    rec(0, steps);
    CHECK(newton <= best + 1e-6);
  }
}

TEST_CASE("corrupted state is reported") {
  CHECK_THROWS_AS(
      tsallis_probabilities(std::vector<double>{0.0, std::nan("")}, 0.5, 1.0),
      NumericalError);
  CHECK_THROWS_AS(tsallis_probabilities(std::vector<double>{0.0}, 0.0, 1.0),
                  ParameterError);
}

TEST_CASE("step sizes") {
  TsallisState fixed(4, 10.0, StepMode::kFixed, 400);
  CHECK(fixed.step_size() == doctest::Approx(0.05));
  TsallisState any(4, 10.0, StepMode::kAnytime, 1);
  any.round = 16;
  CHECK(any.step_size() == doctest::Approx(0.5));
  any.eta_scale = 8.0;
  CHECK(any.step_size() == doctest::Approx(2.0));
}

TEST_CASE("updates") {
  Rng rng(1);
  const ActionGrid grid = make_grid(1.0, 1.8, 4);
  TsallisState s(4, 100.0, StepMode::kAnytime, 1);
  const PolicyDecision d = tsallis_select(s, grid, rng);
  tsallis_update(s, d.arm, 1);
  for (double v : s.cum_cost) CHECK(v == 0.0);

  tsallis_update(s, d.arm, 21);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(s.cum_cost[i] == (i == d.arm ? 20.0 / d.probabilities[d.arm] : 0.0));
  }
  // losses are clipped at K + 1
  TsallisState c(4, 100.0, StepMode::kAnytime, 1);
  tsallis_update(c, 2, 100000, 0.5);
  CHECK(c.cum_cost[2] == 200.0);

  CHECK_THROWS_AS(tsallis_update(s, 7, 3, 0.5), ParameterError);
  CHECK_THROWS_AS(tsallis_update(s, 0, 3, 0.0), ParameterError);

  TsallisState one(1, 50.0, StepMode::kAnytime, 1);
  const ActionGrid g1 = make_grid(1.0, 1.5, 1);
  for (int t = 0; t < 5; ++t) {
    const PolicyDecision d1 = tsallis_select(one, g1, rng);
    CHECK(d1.arm == 0);
    CHECK(d1.probabilities[0] == 1.0);
    const double before = one.cum_cost[0];
    tsallis_update(one, 0, 7);
    CHECK(one.cum_cost[0] == before + 6.0);
  }
}

TEST_CASE("updates to different arms commute with frozen probabilities") {
  TsallisState a(3, 10.0, StepMode::kAnytime, 1), b = a;
  tsallis_update(a, 0, 5, 0.3);
  tsallis_update(a, 2, 8, 0.25);
  tsallis_update(b, 2, 8, 0.25);
  tsallis_update(b, 0, 5, 0.3);
  CHECK(a.cum_cost == b.cum_cost);
}

TEST_CASE("sampling frequencies at zero cost") {
  Rng rng(77);
  const ActionGrid grid = make_grid(1.0, 1.8, 4);
  TsallisState s(4, 10.0, StepMode::kAnytime, 1);
  std::vector<int> counts(4, 0);
  const int n = 100000;
  for (int t = 0; t < n; ++t) ++counts[tsallis_select(s, grid, rng).arm];
  const double sd = std::sqrt(n * 0.25 * 0.75);
  for (int c : counts) CHECK(std::abs(c - n / 4.0) <= 3.0 * sd);
}

TEST_CASE("heavy cost suppresses an arm") {
  const auto p = tsallis_probabilities(std::vector<double>{1e6, 0.0}, 0.5, 1.0);
  CHECK(p[0] < 1e-3);
}

TEST_CASE("contextual binning") {
  const ActionGrid grid = make_grid(1.0, 1.8, 4);
  ContextualTsallis ct(grid, 4, 0.0, 1.0, 10.0);
  CHECK(ct.bin_center(0) == doctest::Approx(0.125));
  CHECK(ct.bin_center(3) == doctest::Approx(0.875));
  CHECK(ct.bin_of(0.6) == 2);
  CHECK(ct.bin_of(0.25) == 0);  // equidistant from 0.125 and 0.375
  CHECK(ct.bin_of(0.5) == 1);
  CHECK(ct.bin_of(1.0) == 3);

  Rng rng(3);
  ct.select(1.7, rng);
  CHECK(ct.clamped_contexts() == 1);
  ct.update(5);
  CHECK(ct.states()[3].round == 1);
  CHECK_THROWS_AS(ct.update(5), ParameterError);
}

TEST_CASE("one bin reduces to plain anytime Tsallis-INF") {
  const ActionGrid grid = make_grid(1.0, 1.8, 5);
  ContextualTsallis ct(grid, 1, -0.2, 0.6, 50.0);
  TsallisState plain(5, 50.0, StepMode::kAnytime, 1);
  Rng r1(11), r2(11);
  std::mt19937_64 costs(4);
  std::uniform_int_distribution<int> cost(1, 80);
  std::uniform_real_distribution<double> ctx(-0.2, 0.4);
  for (int t = 0; t < 300; ++t) {
    const PolicyDecision a = ct.select(ctx(costs), r1);
    const PolicyDecision b = tsallis_select(plain, grid, r2);
    REQUIRE(a.arm == b.arm);
    CHECK(a.probabilities == b.probabilities);
    const int k = cost(costs);
    ct.update(k);
    tsallis_update(plain, b.arm, k);
  }
  CHECK(ct.states()[0].cum_cost == plain.cum_cost);
}
