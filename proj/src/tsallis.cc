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

#include "relax/tsallis.h"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>

#include "relax/error.h"

namespace relax {

ActionGrid::ActionGrid(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ParameterError("action grid must be nonempty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0 && values_[i] < 2.0)) {
      throw ParameterError("grid values must lie in (0, 2)");
    }
    if (i > 0 && !(values_[i] > values_[i - 1])) {
      throw ParameterError("grid values must be strictly increasing");
    }
  }
}

ActionGrid make_grid(double omega_lo, double omega_max, std::size_t d,
                     bool centered) {
  if (!(omega_lo > 0.0 && omega_lo < omega_max && omega_max < 2.0)) {
    throw ParameterError("grid needs 0 < omega_lo < omega_max < 2");
  }
  if (d < 1) throw ParameterError("grid needs d >= 1");
  std::vector<double> g(d);
  const double width = omega_max - omega_lo;
  for (std::size_t i = 1; i <= d; ++i) {
    const double offset = centered ? static_cast<double>(i) - 0.5
                                   : static_cast<double>(i);
    g[i - 1] = omega_lo + width * offset / static_cast<double>(d);
  }
  return ActionGrid(std::move(g));
}

std::size_t regret_grid_size(std::size_t horizon, double alpha_max,
                              std::size_t max_d) {
  if (!(alpha_max > 0.0 && alpha_max < 1.0)) {
    throw ParameterError("alpha_max must lie in (0, 1)");
  }
  const double l = std::log(alpha_max);
  const double d = std::ceil(std::cbrt(0.5 * static_cast<double>(horizon) / (l * l)));
  return std::clamp<std::size_t>(static_cast<std::size_t>(d), 1, max_d);
}

double tsallis_regret_bound(double max_loss, std::size_t d,
                            std::size_t horizon) {
  return 2.0 * max_loss *
         std::sqrt(2.0 * static_cast<double>(d) * static_cast<double>(horizon));
}

std::size_t sample_index(std::span<const double> p, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) last_positive = i;
    acc += p[i];
    if (u < acc) return i;
  }
  return last_positive;
}

TsallisState::TsallisState(std::size_t d, double normalization_in,
                           StepMode mode, std::size_t horizon_in)
    : cum_cost(d, 0.0),
      normalization(normalization_in),
      step_mode(mode),
      horizon(horizon_in) {
  if (d < 1) throw ParameterError("Tsallis-INF needs at least one arm");
  if (!(normalization > 0.0)) throw ParameterError("normalization must be > 0");
  if (horizon < 1) throw ParameterError("horizon must be >= 1");
}

double TsallisState::step_size() const {
  if (step_mode == StepMode::kFixed) {
    return (eta_scale > 0.0 ? eta_scale : 1.0) /
           std::sqrt(static_cast<double>(horizon));
  }
  return (eta_scale > 0.0 ? eta_scale : 2.0) /
         std::sqrt(static_cast<double>(std::max<std::size_t>(round, 1)));
}

std::vector<double> tsallis_probabilities(std::span<const double> cum_cost,
                                          double eta, double normalization) {
  const std::size_t d = cum_cost.size();
  if (d == 0) throw ParameterError("empty cost vector");
  if (!(eta > 0.0) || !(normalization > 0.0)) {
    throw ParameterError("eta and normalization must be positive");
  }
  if (d == 1) return {1.0};
  const double k_min = *std::min_element(cum_cost.begin(), cum_cost.end());
  std::vector<double> k(d);
  for (std::size_t i = 0; i < d; ++i) k[i] = cum_cost[i] - k_min;

  // sum_i a^2 / (k_i - x)^2 = 1 is convex increasing in x < 0; Newton from
  // x = -a, where the sum is >= 1, descends monotonically to the root.
  const double a = 2.0 * normalization / eta;
  double x = -a;
  bool converged = false;
  for (std::size_t it = 0; it < kNewtonMaxIterations; ++it) {
    double f = -1.0, df = 0.0;
    for (double ki : k) {
      const double inv = a / (ki - x);
      f += inv * inv;
      df += 2.0 * inv * inv / (ki - x);
    }
    if (std::abs(f) <= 1e-14) {
      converged = true;
      break;
    }
    const double next = x - f / df;
    if (std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(x))) {
      x = next;
      converged = true;
      break;
    }
    x = next;
  }
  if (!converged) {
    throw NumericalError("Tsallis-INF Newton solve did not converge");
  }
  std::vector<double> p(d);
  double total = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double inv = a / (k[i] - x);
    p[i] = inv * inv;
    total += p[i];
  }
  for (double& v : p) v /= total;
  return p;
}

std::vector<double> tsallis_probabilities(const TsallisState& state) {
  return tsallis_probabilities(state.cum_cost, state.step_size(),
                               state.normalization);
}

void tsallis_update(TsallisState& state, std::size_t arm, std::size_t raw_cost,
                    double probability) {
  if (arm >= state.cum_cost.size()) throw ParameterError("arm out of range");
  if (!(probability > 0.0)) {
    throw ParameterError("sampling probability must be positive");
  }
  const double clipped = std::clamp(static_cast<double>(raw_cost), 1.0,
                                    state.normalization + 1.0);
  state.cum_cost[arm] += (clipped - 1.0) / probability;
}

void tsallis_update(TsallisState& state, std::size_t arm,
                    std::size_t raw_cost) {
  if (arm >= state.last_probabilities.size()) {
    throw ParameterError("no stored sampling probability for arm " +
                         std::to_string(arm));
  }
  tsallis_update(state, arm, raw_cost, state.last_probabilities[arm]);
}

PolicyDecision tsallis_select(TsallisState& state, const ActionGrid& grid,
                              Rng& rng) {
  if (grid.size() != state.cum_cost.size()) {
    throw ParameterError("grid and state sizes differ");
  }
  ++state.round;
  state.last_probabilities = tsallis_probabilities(state);
  PolicyDecision d;
  d.arm = sample_index(state.last_probabilities, rng);
  d.omega = grid[d.arm];
  d.probabilities = state.last_probabilities;
  return d;
}

ContextualTsallis::ContextualTsallis(ActionGrid grid, std::size_t bins,
                                     double c_min, double range,
                                     double normalization, double eta_scale)
    : grid_(std::move(grid)), c_min_(c_min), range_(range) {
  if (bins < 1) throw ParameterError("need at least one context bin");
  if (!(range > 0.0)) throw ParameterError("context range must be positive");
  if (!(eta_scale >= 0.0)) throw ParameterError("eta_scale must be >= 0");
  TsallisState proto(grid_.size(), normalization, StepMode::kAnytime, 1);
  proto.eta_scale = eta_scale;
  states_.assign(bins, proto);
}

double ContextualTsallis::bin_center(std::size_t j) const {
  return c_min_ + range_ / static_cast<double>(states_.size()) *
                      (static_cast<double>(j) + 0.5);
}

std::size_t ContextualTsallis::bin_of(double context) const {
  std::size_t best = 0;
  double best_dist = std::abs(bin_center(0) - context);
  for (std::size_t j = 1; j < states_.size(); ++j) {
    const double dist = std::abs(bin_center(j) - context);
    if (dist < best_dist) {
      best = j;
      best_dist = dist;
    }
  }
  return best;
}

PolicyDecision ContextualTsallis::select(double context, Rng& rng) {
  if (context < c_min_ || context > c_min_ + range_) {
    if (clamped_++ == 0) {
      std::clog << "warning: context " << context << " outside [" << c_min_
                << ", " << c_min_ + range_ << "]; clamping\n";
    }
    context = std::clamp(context, c_min_, c_min_ + range_);
  }
  pending_bin_ = bin_of(context);
  PolicyDecision d = tsallis_select(states_[pending_bin_], grid_, rng);
  pending_arm_ = d.arm;
  pending_ = true;
  return d;
}

void ContextualTsallis::update(std::size_t raw_cost) {
  if (!pending_) throw ParameterError("update without a pending selection");
  tsallis_update(states_[pending_bin_], pending_arm_, raw_cost);
  pending_ = false;
}

}  // namespace relax
