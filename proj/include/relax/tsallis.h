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

#ifndef RELAX_TSALLIS_H_
#define RELAX_TSALLIS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "relax/sampler.h"
#include "relax/sparse_matrix.h"

namespace relax {

// Strictly increasing relaxation parameters in (0, 2).
class ActionGrid {
 public:
  explicit ActionGrid(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

// g_i = lo + (omega_max - lo) i / d for i = 1..d, or offsets (i - 1/2) / d
// when `centered` is set.
ActionGrid make_grid(double omega_lo, double omega_max, std::size_t d,
                     bool centered = false);

// ceil(cbrt((T / 2) / log^2 alpha_max)), clipped to [1, max_d].
std::size_t regret_grid_size(std::size_t horizon, double alpha_max,
                              std::size_t max_d = 64);

// 2 K sqrt(2 d T): expected-regret bound of the fixed step size 1/sqrt(T).
double tsallis_regret_bound(double max_loss, std::size_t d,
                            std::size_t horizon);

struct PolicyDecision {
  std::size_t arm = 0;
  double omega = 1.0;
  // Sampling distribution the arm was drawn from; empty for deterministic
  // comparators.
  std::vector<double> probabilities;
};

// Draws an index from a probability vector by inversion.
std::size_t sample_index(std::span<const double> p, Rng& rng);

enum class StepMode { kFixed, kAnytime };

// Importance-weighted cumulative costs in iteration units, plus the
// probabilities of the most recent selection.
struct TsallisState {
  std::vector<double> cum_cost;
  double normalization = 500.0;  // K: losses are clipped to [0, K]
  StepMode step_mode = StepMode::kAnytime;
  std::size_t horizon = 1;       // T, used by the fixed step size
  std::size_t round = 0;         // selections made so far
  double eta_scale = 0.0;        // step-size numerator; 0 selects the default
  std::vector<double> last_probabilities;

  TsallisState() = default;
  TsallisState(std::size_t d, double normalization, StepMode mode,
               std::size_t horizon);

  // 1/sqrt(T) in fixed mode, 2/sqrt(t) for the upcoming round t in anytime
  // mode. A positive eta_scale replaces the numerator.
  double step_size() const;
};

inline constexpr std::size_t kNewtonMaxIterations = 200;

// argmin over the simplex of <k, p> - (4K/eta) sum sqrt(p_i), i.e.
// p_i = (2K/eta)^2 / (k_i - x)^2 for the unique x < min k with sum p = 1.
std::vector<double> tsallis_probabilities(std::span<const double> cum_cost,
                                          double eta, double normalization);
std::vector<double> tsallis_probabilities(const TsallisState& state);

// Adds (min(raw_cost, K + 1) - 1) / p_arm to the played arm, where p_arm is
// the probability stored by the last selection (or the one given).
void tsallis_update(TsallisState& state, std::size_t arm,
                    std::size_t raw_cost);
void tsallis_update(TsallisState& state, std::size_t arm, std::size_t raw_cost,
                    double probability);

// Advances the round counter, computes and stores the probabilities, and
// samples an arm.
PolicyDecision tsallis_select(TsallisState& state, const ActionGrid& grid,
                              Rng& rng);

// Bins [c_min, c_min + C] into m intervals with centres
// h_j = c_min + (C/m)(j - 1/2) and runs an anytime Tsallis-INF per bin.
class ContextualTsallis {
 public:
  ContextualTsallis(ActionGrid grid, std::size_t bins, double c_min,
                    double range, double normalization,
                    double eta_scale = 0.0);

  std::size_t bin_of(double context) const;
  double bin_center(std::size_t j) const;

  PolicyDecision select(double context, Rng& rng);
  void update(std::size_t raw_cost);

  const ActionGrid& grid() const { return grid_; }
  std::size_t bins() const { return states_.size(); }
  double c_min() const { return c_min_; }
  double range() const { return range_; }
  std::vector<TsallisState>& states() { return states_; }
  const std::vector<TsallisState>& states() const { return states_; }
  std::size_t clamped_contexts() const { return clamped_; }

 private:
  ActionGrid grid_;
  double c_min_;
  double range_;
  std::vector<TsallisState> states_;
  std::size_t pending_bin_ = 0;
  std::size_t pending_arm_ = 0;
  bool pending_ = false;
  std::size_t clamped_ = 0;

  friend struct TunerStateAccess;
};

}  // namespace relax

#endif  // RELAX_TSALLIS_H_
