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

#include "relax/policies.h"

#include <cmath>
#include <sstream>

#include "relax/error.h"
#include "relax/surrogates.h"

namespace relax {

FixedPolicy::FixedPolicy(double omega) : omega_(omega) {
  if (!(omega > 0.0 && omega < 2.0)) {
    throw ParameterError("fixed omega must lie in (0, 2)");
  }
}

std::string FixedPolicy::name() const {
  std::ostringstream out;
  out << "fixed(" << omega_ << ")";
  return out.str();
}

PolicyDecision FixedPolicy::select(double, Rng&) {
  PolicyDecision d;
  d.omega = omega_;
  return d;
}

InstanceOptimalOracle::InstanceOptimalOracle(const ShiftedEnsemble& ensemble)
    : ensemble_(&ensemble) {}

double InstanceOptimalOracle::omega(double c) const {
  const auto key = static_cast<std::int64_t>(std::llround(c * 1e6));
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  const double value = optimal_omega(
      jacobi_spectral_radius(ensemble_->at(static_cast<double>(key) * 1e-6)));
  std::lock_guard<std::mutex> lock(mutex_);
  memo_.emplace(key, value);
  return value;
}

InstanceOptimalPolicy::InstanceOptimalPolicy(
    std::shared_ptr<const InstanceOptimalOracle> oracle)
    : oracle_(std::move(oracle)) {}

PolicyDecision InstanceOptimalPolicy::select(double context, Rng&) {
  PolicyDecision d;
  d.omega = oracle_->omega(context);
  return d;
}

ApproxBetaBaseline::ApproxBetaBaseline(const ShiftedEnsemble& ensemble,
                                       std::size_t d_ctx,
                                       std::size_t power_iters) {
  if (d_ctx < 1 || power_iters < 1) {
    throw ParameterError("approx_beta needs d_ctx >= 1 and power_iters >= 1");
  }
  for (std::size_t j = 0; j < d_ctx; ++j) {
    const double c = ensemble.c_min() + ensemble.range() *
                                            (static_cast<double>(j) + 0.5) /
                                            static_cast<double>(d_ctx);
    const double beta =
        std::min(jacobi_spectral_radius_steps(ensemble.at(c), power_iters),
                 1.0 - 1e-12);
    offsets_.push_back(c);
    omegas_.push_back(optimal_omega(beta));
    matvecs_ += power_iters;
  }
}

double ApproxBetaBaseline::omega(double c) const {
  std::size_t best = 0;
  for (std::size_t j = 1; j < offsets_.size(); ++j) {
    if (std::abs(offsets_[j] - c) < std::abs(offsets_[best] - c)) best = j;
  }
  return omegas_[best];
}

PolicyDecision ApproxBetaBaseline::select(double context, Rng&) {
  PolicyDecision d;
  d.omega = omega(context);
  return d;
}

TsallisPolicy::TsallisPolicy(ActionGrid grid, double normalization,
                             StepMode mode, std::size_t horizon,
                             double eta_scale)
    : grid_(std::move(grid)),
      state_(grid_.size(), normalization, mode, horizon) {
  if (!(eta_scale >= 0.0)) throw ParameterError("eta_scale must be >= 0");
  state_.eta_scale = eta_scale;
}

PolicyDecision TsallisPolicy::select(double, Rng& rng) {
  return tsallis_select(state_, grid_, rng);
}

void TsallisPolicy::update(const PolicyDecision& decision, double,
                           std::size_t raw_cost) {
  tsallis_update(state_, decision.arm, raw_cost,
                 decision.probabilities.at(decision.arm));
}

ContextualPolicy::ContextualPolicy(ContextualTsallis tuner)
    : tuner_(std::move(tuner)) {}

PolicyDecision ContextualPolicy::select(double context, Rng& rng) {
  return tuner_.select(context, rng);
}

void ContextualPolicy::update(const PolicyDecision&, double,
                              std::size_t raw_cost) {
  tuner_.update(raw_cost);
}

ChebCBPolicy::ChebCBPolicy(ChebCB tuner) : tuner_(std::move(tuner)) {}

PolicyDecision ChebCBPolicy::select(double context, Rng& rng) {
  return tuner_.select(context, rng);
}

void ChebCBPolicy::update(const PolicyDecision&, double,
                          std::size_t raw_cost) {
  tuner_.update(raw_cost);
}

}  // namespace relax
