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

#ifndef RELAX_POLICIES_H_
#define RELAX_POLICIES_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "relax/chebcb.h"
#include "relax/sampler.h"
#include "relax/spectral.h"
#include "relax/tsallis.h"

namespace relax {

// select() must precede the matching update(); one owner per instance.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::string name() const = 0;
  virtual PolicyDecision select(double context, Rng& rng) = 0;
  virtual void update(const PolicyDecision& decision, double context,
                      std::size_t raw_cost) = 0;
};

class FixedPolicy : public Policy {
 public:
  explicit FixedPolicy(double omega);

  std::string name() const override;
  PolicyDecision select(double context, Rng& rng) override;
  void update(const PolicyDecision&, double, std::size_t) override {}

  double omega() const { return omega_; }

 private:
  double omega_;
};

// c -> optimal_omega(beta(A + cI)), memoized on a 1e-6 lattice in c.
// Thread-safe; may be shared across trials.
class InstanceOptimalOracle {
 public:
  explicit InstanceOptimalOracle(const ShiftedEnsemble& ensemble);

  double omega(double c) const;

 private:
  const ShiftedEnsemble* ensemble_;
  mutable std::mutex mutex_;
  mutable std::map<std::int64_t, double> memo_;
};

class InstanceOptimalPolicy : public Policy {
 public:
  explicit InstanceOptimalPolicy(std::shared_ptr<const InstanceOptimalOracle> oracle);

  std::string name() const override { return "instance_optimal"; }
  PolicyDecision select(double context, Rng& rng) override;
  void update(const PolicyDecision&, double, std::size_t) override {}

 private:
  std::shared_ptr<const InstanceOptimalOracle> oracle_;
};

// Estimates beta with a fixed number of power-iteration steps at d_ctx
// offsets c_min + C (j - 1/2) / d_ctx and plays the stored omega* of the
// nearest offset.
class ApproxBetaBaseline : public Policy {
 public:
  ApproxBetaBaseline(const ShiftedEnsemble& ensemble, std::size_t d_ctx,
                     std::size_t power_iters);

  std::string name() const override { return "approx_beta"; }
  PolicyDecision select(double context, Rng& rng) override;
  void update(const PolicyDecision&, double, std::size_t) override {}

  double omega(double c) const;
  const std::vector<double>& offsets() const { return offsets_; }
  const std::vector<double>& omegas() const { return omegas_; }
  std::size_t matvec_count() const { return matvecs_; }

 private:
  std::vector<double> offsets_;
  std::vector<double> omegas_;
  std::size_t matvecs_ = 0;
};

class TsallisPolicy : public Policy {
 public:
  TsallisPolicy(ActionGrid grid, double normalization, StepMode mode,
                std::size_t horizon, double eta_scale = 0.0);

  std::string name() const override { return "tsallis"; }
  PolicyDecision select(double context, Rng& rng) override;
  void update(const PolicyDecision& decision, double context,
              std::size_t raw_cost) override;

  const ActionGrid& grid() const { return grid_; }
  TsallisState& state() { return state_; }
  const TsallisState& state() const { return state_; }

 private:
  ActionGrid grid_;
  TsallisState state_;
};

class ContextualPolicy : public Policy {
 public:
  explicit ContextualPolicy(ContextualTsallis tuner);

  std::string name() const override { return "contextual"; }
  PolicyDecision select(double context, Rng& rng) override;
  void update(const PolicyDecision& decision, double context,
              std::size_t raw_cost) override;

  ContextualTsallis& tuner() { return tuner_; }
  const ContextualTsallis& tuner() const { return tuner_; }

 private:
  ContextualTsallis tuner_;
};

class ChebCBPolicy : public Policy {
 public:
  explicit ChebCBPolicy(ChebCB tuner);

  std::string name() const override { return "chebcb"; }
  PolicyDecision select(double context, Rng& rng) override;
  void update(const PolicyDecision& decision, double context,
              std::size_t raw_cost) override;

  ChebCB& tuner() { return tuner_; }
  const ChebCB& tuner() const { return tuner_; }

 private:
  ChebCB tuner_;
};

}  // namespace relax

#endif  // RELAX_POLICIES_H_
