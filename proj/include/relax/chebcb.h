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

#ifndef RELAX_CHEBCB_H_
#define RELAX_CHEBCB_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "relax/sampler.h"
#include "relax/sparse_matrix.h"
#include "relax/tsallis.h"

namespace relax {

// (P_0(s), ..., P_m(s)) with s = 2 (c - c_min) / C - 1.
Vector chebyshev_features(double c, std::size_t m, double c_min, double range);

// First-kind Chebyshev coefficients of f on [-1, 1] by Gauss-Chebyshev
// quadrature with `nodes` points.
Vector chebyshev_coefficients(const std::function<double(double)>& f,
                              std::size_t m, std::size_t nodes = 8192);

// Clips theta[0] to [-bound0, bound0] and theta[j] to [-slope / j, slope / j].
Vector clip_coefficients(std::span<const double> theta, double bound0,
                         double slope);

double chebyshev_eval(std::span<const double> theta, double s);

// Box |theta[0]| <= 1/N, |theta[j]| <= 2 C L / (K N j).
struct ChebBox {
  Vector lower;
  Vector upper;
};
ChebBox cheb_box(std::size_t m, double range, double lipschitz,
                 double normalization, double n_norm);

// Normal equations of one arm's least-squares problem.
struct ChebArm {
  Vector gram;  // (m+1) x (m+1), row-major
  Vector rhs;
  double target_sq = 0.0;
  std::size_t count = 0;
  Vector theta;
  std::vector<double> contexts;
  std::vector<double> targets;

  explicit ChebArm(std::size_t dim = 1);
  void add(std::span<const double> features, double target, double context);
};

inline constexpr double kFtlTolerance = 1e-8;
inline constexpr std::size_t kFtlMaxSweeps = 100000;

// min sum (<theta, f_s> - y_s)^2 over the box by projected coordinate
// descent, warm started from `start` (zero when empty).
Vector box_least_squares(std::span<const double> gram,
                         std::span<const double> rhs, const ChebBox& box,
                         std::span<const double> start = {},
                         double tolerance = kFtlTolerance);

// FTL fit from a list of (context, normalized cost) records.
Vector ftl_fit(std::span<const double> contexts, std::span<const double> targets,
               std::size_t m, double c_min, double range, double lipschitz,
               double normalization, double n_norm);

// p_i = 1 / (d + gamma (s_i - s*)) off the leader, remainder on the leader.
std::vector<double> squarecb_probabilities(std::span<const double> scores,
                                           double gamma);

struct ChebConfig {
  std::size_t degree = 8;       // m
  double c_min = 0.0;
  double range = 1.0;           // C
  double normalization = 500.0; // K
  double lipschitz = 10.0;      // L
  std::optional<double> n_norm; // N
  std::optional<double> gamma;  // SquareCB step size
  std::size_t horizon = 1;      // T, for the default gamma

  double resolved_n() const;
  double resolved_gamma() const;
  void Validate() const;
};

class ChebCB {
 public:
  ChebCB(ActionGrid grid, ChebConfig config);

  PolicyDecision select(double context, Rng& rng);
  void update(std::size_t raw_cost);

  Vector scores(double context) const;

  const ActionGrid& grid() const { return grid_; }
  const ChebConfig& config() const { return config_; }
  const ChebBox& box() const { return box_; }
  const std::vector<ChebArm>& arms() const { return arms_; }
  std::size_t clamped_contexts() const { return clamped_; }

  // Rebuilds one arm from stored records and refits it.
  void restore_arm(std::size_t arm, std::span<const double> contexts,
                   std::span<const double> targets);

 private:
  double Clamp(double context);

  ActionGrid grid_;
  ChebConfig config_;
  double n_norm_;
  double gamma_;
  ChebBox box_;
  std::vector<ChebArm> arms_;
  std::size_t pending_arm_ = 0;
  double pending_context_ = 0.0;
  bool pending_ = false;
  std::size_t clamped_ = 0;

  friend struct TunerStateAccess;
};

}  // namespace relax

#endif  // RELAX_CHEBCB_H_
