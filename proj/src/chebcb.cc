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

#include "relax/chebcb.h"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>

#include "relax/error.h"

namespace relax {

Vector chebyshev_features(double c, std::size_t m, double c_min,
                          double range) {
  if (!(range > 0.0)) throw ParameterError("context range must be positive");
  const double s = 2.0 * (c - c_min) / range - 1.0;
  Vector f(m + 1);
  f[0] = 1.0;
  if (m >= 1) f[1] = s;
  for (std::size_t j = 1; j < m; ++j) f[j + 1] = 2.0 * s * f[j] - f[j - 1];
  return f;
}

Vector chebyshev_coefficients(const std::function<double(double)>& f,
                              std::size_t m, std::size_t nodes) {
  if (nodes < m + 1) throw ParameterError("need at least m + 1 nodes");
  Vector theta(m + 1, 0.0);
  for (std::size_t k = 0; k < nodes; ++k) {
    const double phi = std::numbers::pi * (static_cast<double>(k) + 0.5) /
                       static_cast<double>(nodes);
    const double fx = f(std::cos(phi));
    for (std::size_t j = 0; j <= m; ++j) {
      theta[j] += fx * std::cos(static_cast<double>(j) * phi);
    }
  }
  for (std::size_t j = 0; j <= m; ++j) {
    theta[j] *= (j == 0 ? 1.0 : 2.0) / static_cast<double>(nodes);
  }
  return theta;
}

Vector clip_coefficients(std::span<const double> theta, double bound0,
                         double slope) {
  Vector out(theta.begin(), theta.end());
  if (out.empty()) return out;
  out[0] = std::clamp(out[0], -bound0, bound0);
  for (std::size_t j = 1; j < out.size(); ++j) {
    const double b = slope / static_cast<double>(j);
    out[j] = std::clamp(out[j], -b, b);
  }
  return out;
}

double chebyshev_eval(std::span<const double> theta, double s) {
  double prev = 1.0, cur = s, acc = 0.0;
  for (std::size_t j = 0; j < theta.size(); ++j) {
    if (j == 0) {
      acc += theta[0];
    } else if (j == 1) {
      acc += theta[1] * s;
    } else {
      const double next = 2.0 * s * cur - prev;
      prev = cur;
      cur = next;
      acc += theta[j] * cur;
    }
  }
  return acc;
}

ChebBox cheb_box(std::size_t m, double range, double lipschitz,
                 double normalization, double n_norm) {
  ChebBox box{Vector(m + 1), Vector(m + 1)};
  box.upper[0] = 1.0 / n_norm;
  for (std::size_t j = 1; j <= m; ++j) {
    box.upper[j] = 2.0 * range * lipschitz /
                   (normalization * n_norm * static_cast<double>(j));
  }
  for (std::size_t j = 0; j <= m; ++j) box.lower[j] = -box.upper[j];
  return box;
}

ChebArm::ChebArm(std::size_t dim)
    : gram(dim * dim, 0.0), rhs(dim, 0.0), theta(dim, 0.0) {}

void ChebArm::add(std::span<const double> features, double target,
                  double context) {
  const std::size_t dim = rhs.size();
  for (std::size_t i = 0; i < dim; ++i) {
    rhs[i] += features[i] * target;
    for (std::size_t j = 0; j < dim; ++j) {
      gram[i * dim + j] += features[i] * features[j];
    }
  }
  target_sq += target * target;
  ++count;
  contexts.push_back(context);
  targets.push_back(target);
}

Vector box_least_squares(std::span<const double> gram,
                         std::span<const double> rhs, const ChebBox& box,
                         std::span<const double> start, double tolerance) {
  const std::size_t dim = rhs.size();
  if (gram.size() != dim * dim || box.lower.size() != dim) {
    throw ParameterError("least-squares dimensions disagree");
  }
  Vector theta(dim, 0.0);
  if (!start.empty()) {
    for (std::size_t j = 0; j < dim; ++j) {
      theta[j] = std::clamp(start[j], box.lower[j], box.upper[j]);
    }
  }
  // Objective theta' G theta - 2 r' theta; each coordinate step lowers it by
  // G_jj delta^2.
  double scale = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    scale = std::max(scale, gram[j * dim + j] * box.upper[j] * box.upper[j]);
  }
  const double stop = tolerance * 1e-6 * std::max(scale, 1e-300);
  for (std::size_t sweep = 0; sweep < kFtlMaxSweeps; ++sweep) {
    double decrease = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double gjj = gram[j * dim + j];
      if (gjj <= 0.0) continue;
      double g = rhs[j];
      for (std::size_t k = 0; k < dim; ++k) {
        if (k != j) g -= gram[j * dim + k] * theta[k];
      }
      const double next = std::clamp(g / gjj, box.lower[j], box.upper[j]);
      const double delta = next - theta[j];
      decrease += gjj * delta * delta;
      theta[j] = next;
    }
    if (decrease <= stop) break;
  }
  return theta;
}

Vector ftl_fit(std::span<const double> contexts,
               std::span<const double> targets, std::size_t m, double c_min,
               double range, double lipschitz, double normalization,
               double n_norm) {
  if (contexts.size() != targets.size()) {
    throw ParameterError("contexts and targets differ in length");
  }
  ChebArm arm(m + 1);
  for (std::size_t s = 0; s < contexts.size(); ++s) {
    arm.add(chebyshev_features(contexts[s], m, c_min, range), targets[s],
            contexts[s]);
  }
  if (arm.count == 0) return Vector(m + 1, 0.0);
  return box_least_squares(arm.gram, arm.rhs,
                           cheb_box(m, range, lipschitz, normalization, n_norm));
}

std::vector<double> squarecb_probabilities(std::span<const double> scores,
                                           double gamma) {
  const std::size_t d = scores.size();
  if (d == 0) throw ParameterError("no scores");
  if (!(gamma > 0.0)) throw ParameterError("gamma must be positive");
  const std::size_t star = static_cast<std::size_t>(
      std::min_element(scores.begin(), scores.end()) - scores.begin());
  std::vector<double> p(d);
  double rest = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    if (i == star) continue;
    p[i] = 1.0 / (static_cast<double>(d) + gamma * (scores[i] - scores[star]));
    rest += p[i];
  }
  p[star] = std::max(0.0, 1.0 - rest);
  return p;
}

double ChebConfig::resolved_n() const {
  if (n_norm) return *n_norm;
  const double log_m = degree > 0 ? std::log(static_cast<double>(degree)) : 0.0;
  return 2.0 + 4.0 * range * lipschitz / normalization * (1.0 + log_m);
}

double ChebConfig::resolved_gamma() const {
  if (gamma) return *gamma;
  const double t = static_cast<double>(std::max<std::size_t>(horizon, 2));
  return 2.0 * std::sqrt(t / (static_cast<double>(degree + 1) * std::log(t)));
}

void ChebConfig::Validate() const {
  if (!(range > 0.0)) throw ParameterError("ChebCB context range must be > 0");
  if (!(normalization > 0.0)) throw ParameterError("ChebCB K must be > 0");
  if (!(lipschitz > 0.0)) throw ParameterError("ChebCB L must be > 0");
  if (n_norm && !(*n_norm > 0.0)) throw ParameterError("ChebCB N must be > 0");
  if (gamma && !(*gamma > 0.0)) throw ParameterError("ChebCB gamma must be > 0");
  if (horizon < 1) throw ParameterError("ChebCB horizon must be >= 1");
}

ChebCB::ChebCB(ActionGrid grid, ChebConfig config)
    : grid_(std::move(grid)), config_(config) {
  config_.Validate();
  n_norm_ = config_.resolved_n();
  gamma_ = config_.resolved_gamma();
  box_ = cheb_box(config_.degree, config_.range, config_.lipschitz,
                  config_.normalization, n_norm_);
  arms_.assign(grid_.size(), ChebArm(config_.degree + 1));
}

double ChebCB::Clamp(double context) {
  const double hi = config_.c_min + config_.range;
  if (context < config_.c_min || context > hi) {
    if (clamped_++ == 0) {
      std::clog << "warning: context " << context << " outside ["
                << config_.c_min << ", " << hi << "]; clamping\n";
    }
    return std::clamp(context, config_.c_min, hi);
  }
  return context;
}

Vector ChebCB::scores(double context) const {
  const Vector f = chebyshev_features(context, config_.degree, config_.c_min,
                                      config_.range);
  Vector s(arms_.size());
  for (std::size_t i = 0; i < arms_.size(); ++i) s[i] = dot(arms_[i].theta, f);
  return s;
}

PolicyDecision ChebCB::select(double context, Rng& rng) {
  context = Clamp(context);
  PolicyDecision d;
  d.probabilities = squarecb_probabilities(scores(context), gamma_);
  d.arm = sample_index(d.probabilities, rng);
  d.omega = grid_[d.arm];
  pending_arm_ = d.arm;
  pending_context_ = context;
  pending_ = true;
  return d;
}

void ChebCB::update(std::size_t raw_cost) {
  if (!pending_) throw ParameterError("update without a pending selection");
  const double k = config_.normalization;
  const double clipped = std::clamp(static_cast<double>(raw_cost), 1.0, k + 1.0);
  const double target = (clipped - 1.0) / (k * n_norm_);
  ChebArm& arm = arms_[pending_arm_];
  arm.add(chebyshev_features(pending_context_, config_.degree, config_.c_min,
                             config_.range),
          target, pending_context_);
  arm.theta = box_least_squares(arm.gram, arm.rhs, box_, arm.theta);
  pending_ = false;
}

void ChebCB::restore_arm(std::size_t arm, std::span<const double> contexts,
                         std::span<const double> targets) {
  if (arm >= arms_.size()) throw ParameterError("arm out of range");
  if (contexts.size() != targets.size()) {
    throw ParameterError("contexts and targets differ in length");
  }
  ChebArm fresh(config_.degree + 1);
  for (std::size_t s = 0; s < contexts.size(); ++s) {
    fresh.add(chebyshev_features(contexts[s], config_.degree, config_.c_min,
                                 config_.range),
              targets[s], contexts[s]);
  }
  if (fresh.count > 0) {
    fresh.theta = box_least_squares(fresh.gram, fresh.rhs, box_);
  }
  arms_[arm] = std::move(fresh);
}

}  // namespace relax
