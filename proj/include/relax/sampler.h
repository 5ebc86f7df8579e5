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

#ifndef RELAX_SAMPLER_H_
#define RELAX_SAMPLER_H_

#include <cstdint>
#include <random>

#include "relax/sparse_matrix.h"

namespace relax {

// All randomness in the library is drawn from std::mt19937_64. Independent
// substreams are seeded through SplitMix64 of (seed, stream, index), so
// trial k of an experiment never depends on how many trials ran before it.
using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t index);

// Radially truncated Gaussian targets b = m u: u uniform on the unit sphere
// (a normalised standard Gaussian), m^2 ~ chi^2_n resampled until m^2 <= n.
class TargetSampler {
 public:
  TargetSampler(std::size_t n, std::uint64_t seed);

  std::size_t size() const { return n_; }
  std::uint64_t seed() const { return seed_; }

  Vector sample();

 private:
  std::size_t n_;
  std::uint64_t seed_;
  Rng rng_;
  std::normal_distribution<double> normal_;
  std::chi_squared_distribution<double> chi2_;
};

inline Vector sample_target(TargetSampler& sampler) { return sampler.sample(); }

}  // namespace relax

#endif  // RELAX_SAMPLER_H_
