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

#include "relax/sampler.h"

#include <cmath>

#include "relax/error.h"

namespace relax {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
}

TargetSampler::TargetSampler(std::size_t n, std::uint64_t seed)
    : n_(n),
      seed_(seed),
      rng_(seed),
      normal_(0.0, 1.0),
      chi2_(static_cast<double>(n == 0 ? 1 : n)) {
  if (n == 0) throw ParameterError("target dimension must be positive");
}

Vector TargetSampler::sample() {
  Vector u(n_);
  double norm = 0.0;
  while (norm == 0.0) {
    for (double& v : u) v = normal_(rng_);
    norm = norm2(u);
  }
  double m2 = chi2_(rng_);
  while (m2 > static_cast<double>(n_)) m2 = chi2_(rng_);
  const double scale = std::sqrt(m2) / norm;
  for (double& v : u) v *= scale;
  return u;
}

}  // namespace relax
