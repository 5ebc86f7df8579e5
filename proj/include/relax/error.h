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

#ifndef RELAX_ERROR_H_
#define RELAX_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace relax {

// Malformed input data: bad sparsity structure, missing diagonal, dimension
// mismatch, unreadable files. The CLI exits nonzero only on these.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A scalar parameter outside its admissible range.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Residual blew up (NaN, inf, or beyond the divergence threshold).
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, std::size_t iterations)
      : std::runtime_error(what), iterations_(iterations) {}
  std::size_t iterations() const { return iterations_; }

 private:
  std::size_t iterations_;
};

// Loss of positive definiteness or other numerical breakdown.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative estimator hit its iteration cap. Carries the last estimate.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_estimate)
      : std::runtime_error(what), best_estimate_(best_estimate) {}
  double best_estimate() const { return best_estimate_; }

 private:
  double best_estimate_;
};

}  // namespace relax

#endif  // RELAX_ERROR_H_
