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

#ifndef RELAX_TESTS_DENSE_ORACLE_H_
#define RELAX_TESTS_DENSE_ORACLE_H_

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>

#include "relax/sparse_matrix.h"

namespace relax::oracle {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline Mat Dense(const SparseMatrix& a) {
  Mat m = Mat::Zero(a.size(), a.size());
  for (const Triplet& t : a.triplets()) m(t.row, t.col) = t.value;
  return m;
}

inline Vec ToEigen(const Vector& v) {
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline Mat DiagPart(const Mat& a) { return Mat(a.diagonal().asDiagonal()); }
inline Mat LowerPart(const Mat& a) {
  return Mat(a.triangularView<Eigen::StrictlyLower>());
}

// I - A (D/w + L)^{-1}
inline Mat SorResidualMatrix(const Mat& a, double w) {
  const Mat wm = DiagPart(a) / w + LowerPart(a);
  return Mat::Identity(a.rows(), a.cols()) - a * wm.inverse();
}

// I - A W^{-1}, W = (w/(2-w)) (D/w + L) D^{-1} (D/w + L^T)
inline Mat SsorResidualMatrix(const Mat& a, double w) {
  const Mat d = DiagPart(a);
  const Mat lo = d / w + LowerPart(a);
  const Mat wm = (w / (2.0 - w)) * lo * d.inverse() * lo.transpose();
  return Mat::Identity(a.rows(), a.cols()) - a * wm.inverse();
}

inline double SpectralRadius(const Mat& m) {
  Eigen::EigenSolver<Mat> es(m, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

inline double SymmetricMinEig(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline double SymmetricMaxAbsEig(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// beta = rho(I - D^{-1/2} A D^{-1/2})
inline double JacobiRadius(const Mat& a) {
  const Vec s = a.diagonal().cwiseSqrt().cwiseInverse();
  const Mat j = Mat::Identity(a.rows(), a.cols()) - s.asDiagonal() * a * s.asDiagonal();
  return SymmetricMaxAbsEig(j);
}

// min{k : ||C^k b|| <= threshold}, or cap + 1 when never reached.
inline std::size_t PoweringCount(const Mat& c, const Vec& b, double threshold,
                                 std::size_t cap) {
  Vec r = b;
  for (std::size_t k = 0; k <= cap; ++k) {
    if (r.norm() <= threshold) return k;
    r = c * r;
  }
  return cap + 1;
}

}  // namespace relax::oracle

#endif  // RELAX_TESTS_DENSE_ORACLE_H_
