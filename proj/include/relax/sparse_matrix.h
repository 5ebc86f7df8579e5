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

#ifndef RELAX_SPARSE_MATRIX_H_
#define RELAX_SPARSE_MATRIX_H_

#include <cstddef>
#include <span>
#include <vector>

namespace relax {

using Vector = std::vector<double>;

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

// Square matrix in compressed sparse row form. Column indices are sorted
// within each row and every diagonal entry is stored explicitly and is
// strictly positive. Immutable after construction.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  // Validates the CSR arrays; throws StructuralError naming the offending row.
  SparseMatrix(std::size_t n, std::vector<std::size_t> row_offsets,
               std::vector<std::size_t> col_indices, Vector values,
               bool symmetric);

  // Duplicate coordinates are summed. When `symmetric` is set the entries are
  // taken as given (both triangles) and exact symmetry is verified.
  static SparseMatrix FromTriplets(std::size_t n, std::vector<Triplet> entries,
                                   bool symmetric);

  // Strictly lower triangular matrix: no diagonal, no symmetry.
  static SparseMatrix StrictLower(std::size_t n,
                                  std::vector<Triplet> entries);

  std::size_t size() const { return n_; }
  std::size_t nonzeros() const { return values_.size(); }
  bool symmetric() const { return symmetric_; }

  const std::vector<std::size_t>& row_offsets() const { return row_offsets_; }
  const std::vector<std::size_t>& col_indices() const { return col_indices_; }
  const Vector& values() const { return values_; }

  // Entry lookup by binary search; zero when not stored.
  double at(std::size_t row, std::size_t col) const;

  // Empty for strictly triangular matrices.
  Vector diagonal() const;

  std::vector<Triplet> triplets() const;

 private:
  void Validate(bool require_diagonal) const;

  std::size_t n_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<std::size_t> col_indices_;
  Vector values_;
  bool symmetric_ = false;
};

// A = D + L + L^T.
struct Splitting {
  Vector diag;
  SparseMatrix strict_lower;
};

Splitting split(const SparseMatrix& a);
SparseMatrix reassemble(const Splitting& s);

Vector matvec(const SparseMatrix& a, std::span<const double> x);
void matvec(const SparseMatrix& a, std::span<const double> x,
            std::span<double> y);

// Triangular operator diag + L (lower) or diag + L^T (upper), with L stored
// as a strictly lower triangular matrix. The SOR sweep matrix D/omega + L is
// Relaxed(splitting, omega, true). Holds a non-owning view of L, which must
// outlive the operator.
class TriangularOperator {
 public:
  TriangularOperator(Vector diag, const SparseMatrix& strict_lower,
                     bool lower);

  static TriangularOperator Relaxed(const Splitting& s, double omega,
                                    bool lower);

  bool lower() const { return lower_; }
  std::size_t size() const { return diag_.size(); }
  const Vector& diag() const { return diag_; }
  const SparseMatrix& strict_lower() const { return *strict_lower_; }

  Vector apply(std::span<const double> z) const;

 private:
  Vector diag_;
  const SparseMatrix* strict_lower_;
  bool lower_;
};

// Forward (lower) or backward (upper) substitution; T z = r.
Vector triangular_solve(const TriangularOperator& t, std::span<const double> r);
void triangular_solve(const TriangularOperator& t, std::span<const double> r,
                      std::span<double> z);

// 5-point stencil on a rows x cols interior grid with Dirichlet boundary,
// row-major node ordering: 4 on the diagonal, -1 for grid neighbours.
SparseMatrix laplacian_2d(std::size_t rows, std::size_t cols);

// tridiag(-1, 2, -1) of order n.
SparseMatrix laplacian_1d(std::size_t n);

SparseMatrix shift(const SparseMatrix& a, double c);

double norm2(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);

}  // namespace relax

#endif  // RELAX_SPARSE_MATRIX_H_
