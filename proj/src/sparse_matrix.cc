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

#include "relax/sparse_matrix.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "relax/error.h"

namespace relax {
namespace {

std::string RowMessage(const char* what, std::size_t row) {
  return std::string(what) + " at row " + std::to_string(row);
}

struct CsrArrays {
  std::vector<std::size_t> offsets;
  std::vector<std::size_t> cols;
  Vector values;
};

CsrArrays BuildCsr(std::size_t n, std::vector<Triplet> entries) {
  for (const Triplet& e : entries) {
    if (e.row >= n || e.col >= n) {
      throw StructuralError(RowMessage("coordinate out of range", e.row));
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Triplet& a, const Triplet& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
  CsrArrays csr;
  csr.offsets.assign(n + 1, 0);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (!csr.cols.empty() && k > 0 && entries[k].row == entries[k - 1].row &&
        entries[k].col == entries[k - 1].col) {
      csr.values.back() += entries[k].value;
      continue;
    }
    csr.cols.push_back(entries[k].col);
    csr.values.push_back(entries[k].value);
    ++csr.offsets[entries[k].row + 1];
  }
  for (std::size_t i = 0; i < n; ++i) csr.offsets[i + 1] += csr.offsets[i];
  return csr;
}

}  // namespace

SparseMatrix::SparseMatrix(std::size_t n, std::vector<std::size_t> row_offsets,
                           std::vector<std::size_t> col_indices, Vector values,
                           bool symmetric)
    : n_(n),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)),
      symmetric_(symmetric) {
  Validate(/*require_diagonal=*/true);
}

SparseMatrix SparseMatrix::FromTriplets(std::size_t n,
                                        std::vector<Triplet> entries,
                                        bool symmetric) {
  CsrArrays csr = BuildCsr(n, std::move(entries));
  return SparseMatrix(n, std::move(csr.offsets), std::move(csr.cols),
                      std::move(csr.values), symmetric);
}

SparseMatrix SparseMatrix::StrictLower(std::size_t n,
                                       std::vector<Triplet> entries) {
  for (const Triplet& e : entries) {
    if (e.col >= e.row) {
      throw StructuralError(
          RowMessage("entry on or above the diagonal in strict lower part",
                     e.row));
    }
  }
  CsrArrays csr = BuildCsr(n, std::move(entries));
  SparseMatrix m;
  m.n_ = n;
  m.row_offsets_ = std::move(csr.offsets);
  m.col_indices_ = std::move(csr.cols);
  m.values_ = std::move(csr.values);
  m.symmetric_ = false;
  m.Validate(/*require_diagonal=*/false);
  return m;
}

void SparseMatrix::Validate(bool require_diagonal) const {
  if (row_offsets_.size() != n_ + 1 || row_offsets_.front() != 0 ||
      row_offsets_.back() != col_indices_.size() ||
      col_indices_.size() != values_.size()) {
    throw StructuralError("inconsistent CSR array lengths");
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (row_offsets_[i + 1] < row_offsets_[i]) {
      throw StructuralError(RowMessage("row offsets decrease", i));
    }
    bool has_diag = false;
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      const std::size_t j = col_indices_[k];
      if (j >= n_) throw StructuralError(RowMessage("column out of range", i));
      if (k > row_offsets_[i] && col_indices_[k - 1] >= j) {
        throw StructuralError(RowMessage("unsorted or duplicate column", i));
      }
      if (j == i) {
        has_diag = true;
        if (require_diagonal && !(values_[k] > 0.0)) {
          throw StructuralError(RowMessage("nonpositive diagonal entry", i));
        }
      }
    }
    if (require_diagonal && !has_diag) {
      throw StructuralError(RowMessage("missing diagonal entry", i));
    }
  }
  if (symmetric_) {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
        if (at(col_indices_[k], i) != values_[k]) {
          throw StructuralError(RowMessage("asymmetric entry", i));
        }
      }
    }
  }
}

double SparseMatrix::at(std::size_t row, std::size_t col) const {
  const auto begin = col_indices_.begin() + row_offsets_[row];
  const auto end = col_indices_.begin() + row_offsets_[row + 1];
  const auto it = std::lower_bound(begin, end, col);
  if (it == end || *it != col) return 0.0;
  return values_[it - col_indices_.begin()];
}

Vector SparseMatrix::diagonal() const {
  Vector d(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) d[i] = at(i, i);
  return d;
}

std::vector<Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(values_.size());
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      out.push_back({i, col_indices_[k], values_[k]});
    }
  }
  return out;
}

Splitting split(const SparseMatrix& a) {
  if (!a.symmetric()) {
    throw StructuralError("splitting requires a symmetric matrix");
  }
  const std::size_t n = a.size();
  Splitting s;
  s.diag.assign(n, 0.0);
  std::vector<Triplet> lower;
  const auto& off = a.row_offsets();
  const auto& cols = a.col_indices();
  const auto& vals = a.values();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = off[i]; k < off[i + 1]; ++k) {
      if (cols[k] < i) {
        lower.push_back({i, cols[k], vals[k]});
      } else if (cols[k] == i) {
        s.diag[i] = vals[k];
      }
    }
    if (!(s.diag[i] > 0.0)) {
      throw StructuralError(RowMessage("missing or nonpositive diagonal", i));
    }
  }
  s.strict_lower = SparseMatrix::StrictLower(n, std::move(lower));
  return s;
}

SparseMatrix reassemble(const Splitting& s) {
  const std::size_t n = s.diag.size();
  std::vector<Triplet> entries;
  entries.reserve(n + 2 * s.strict_lower.nonzeros());
  for (std::size_t i = 0; i < n; ++i) entries.push_back({i, i, s.diag[i]});
  for (const Triplet& t : s.strict_lower.triplets()) {
    entries.push_back(t);
    entries.push_back({t.col, t.row, t.value});
  }
  return SparseMatrix::FromTriplets(n, std::move(entries), true);
}

void matvec(const SparseMatrix& a, std::span<const double> x,
            std::span<double> y) {
  const std::size_t n = a.size();
  if (x.size() != n || y.size() != n) {
    throw StructuralError("matvec dimension mismatch");
  }
  const auto& off = a.row_offsets();
  const auto& cols = a.col_indices();
  const auto& vals = a.values();
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t k = off[i]; k < off[i + 1]; ++k) {
      sum += vals[k] * x[cols[k]];
    }
    y[i] = sum;
  }
}

Vector matvec(const SparseMatrix& a, std::span<const double> x) {
  Vector y(a.size());
  matvec(a, x, y);
  return y;
}

TriangularOperator::TriangularOperator(Vector diag,
                                       const SparseMatrix& strict_lower,
                                       bool lower)
    : diag_(std::move(diag)), strict_lower_(&strict_lower), lower_(lower) {
  if (strict_lower.size() != diag_.size()) {
    throw StructuralError("triangular operator dimension mismatch");
  }
  for (std::size_t i = 0; i < diag_.size(); ++i) {
    if (diag_[i] == 0.0 || !std::isfinite(diag_[i])) {
      throw StructuralError(RowMessage("zero diagonal in triangular solve", i));
    }
  }
}

TriangularOperator TriangularOperator::Relaxed(const Splitting& s,
                                               double omega, bool lower) {
  Vector d(s.diag);
  for (double& v : d) v /= omega;
  return TriangularOperator(std::move(d), s.strict_lower, lower);
}

Vector TriangularOperator::apply(std::span<const double> z) const {
  const std::size_t n = diag_.size();
  if (z.size() != n) throw StructuralError("operator dimension mismatch");
  Vector out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = diag_[i] * z[i];
  const auto& off = strict_lower_->row_offsets();
  const auto& cols = strict_lower_->col_indices();
  const auto& vals = strict_lower_->values();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = off[i]; k < off[i + 1]; ++k) {
      if (lower_) {
        out[i] += vals[k] * z[cols[k]];
      } else {
        out[cols[k]] += vals[k] * z[i];
      }
    }
  }
  return out;
}

void triangular_solve(const TriangularOperator& t, std::span<const double> r,
                      std::span<double> z) {
  const std::size_t n = t.size();
  if (r.size() != n || z.size() != n) {
    throw StructuralError("triangular solve dimension mismatch");
  }
  const Vector& d = t.diag();
  const auto& off = t.strict_lower().row_offsets();
  const auto& cols = t.strict_lower().col_indices();
  const auto& vals = t.strict_lower().values();
  if (t.lower()) {
    for (std::size_t i = 0; i < n; ++i) {
      double sum = r[i];
      for (std::size_t k = off[i]; k < off[i + 1]; ++k) {
        sum -= vals[k] * z[cols[k]];
      }
      z[i] = sum / d[i];
    }
  } else {
    // Column sweep over L, i.e. row sweep over L^T from the bottom.
    std::copy(r.begin(), r.end(), z.begin());
    for (std::size_t i = n; i-- > 0;) {
      z[i] /= d[i];
      for (std::size_t k = off[i]; k < off[i + 1]; ++k) {
        z[cols[k]] -= vals[k] * z[i];
      }
    }
  }
}

Vector triangular_solve(const TriangularOperator& t,
                        std::span<const double> r) {
  Vector z(t.size());
  triangular_solve(t, r, z);
  return z;
}

SparseMatrix laplacian_2d(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    throw ParameterError("laplacian_2d needs positive grid dimensions");
  }
  const std::size_t n = rows * cols;
  std::vector<Triplet> entries;
  entries.reserve(5 * n);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t i = r * cols + c;
      entries.push_back({i, i, 4.0});
      if (c > 0) entries.push_back({i, i - 1, -1.0});
      if (c + 1 < cols) entries.push_back({i, i + 1, -1.0});
      if (r > 0) entries.push_back({i, i - cols, -1.0});
      if (r + 1 < rows) entries.push_back({i, i + cols, -1.0});
    }
  }
  return SparseMatrix::FromTriplets(n, std::move(entries), true);
}

SparseMatrix laplacian_1d(std::size_t n) {
  if (n == 0) throw ParameterError("laplacian_1d needs n >= 1");
  std::vector<Triplet> entries;
  for (std::size_t i = 0; i < n; ++i) {
    entries.push_back({i, i, 2.0});
    if (i > 0) entries.push_back({i, i - 1, -1.0});
    if (i + 1 < n) entries.push_back({i, i + 1, -1.0});
  }
  return SparseMatrix::FromTriplets(n, std::move(entries), true);
}

SparseMatrix shift(const SparseMatrix& a, double c) {
  Vector values = a.values();
  const auto& off = a.row_offsets();
  const auto& cols = a.col_indices();
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = off[i]; k < off[i + 1]; ++k) {
      if (cols[k] == i) values[k] += c;
    }
  }
  return SparseMatrix(a.size(), off, cols, std::move(values), a.symmetric());
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

}  // namespace relax
