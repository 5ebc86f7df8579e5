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

#include "relax/matrix_market.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "relax/error.h"

namespace relax {
namespace {

std::string Lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

SparseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw StructuralError("empty Matrix Market input");
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket" || Lower(object) != "matrix" ||
      Lower(format) != "coordinate") {
    throw StructuralError("expected a Matrix Market coordinate banner");
  }
  field = Lower(field);
  symmetry = Lower(symmetry);
  if (field != "real" && field != "integer" && field != "double") {
    throw StructuralError("unsupported Matrix Market field: " + field);
  }
  const bool symmetric_storage = symmetry == "symmetric";
  if (!symmetric_storage && symmetry != "general") {
    throw StructuralError("unsupported Matrix Market symmetry: " + symmetry);
  }
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::istringstream size_line(line);
  std::size_t rows = 0, cols = 0, nnz = 0;
  if (!(size_line >> rows >> cols >> nnz) || rows != cols) {
    throw StructuralError("Matrix Market size line must describe a square matrix");
  }
  std::vector<Triplet> entries;
  entries.reserve(symmetric_storage ? 2 * nnz : nnz);
  for (std::size_t k = 0; k < nnz; ++k) {
    std::size_t i = 0, j = 0;
    double v = 0.0;
    if (!(in >> i >> j >> v) || i == 0 || j == 0 || i > rows || j > cols) {
      throw StructuralError("malformed Matrix Market entry " +
                            std::to_string(k + 1));
    }
    entries.push_back({i - 1, j - 1, v});
    if (symmetric_storage && i != j) entries.push_back({j - 1, i - 1, v});
  }
  return SparseMatrix::FromTriplets(rows, std::move(entries), true);
}

SparseMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open " + path);
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const SparseMatrix& a) {
  std::vector<Triplet> lower;
  for (const Triplet& t : a.triplets()) {
    if (t.col <= t.row) lower.push_back(t);
  }
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << a.size() << ' ' << a.size() << ' ' << lower.size() << '\n';
  out << std::setprecision(17);
  for (const Triplet& t : lower) {
    out << t.row + 1 << ' ' << t.col + 1 << ' ' << t.value << '\n';
  }
}

void write_matrix_market(const std::string& path, const SparseMatrix& a) {
  std::ofstream out(path);
  if (!out) throw StructuralError("cannot write " + path);
  write_matrix_market(out, a);
}

}  // namespace relax
