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

#ifndef RELAX_MATRIX_MARKET_H_
#define RELAX_MATRIX_MARKET_H_

#include <iosfwd>
#include <string>

#include "relax/sparse_matrix.h"

namespace relax {

// Matrix Market coordinate format, real field. Symmetric files store the
// lower triangle; general files are accepted when the entries are symmetric.
SparseMatrix read_matrix_market(std::istream& in);
SparseMatrix read_matrix_market(const std::string& path);

// Writes "%%MatrixMarket matrix coordinate real symmetric" with the lower
// triangle at 17 significant digits.
void write_matrix_market(std::ostream& out, const SparseMatrix& a);
void write_matrix_market(const std::string& path, const SparseMatrix& a);

}  // namespace relax

#endif  // RELAX_MATRIX_MARKET_H_
