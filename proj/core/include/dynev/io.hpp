#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dynev/sparse.hpp"

namespace dynev {

// Matrix Market. The reader accepts coordinate real/integer/pattern with
// symmetric or general symmetry (general must be numerically symmetric), and
// array real general. Errors carry 1-based line numbers.
SparseSymMatrix read_matrix_market(std::istream& in);
SparseSymMatrix read_matrix_market(const std::string& path);
DenseMatrix read_matrix_market_dense(std::istream& in);
DenseMatrix read_matrix_market_dense(const std::string& path);

// Coordinate real symmetric, lower triangle, 17 significant digits.
void write_matrix_market(std::ostream& out, const SparseSymMatrix& a);
void write_matrix_market(const std::string& path, const SparseSymMatrix& a);
// Array real general, column-major.
void write_matrix_market_dense(std::ostream& out, const DenseMatrix& a);
void write_matrix_market_dense(const std::string& path, const DenseMatrix& a);

// JSONL update stream: {"t": int, "idx": [..], "val": [..]} per line,
// 0-based indices, t strictly increasing. Blank lines are skipped.
std::vector<SparseVector> read_update_stream(std::istream& in, Index dim);
std::vector<SparseVector> read_update_stream(const std::string& path, Index dim);
void write_update_stream(std::ostream& out, const std::vector<SparseVector>& updates);
void write_update_stream(const std::string& path, const std::vector<SparseVector>& updates);

}  // namespace dynev
