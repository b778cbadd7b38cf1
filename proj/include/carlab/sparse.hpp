// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT
//
// CSR sparse complex operators.  CAR generators on the doubled space touch at
// most a couple of basis vectors per column, so everything up to and including
// Sylvester constraint assembly stays sparse; only factorizations densify.

#pragma once

#include <complex>
#include <vector>

#include "carlab/dense.hpp"

namespace carlab {

struct Triplet {
  int r, c;
  cplx v;
};

class SparseOp {
 public:
  SparseOp() : rows_(0), cols_(0) {}
  SparseOp(int rows, int cols) : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

  static SparseOp from_triplets(int rows, int cols, std::vector<Triplet> ts, double drop_tol = 0.0);
  static SparseOp identity(int n);
  static SparseOp from_dense(const Matrix& m, double drop_tol = 0.0);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return vals_.size(); }

  std::vector<cplx> apply(const std::vector<cplx>& v) const;
  Matrix apply_dense(const Matrix& B) const;  // this * B

  SparseOp add(const SparseOp& o, cplx beta = cplx{1.0, 0.0}) const;  // this + beta * o
  SparseOp scale(cplx s) const;
  SparseOp mul(const SparseOp& o) const;
  SparseOp adjoint() const;
  SparseOp transpose_noconj() const;
  SparseOp conj() const;

  Matrix to_dense() const;
  double frobenius_norm() const;
  double max_abs() const;

  // Column-major vec of this operator as a dense vector (rows*cols entries).
  std::vector<cplx> vec() const;

  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }
  const std::vector<cplx>& vals() const { return vals_; }

 private:
  int rows_, cols_;
  std::vector<int> row_ptr_, col_idx_;
  std::vector<cplx> vals_;
};

// Tensor product with the left factor major: index (l, r) -> l * B.rows + r.
// The same layout serves column-major vec identities: vec(A X B) =
// kron(B^T, A) vec(X) with vec index (i, j) -> j * rows + i.
SparseOp kron(const SparseOp& A, const SparseOp& B);

// Sylvester constraint block for L T - T R = 0 acting on vec(T):
// kron(I, L) - kron(R^T, I).
SparseOp sylvester_block(const SparseOp& L, const SparseOp& R);

// Commutator and anticommutator.
SparseOp commutator(const SparseOp& a, const SparseOp& b);
SparseOp anticommutator(const SparseOp& a, const SparseOp& b);

}  // namespace carlab
