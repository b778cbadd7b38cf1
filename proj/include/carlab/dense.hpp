// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT
//
// Column-major dense complex matrices.  Column-major is deliberate: LAPACKE
// consumes the buffers zero-copy, and the gemm below streams contiguous
// columns through the dispatched axpy kernel.

#pragma once

#include <cassert>
#include <complex>
#include <stdexcept>
#include <vector>

#include "carlab/kernels.hpp"

namespace carlab {

using cplx = std::complex<double>;

class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  cplx& operator()(int i, int j) { return a_[static_cast<std::size_t>(j) * rows_ + i]; }
  const cplx& operator()(int i, int j) const { return a_[static_cast<std::size_t>(j) * rows_ + i]; }

  cplx* data() { return a_.data(); }
  const cplx* data() const { return a_.data(); }
  cplx* col(int j) { return a_.data() + static_cast<std::size_t>(j) * rows_; }
  const cplx* col(int j) const { return a_.data() + static_cast<std::size_t>(j) * rows_; }

  Matrix adjoint() const;
  Matrix transpose() const;
  Matrix conj() const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator*(cplx s) const;
  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);

  double frobenius_norm() const { return std::sqrt(kernels::nrm2sq(a_.size(), a_.data())); }
  double max_abs() const;

  // this * other, via the dispatched axpy kernel on contiguous columns.
  Matrix mul(const Matrix& other) const;
  std::vector<cplx> apply(const std::vector<cplx>& v) const;

 private:
  int rows_, cols_;
  std::vector<cplx> a_;
};

inline Matrix operator*(cplx s, const Matrix& m) { return m * s; }

// <a, b> = sum conj(a_i) b_i (physics convention for numerics; the math-order
// pairing used in quasi-free moments is built at the call sites).
cplx vdot(const std::vector<cplx>& a, const std::vector<cplx>& b);
double vnorm(const std::vector<cplx>& v);
std::vector<cplx> vconj(std::vector<cplx> v);
void vaxpy(cplx alpha, const std::vector<cplx>& x, std::vector<cplx>& y);

// An antilinear operator X: v |-> M * conj(v).
struct AntiLinearMap {
  Matrix M;

  std::vector<cplx> apply(const std::vector<cplx>& v) const {
    return M.apply(vconj(v));
  }
  // Composition (X1 ∘ X2)(v) = M1 conj(M2) v is linear.
  Matrix compose_linear(const AntiLinearMap& other) const { return M.mul(other.M.conj()); }
  // Antilinear adjoint: <X* u, v> = conj(<u, X v>)  =>  M* = M^T.
  AntiLinearMap adjoint() const { return {M.transpose()}; }
  // Conjugation X A X^{-1} of a linear operator A (for antiunitary X with
  // X^2 = 1): matrix M conj(A) conj(M).
  Matrix conjugate_op(const Matrix& A) const { return M.mul(A.conj()).mul(M.conj()); }
};

}  // namespace carlab
