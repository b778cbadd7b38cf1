// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT

#include "carlab/dense.hpp"

#include <cmath>

namespace carlab {

Matrix Matrix::adjoint() const {
  Matrix r(cols_, rows_);
  for (int j = 0; j < cols_; ++j)
    for (int i = 0; i < rows_; ++i) r(j, i) = std::conj((*this)(i, j));
  return r;
}

Matrix Matrix::transpose() const {
  Matrix r(cols_, rows_);
  for (int j = 0; j < cols_; ++j)
    for (int i = 0; i < rows_; ++i) r(j, i) = (*this)(i, j);
  return r;
}

Matrix Matrix::conj() const {
  Matrix r = *this;
  kernels::conj_inplace(r.a_.size(), r.a_.data());
  return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
  Matrix r = *this;
  r += o;
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  Matrix r = *this;
  r -= o;
  return r;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  assert(rows_ == o.rows_ && cols_ == o.cols_);
  kernels::axpy(a_.size(), cplx{1.0, 0.0}, o.a_.data(), a_.data());
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  assert(rows_ == o.rows_ && cols_ == o.cols_);
  kernels::axpy(a_.size(), cplx{-1.0, 0.0}, o.a_.data(), a_.data());
  return *this;
}

Matrix Matrix::operator*(cplx s) const {
  Matrix r = *this;
  kernels::scal(r.a_.size(), s, r.a_.data());
  return r;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : a_) m = std::max(m, std::abs(z));
  return m;
}

Matrix Matrix::mul(const Matrix& other) const {
  assert(cols_ == other.rows_);
  Matrix c(rows_, other.cols_);
  // C[:, j] = sum_k B[k, j] * A[:, k]; columns are contiguous.
  for (int j = 0; j < other.cols_; ++j) {
    cplx* cj = c.col(j);
    for (int k = 0; k < cols_; ++k) {
      cplx b = other(k, j);
      if (b == cplx{0.0, 0.0}) continue;
      kernels::axpy(static_cast<std::size_t>(rows_), b, col(k), cj);
    }
  }
  return c;
}

std::vector<cplx> Matrix::apply(const std::vector<cplx>& v) const {
  assert(static_cast<int>(v.size()) == cols_);
  std::vector<cplx> r(rows_, cplx{0.0, 0.0});
  for (int k = 0; k < cols_; ++k) {
    if (v[k] == cplx{0.0, 0.0}) continue;
    kernels::axpy(static_cast<std::size_t>(rows_), v[k], col(k), r.data());
  }
  return r;
}

cplx vdot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  assert(a.size() == b.size());
  return kernels::dotc(a.size(), a.data(), b.data());
}

double vnorm(const std::vector<cplx>& v) { return std::sqrt(kernels::nrm2sq(v.size(), v.data())); }

std::vector<cplx> vconj(std::vector<cplx> v) {
  kernels::conj_inplace(v.size(), v.data());
  return v;
}

void vaxpy(cplx alpha, const std::vector<cplx>& x, std::vector<cplx>& y) {
  assert(x.size() == y.size());
  kernels::axpy(x.size(), alpha, x.data(), y.data());
}

}  // namespace carlab
