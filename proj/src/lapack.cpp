// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT

#include "carlab/lapack.hpp"

#include <algorithm>
#include <complex>
#include <stdexcept>

#include <lapacke.h>

namespace carlab::lapack {

namespace {
lapack_complex_double* lp(cplx* p) { return reinterpret_cast<lapack_complex_double*>(p); }
}  // namespace

SvdResult svd_econ(const Matrix& A) {
  const int m = A.rows(), n = A.cols(), k = std::min(m, n);
  Matrix work = A;  // zgesdd destroys its input
  SvdResult r;
  r.U = Matrix(m, k);
  r.s.resize(k);
  r.Vh = Matrix(k, n);
  int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', m, n, lp(work.data()), m, r.s.data(),
                            lp(r.U.data()), m, lp(r.Vh.data()), k);
  if (info != 0) throw std::runtime_error("zgesdd failed, info=" + std::to_string(info));
  return r;
}

EigResult hermitian_eig(const Matrix& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("hermitian_eig: matrix not square");
  const int n = A.rows();
  EigResult r;
  r.vectors = A;
  r.values.resize(n);
  int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, lp(r.vectors.data()), n, r.values.data());
  if (info != 0) throw std::runtime_error("zheevd failed, info=" + std::to_string(info));
  return r;
}

Matrix solve(const Matrix& A, const Matrix& B) {
  if (A.rows() != A.cols() || A.rows() != B.rows()) throw std::invalid_argument("solve: shape mismatch");
  const int n = A.rows(), nrhs = B.cols();
  Matrix lu = A, x = B;
  std::vector<lapack_int> ipiv(n);
  int info = LAPACKE_zgesv(LAPACK_COL_MAJOR, n, nrhs, lp(lu.data()), n, ipiv.data(), lp(x.data()), n);
  if (info != 0) throw std::runtime_error("zgesv failed, info=" + std::to_string(info));
  return x;
}

std::pair<std::vector<cplx>, double> lstsq(const Matrix& A, const std::vector<cplx>& b) {
  if (static_cast<int>(b.size()) != A.rows()) throw std::invalid_argument("lstsq: shape mismatch");
  const int m = A.rows(), n = A.cols();
  Matrix work = A;
  std::vector<cplx> rhs(std::max(m, n));
  std::copy(b.begin(), b.end(), rhs.begin());
  int info = LAPACKE_zgels(LAPACK_COL_MAJOR, 'N', m, n, 1, lp(work.data()), m, lp(rhs.data()),
                           std::max(m, n));
  if (info != 0) throw std::runtime_error("zgels failed, info=" + std::to_string(info));
  std::vector<cplx> x(rhs.begin(), rhs.begin() + n);
  // Residual computed explicitly (zgels' residual convention only covers m > n).
  std::vector<cplx> ax = A.apply(x);
  for (int i = 0; i < m; ++i) ax[i] -= b[i];
  return {std::move(x), vnorm(ax)};
}

Matrix nullspace(const Matrix& A, double rtol) {
  const int m = A.rows(), n = A.cols();
  // For wide matrices the economical Vh (min(m,n) rows) misses part of the
  // null space, so request the full n x n Vh there.
  Matrix work = A;
  const int k = std::min(m, n);
  std::vector<double> s(k);
  Matrix Vh;
  if (m >= n) {
    Matrix U(m, k);
    Vh = Matrix(k, n);
    int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', m, n, lp(work.data()), m, s.data(),
                              lp(U.data()), m, lp(Vh.data()), k);
    if (info != 0) throw std::runtime_error("zgesdd failed, info=" + std::to_string(info));
  } else {
    Matrix U(m, m);
    Vh = Matrix(n, n);
    int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'A', m, n, lp(work.data()), m, s.data(),
                              lp(U.data()), m, lp(Vh.data()), n);
    if (info != 0) throw std::runtime_error("zgesdd failed, info=" + std::to_string(info));
  }
  const double smax = s.empty() ? 0.0 : s[0];
  const double thresh = smax * rtol;
  int r = 0;
  while (r < k && s[r] > thresh) ++r;
  Matrix N(n, n - r);
  for (int j = r; j < n; ++j)
    for (int i = 0; i < n; ++i) N(i, j - r) = std::conj(Vh(j, i));
  return N;
}

Matrix column_space(const Matrix& A, double rtol) {
  SvdResult svd = svd_econ(A);
  const double smax = svd.s.empty() ? 0.0 : svd.s[0];
  const double thresh = smax * rtol;
  int r = 0;
  while (r < static_cast<int>(svd.s.size()) && svd.s[r] > thresh) ++r;
  Matrix Q(A.rows(), r);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < A.rows(); ++i) Q(i, j) = svd.U(i, j);
  return Q;
}

int rank(const Matrix& A, double rtol) {
  SvdResult svd = svd_econ(A);
  const double smax = svd.s.empty() ? 0.0 : svd.s[0];
  int r = 0;
  while (r < static_cast<int>(svd.s.size()) && svd.s[r] > smax * rtol) ++r;
  return r;
}

}  // namespace carlab::lapack
