// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT

#include "carlab/sparse.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace carlab {

SparseOp SparseOp::from_triplets(int rows, int cols, std::vector<Triplet> ts, double drop_tol) {
  std::sort(ts.begin(), ts.end(), [](const Triplet& a, const Triplet& b) {
    return a.r != b.r ? a.r < b.r : a.c < b.c;
  });
  SparseOp s(rows, cols);
  s.col_idx_.reserve(ts.size());
  s.vals_.reserve(ts.size());
  std::size_t i = 0;
  for (int r = 0; r < rows; ++r) {
    while (i < ts.size() && ts[i].r == r) {
      cplx v = ts[i].v;
      int c = ts[i].c;
      ++i;
      while (i < ts.size() && ts[i].r == r && ts[i].c == c) {
        v += ts[i].v;
        ++i;
      }
      if (std::abs(v) > drop_tol) {
        s.col_idx_.push_back(c);
        s.vals_.push_back(v);
      }
    }
    s.row_ptr_[r + 1] = static_cast<int>(s.col_idx_.size());
  }
  return s;
}

SparseOp SparseOp::identity(int n) {
  std::vector<Triplet> ts;
  ts.reserve(n);
  for (int i = 0; i < n; ++i) ts.push_back({i, i, cplx{1.0, 0.0}});
  return from_triplets(n, n, std::move(ts));
}

SparseOp SparseOp::from_dense(const Matrix& m, double drop_tol) {
  std::vector<Triplet> ts;
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i < m.rows(); ++i)
      if (std::abs(m(i, j)) > drop_tol) ts.push_back({i, j, m(i, j)});
  return from_triplets(m.rows(), m.cols(), std::move(ts));
}

std::vector<cplx> SparseOp::apply(const std::vector<cplx>& v) const {
  assert(static_cast<int>(v.size()) == cols_);
  std::vector<cplx> r(rows_, cplx{0.0, 0.0});
  for (int i = 0; i < rows_; ++i) {
    cplx s{0.0, 0.0};
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += vals_[k] * v[col_idx_[k]];
    r[i] = s;
  }
  return r;
}

Matrix SparseOp::apply_dense(const Matrix& B) const {
  assert(cols_ == B.rows());
  Matrix C(rows_, B.cols());
  for (int j = 0; j < B.cols(); ++j) {
    const cplx* bj = B.col(j);
    cplx* cj = C.col(j);
    for (int i = 0; i < rows_; ++i) {
      cplx s{0.0, 0.0};
      for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += vals_[k] * bj[col_idx_[k]];
      cj[i] = s;
    }
  }
  return C;
}

SparseOp SparseOp::add(const SparseOp& o, cplx beta) const {
  assert(rows_ == o.rows_ && cols_ == o.cols_);
  std::vector<Triplet> ts;
  ts.reserve(nnz() + o.nnz());
  for (int i = 0; i < rows_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) ts.push_back({i, col_idx_[k], vals_[k]});
  for (int i = 0; i < o.rows_; ++i)
    for (int k = o.row_ptr_[i]; k < o.row_ptr_[i + 1]; ++k)
      ts.push_back({i, o.col_idx_[k], beta * o.vals_[k]});
  return from_triplets(rows_, cols_, std::move(ts), 1e-300);
}

SparseOp SparseOp::scale(cplx s) const {
  SparseOp r = *this;
  for (auto& v : r.vals_) v *= s;
  return r;
}

SparseOp SparseOp::mul(const SparseOp& o) const {
  assert(cols_ == o.rows_);
  SparseOp r(rows_, o.cols_);
  std::vector<cplx> acc(o.cols_, cplx{0.0, 0.0});
  std::vector<int> touched;
  for (int i = 0; i < rows_; ++i) {
    touched.clear();
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const cplx a = vals_[k];
      const int mid = col_idx_[k];
      for (int k2 = o.row_ptr_[mid]; k2 < o.row_ptr_[mid + 1]; ++k2) {
        const int c = o.col_idx_[k2];
        if (acc[c] == cplx{0.0, 0.0}) touched.push_back(c);
        acc[c] += a * o.vals_[k2];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (int c : touched) {
      if (std::abs(acc[c]) > 1e-300) {
        r.col_idx_.push_back(c);
        r.vals_.push_back(acc[c]);
      }
      acc[c] = cplx{0.0, 0.0};
    }
    r.row_ptr_[i + 1] = static_cast<int>(r.col_idx_.size());
  }
  return r;
}

SparseOp SparseOp::adjoint() const {
  std::vector<Triplet> ts;
  ts.reserve(nnz());
  for (int i = 0; i < rows_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      ts.push_back({col_idx_[k], i, std::conj(vals_[k])});
  return from_triplets(cols_, rows_, std::move(ts));
}

SparseOp SparseOp::transpose_noconj() const {
  std::vector<Triplet> ts;
  ts.reserve(nnz());
  for (int i = 0; i < rows_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) ts.push_back({col_idx_[k], i, vals_[k]});
  return from_triplets(cols_, rows_, std::move(ts));
}

SparseOp SparseOp::conj() const {
  SparseOp r = *this;
  for (auto& v : r.vals_) v = std::conj(v);
  return r;
}

Matrix SparseOp::to_dense() const {
  Matrix m(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) m(i, col_idx_[k]) = vals_[k];
  return m;
}

double SparseOp::frobenius_norm() const {
  double s = 0.0;
  for (const auto& v : vals_) s += std::norm(v);
  return std::sqrt(s);
}

double SparseOp::max_abs() const {
  double m = 0.0;
  for (const auto& v : vals_) m = std::max(m, std::abs(v));
  return m;
}

std::vector<cplx> SparseOp::vec() const {
  std::vector<cplx> v(static_cast<std::size_t>(rows_) * cols_, cplx{0.0, 0.0});
  for (int i = 0; i < rows_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      v[static_cast<std::size_t>(col_idx_[k]) * rows_ + i] = vals_[k];
  return v;
}

SparseOp kron(const SparseOp& A, const SparseOp& B) {
  std::vector<Triplet> ts;
  ts.reserve(A.nnz() * B.nnz());
  const auto& arp = A.row_ptr();
  const auto& brp = B.row_ptr();
  for (int ia = 0; ia < A.rows(); ++ia)
    for (int ka = arp[ia]; ka < arp[ia + 1]; ++ka) {
      const int ja = A.col_idx()[ka];
      const cplx va = A.vals()[ka];
      for (int ib = 0; ib < B.rows(); ++ib)
        for (int kb = brp[ib]; kb < brp[ib + 1]; ++kb)
          ts.push_back({ia * B.rows() + ib, ja * B.cols() + B.col_idx()[kb], va * B.vals()[kb]});
    }
  return SparseOp::from_triplets(A.rows() * B.rows(), A.cols() * B.cols(), std::move(ts));
}

SparseOp sylvester_block(const SparseOp& L, const SparseOp& R) {
  assert(L.rows() == L.cols() && R.rows() == R.cols());
  SparseOp i_left = SparseOp::identity(R.rows());
  SparseOp i_right = SparseOp::identity(L.rows());
  return kron(i_left, L).add(kron(R.transpose_noconj(), i_right), cplx{-1.0, 0.0});
}

SparseOp commutator(const SparseOp& a, const SparseOp& b) {
  return a.mul(b).add(b.mul(a), cplx{-1.0, 0.0});
}

SparseOp anticommutator(const SparseOp& a, const SparseOp& b) {
  return a.mul(b).add(b.mul(a));
}

}  // namespace carlab
