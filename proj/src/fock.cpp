// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT

#include "carlab/fock.hpp"

#include <cmath>

namespace carlab {

std::vector<int> mask_modes(FockIndex mask) {
  std::vector<int> modes;
  for (int i = 0; mask >> i; ++i)
    if ((mask >> i) & 1u) modes.push_back(i + 1);
  return modes;
}

FockIndex modes_mask(const std::vector<int>& modes) {
  FockIndex m = 0;
  for (int mode : modes) m |= FockIndex{1} << (mode - 1);
  return m;
}

SparseOp create_mode(const ModeSpace& ms, int mode) {
  const int bit = mode - 1;
  const FockIndex b = FockIndex{1} << bit;
  std::vector<Triplet> ts;
  for (FockIndex mask = 0; mask < static_cast<FockIndex>(ms.dim()); ++mask) {
    if (mask & b) continue;
    ts.push_back({static_cast<int>(mask | b), static_cast<int>(mask),
                  cplx{static_cast<double>(jw_sign(mask, bit)), 0.0}});
  }
  return SparseOp::from_triplets(ms.dim(), ms.dim(), std::move(ts));
}

SparseOp annihilate_mode(const ModeSpace& ms, int mode) {
  const int bit = mode - 1;
  const FockIndex b = FockIndex{1} << bit;
  std::vector<Triplet> ts;
  for (FockIndex mask = 0; mask < static_cast<FockIndex>(ms.dim()); ++mask) {
    if (!(mask & b)) continue;
    ts.push_back({static_cast<int>(mask ^ b), static_cast<int>(mask),
                  cplx{static_cast<double>(jw_sign(mask ^ b, bit)), 0.0}});
  }
  return SparseOp::from_triplets(ms.dim(), ms.dim(), std::move(ts));
}

SparseOp create_op(const ModeSpace& ms, const std::vector<cplx>& f) {
  std::vector<Triplet> ts;
  for (int i = 0; i < ms.n; ++i) {
    if (f[i] == cplx{0.0, 0.0}) continue;
    const FockIndex b = FockIndex{1} << i;
    for (FockIndex mask = 0; mask < static_cast<FockIndex>(ms.dim()); ++mask) {
      if (mask & b) continue;
      ts.push_back({static_cast<int>(mask | b), static_cast<int>(mask),
                    f[i] * static_cast<double>(jw_sign(mask, i))});
    }
  }
  return SparseOp::from_triplets(ms.dim(), ms.dim(), std::move(ts), 1e-300);
}

SparseOp annihilate_op(const ModeSpace& ms, const std::vector<cplx>& f) {
  return create_op(ms, vconj(f)).adjoint();
}

SparseOp parity_op(const ModeSpace& ms) {
  std::vector<Triplet> ts;
  for (FockIndex mask = 0; mask < static_cast<FockIndex>(ms.dim()); ++mask)
    ts.push_back({static_cast<int>(mask), static_cast<int>(mask),
                  cplx{(popcount(mask) & 1) ? -1.0 : 1.0, 0.0}});
  return SparseOp::from_triplets(ms.dim(), ms.dim(), std::move(ts));
}

cplx det(Matrix m) {
  const int n = m.rows();
  if (n == 0) return cplx{1.0, 0.0};
  cplx d{1.0, 0.0};
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(m(i, k)) > std::abs(m(piv, k))) piv = i;
    if (m(piv, k) == cplx{0.0, 0.0}) return cplx{0.0, 0.0};
    if (piv != k) {
      for (int j = k; j < n; ++j) std::swap(m(piv, j), m(k, j));
      d = -d;
    }
    d *= m(k, k);
    for (int i = k + 1; i < n; ++i) {
      const cplx factor = m(i, k) / m(k, k);
      for (int j = k; j < n; ++j) m(i, j) -= factor * m(k, j);
    }
  }
  return d;
}

SparseOp second_quantize(const ModeSpace& ms, const Matrix& c) {
  std::vector<Triplet> ts;
  const int dim = ms.dim();
  for (FockIndex in = 0; in < static_cast<FockIndex>(dim); ++in) {
    const auto cols = mask_modes(in);
    for (FockIndex out = 0; out < static_cast<FockIndex>(dim); ++out) {
      if (popcount(out) != popcount(in)) continue;
      const auto rows = mask_modes(out);
      Matrix sub(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) sub(static_cast<int>(i), static_cast<int>(j)) = c(rows[i] - 1, cols[j] - 1);
      const cplx d = det(sub);
      if (std::abs(d) > 1e-300) ts.push_back({static_cast<int>(out), static_cast<int>(in), d});
    }
  }
  return SparseOp::from_triplets(dim, dim, std::move(ts));
}

AntiLinearMap conjugation_q(const ModeSpace& ms) { return AntiLinearMap{Matrix::identity(ms.dim())}; }

}  // namespace carlab
