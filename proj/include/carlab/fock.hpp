// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT
//
// Exact antisymmetric Fock space over n modes.  Basis vectors are wedge
// monomials h_I indexed by bitmasks (bit i-1 <-> mode i occupied), stored in
// increasing mode order.  The creator prepends:
//   a*(h_i) h_I = (-1)^{|{j in I : j < i}|} h_{I u {i}},   0 if i in I,
// and a(h_i) is its adjoint.  Both create_op(f) and annihilate_op(f) are
// C-linear in f; annihilate_op(f) = adjoint(create_op(conj f)).

#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "carlab/dense.hpp"
#include "carlab/sparse.hpp"

namespace carlab {

using FockIndex = std::uint32_t;

struct ModeSpace {
  int n = 0;  // number of modes, labeled 1..n (bit i-1)
  int dim() const { return 1 << n; }
};

inline int popcount(FockIndex m) { return std::popcount(m); }

// (-1)^{number of occupied modes strictly below bit}.
inline int jw_sign(FockIndex mask, int bit) {
  return (std::popcount(mask & ((FockIndex{1} << bit) - 1)) & 1) ? -1 : 1;
}

// Modes (1-based) present in a mask, increasing.
std::vector<int> mask_modes(FockIndex mask);
FockIndex modes_mask(const std::vector<int>& modes);

// a*(f) = sum_i f_i a*(h_i), linear in f.
SparseOp create_op(const ModeSpace& ms, const std::vector<cplx>& f);
// a(f) = adjoint(a*(conj f)) = sum_i f_i a(h_i), linear in f.
SparseOp annihilate_op(const ModeSpace& ms, const std::vector<cplx>& f);
// Gamma = (-1)^N.
SparseOp parity_op(const ModeSpace& ms);
// Lambda(c): second quantization of a one-particle map c (n x n), with
// matrix elements Lambda(c)[K, I] = det c[K; I] on equal-size index sets.
SparseOp second_quantize(const ModeSpace& ms, const Matrix& c);
// q: componentwise conjugation in the h_I basis (matrix = identity).
AntiLinearMap conjugation_q(const ModeSpace& ms);

// Single-mode convenience (mode is 1-based).
SparseOp create_mode(const ModeSpace& ms, int mode);
SparseOp annihilate_mode(const ModeSpace& ms, int mode);

// Determinant of a small dense complex matrix (partial-pivot elimination).
cplx det(Matrix m);

}  // namespace carlab
