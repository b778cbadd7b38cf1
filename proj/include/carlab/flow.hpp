// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT
//
// Discrete shift flow on an L x d mode lattice: position p in 1..L carries d
// channels, mode (p, k) has flat index (p-1)d + k.  The covariance is uniform
// in p (one lambda per channel), so R commutes with the shift.
//
//   s_hat_t: h_{(p,k)} -> h_{(p+t,k)} for p + t <= L, else 0  (truncated),
//   S_t = Lambda(s_hat_t) (x) Lambda(s_hat_t) on the doubled space,
//   alpha_t: defined on the small algebra (positions 1..L-t) by the monomial
//            mapping a*_R(h_I) a_R(h_J) -> a*_R(s_t h_I) a_R(s_t h_J).

#pragma once

#include <map>

#include "carlab/quasifree.hpp"

namespace carlab {

struct ShiftModel {
  int L = 2;  // positions
  int d = 1;  // channels per position
  int n() const { return L * d; }
  int mode(int p, int k) const { return (p - 1) * d + k; }  // 1-based
  int small_modes(int t) const { return (L - t) * d; }      // positions 1..L-t
  int past_modes(int t) const { return t * d; }             // positions 1..t
  FockIndex small_mask(int t) const { return (FockIndex{1} << small_modes(t)) - 1; }
  FockIndex past_mask(int t) const { return (FockIndex{1} << past_modes(t)) - 1; }
  // Flat-index shift: mode m -> m + t*d (valid for m <= small_modes(t)).
  int shift_mode(int m, int t) const { return m + t * d; }
  FockIndex shift_mask(FockIndex I, int t) const { return I << (t * d); }
  // Uniform-per-channel covariance for this lattice.
  Covariance covariance(const std::vector<double>& channel_lambdas) const;
};

// One-particle truncated shift matrix s_hat_t (n x n).
Matrix shift_isometry(const ShiftModel& model, int t);

// Doubled flow isometry S_t = Lambda(s_hat_t) (x) Lambda(s_hat_t).
SparseOp flow_isometry(const ShiftModel& model, int t);

// Projection onto the doubled small-lattice subspace, S_t* S_t.
SparseOp initial_projection(const ShiftModel& model, int t);

struct AlphaResult {
  SparseOp image;
  double expansion_residual = 0.0;  // least-squares defect of x in the small monomial span
};

// alpha_t(x) for x in the span of small-lattice monomials; throws if the
// expansion residual exceeds membership_tol.
AlphaResult alpha_endomorphism(const QuasiFreeRep& rep, const ShiftModel& model, int t,
                               const SparseOp& x, double membership_tol = 1e-9);

// Expansion of a_R(h_L) a*_R(h_Ltilde) Omega(x)Omega over the orthogonal
// family A h_{L1} (x) B h_{L1}, L1 subset of L:  returns {L1 mask -> c(L1)}
// plus the off-family residual (which should vanish).
struct PairedExpansion {
  std::map<FockIndex, cplx> coefficients;
  double residual = 0.0;
};
PairedExpansion paired_monomial_expand(const QuasiFreeRep& rep, FockIndex Lset);

}  // namespace carlab
