// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT
//
// Quasi-free states and their doubled GNS representation.
//
// Covariance R = diag(lambda_1..lambda_n), 0 < lambda_i < 1.  The doubled
// representation acts on F(H) (x) F(H) (left factor major) by
//   pi_R(a(f)) = a((1-R)^{1/2} f) (x) Gamma + 1 (x) a*(q R^{1/2} f),
// and the commutant generators are
//   b_R(h)     = a(R^{1/2} h) (x) Gamma - 1 (x) a*(q (1-R)^{1/2} h).
// In the real mode basis q is plain conjugation and cancels against the
// adjoint's conjugation, so both maps are C-linear in f.
//
// Moments: omega_R(a*(f_m)...a*(f_1) a(g_1)...a(g_n)) = delta_{mn} det M with
// M[i][j] = <R g_i, f_{m-1-j}> (0-based), inner product linear in the FIRST
// slot: <u, v> = sum_k u_k conj(v_k).  fs/gs are passed in written
// (left-to-right) order.

#pragma once

#include <vector>

#include "carlab/fock.hpp"

namespace carlab {

struct Covariance {
  int n = 0;
  std::vector<double> lambdas;

  // Throws std::invalid_argument unless eps <= lambda_i <= 1 - eps for all i.
  void validate(double eps = 1e-6) const;
  bool has_half(double tol = 1e-12) const;

  std::vector<cplx> apply_R(const std::vector<cplx>& f) const;          // R f
  std::vector<cplx> apply_sqrt_R(const std::vector<cplx>& f) const;     // R^{1/2} f
  std::vector<cplx> apply_sqrt_1mR(const std::vector<cplx>& f) const;   // (1-R)^{1/2} f
};

// Math-convention inner product, linear in the first slot.
cplx math_inner(const std::vector<cplx>& u, const std::vector<cplx>& v);

// delta_{mn} det(<R gs[i], fs[m-1-j]>); empty product = 1.
cplx quasifree_moment(const Covariance& cov, const std::vector<std::vector<cplx>>& fs,
                      const std::vector<std::vector<cplx>>& gs);

class QuasiFreeRep {
 public:
  explicit QuasiFreeRep(Covariance cov);

  const Covariance& cov() const { return cov_; }
  int n() const { return cov_.n; }
  int leg_dim() const { return leg_.dim(); }
  int dim() const { return leg_.dim() * leg_.dim(); }
  const ModeSpace& leg() const { return leg_; }

  // Cached per-mode operators (1-based mode index).
  const SparseOp& a(int mode) const { return a_[mode - 1]; }
  const SparseOp& a_dag(int mode) const { return a_dag_[mode - 1]; }
  const SparseOp& b(int mode) const { return b_[mode - 1]; }
  const SparseOp& b_dag(int mode) const { return b_dag_[mode - 1]; }
  const SparseOp& gamma2() const { return gamma2_; }
  const std::vector<cplx>& vacuum() const { return vacuum_; }

  // pi_R(a(f)) for a general one-particle vector f (C-linear in f).
  SparseOp rep_annihilator(const std::vector<cplx>& f) const;
  // pi_R(a*(f)) := adjoint(rep_annihilator(conj f)) (C-linear in f).
  SparseOp rep_creator(const std::vector<cplx>& f) const;
  // Commutant generator b_R(f) (C-linear in f).
  SparseOp commutant_generator(const std::vector<cplx>& f) const;

  // Normal-ordered monomial a*_R(h_I) a_R(h_J): creators ascending left to
  // right, annihilators descending left to right (I, J are mode bitmasks).
  // The 4^n of these span M_R (= all of B(F(H)) (x) 1-side after doubling,
  // i.e. the weak closure of the represented CAR algebra).
  SparseOp monomial(FockIndex I, FockIndex J) const;

 private:
  Covariance cov_;
  ModeSpace leg_;
  std::vector<SparseOp> a_, a_dag_, b_, b_dag_;
  SparseOp gamma2_;
  std::vector<cplx> vacuum_;
};

// Max CAR deviation over all pairs from a list of annihilator-type operators:
// max(||{a_i, a_j}||, ||{a_i, a_j*} - <h_i, h_j>||) in max-abs norm.
double car_check(const std::vector<SparseOp>& annihilators);

}  // namespace carlab
