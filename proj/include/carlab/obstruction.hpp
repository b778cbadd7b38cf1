// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT
//
// Extendability obstruction for the shifted CAR flow.
//
// For a future mode l, the A/B operator pairs agree on every vector T OmOm
// with T in the relative commutant alpha_t(M)' ∩ M_R:
//   A1 = lambda_l^{-1/2} a_R(f_l),        A2 = (1-lambda_l)^{-1/2} Gamma2 b_R(f_l),
//   B1 = (1-lambda_l)^{-1/2} a*_R(f_l),   B2 = lambda_l^{-1/2} b*_R(f_l) Gamma2,
// both members of each pair sending OmOm to Omega (x) f_l resp. f_l (x) Omega.
//
// Vacuum vectors decompose into five buckets with respect to l: paired
// families p00/p11 (the same reduced key carries both the l-free and the
// l-in-both-legs sector) and singleton sectors u00/u10/u01/u11.  The
// coefficient equations force u10 = u01 = u11 = 0 (lambda != 1/2) and, for
// any surviving pair, opposite total parities sigma(I1,J1) != sigma(I2,J2).
//
// Finite-size caveat, measured rather than assumed: at finite L the ungraded
// relative commutant also contains parity-odd elements x * Gamma_future whose
// vacuum components violate confinement with weight ~ (1-2 lambda)^{|F|};
// they converge weakly to zero as L grows and have no infinite-volume
// counterpart.  The confinement and orthogonality assertions therefore run on
// the Gamma2-even graded span (where they hold exactly at finite size), while
// the ungraded numbers are reported as the finite-size experiment.

#pragma once

#include "carlab/commutant.hpp"

namespace carlab {

struct ABOperators {
  SparseOp A1, A2, B1, B2;
};

// Corrected pairs (see header note); literal_swap = true builds the a <-> a*
// swapped variant whose pair equalities fail (covered by tests).
ABOperators ab_operators(const QuasiFreeRep& rep, int l, bool literal_swap = false);

struct VacuumBuckets {
  std::vector<cplx> p00, p11, u00, u10, u01, u11;
  // Reduced keys (left mask, right mask, both l-free) of surviving pairs,
  // with their 00/11 coefficients and total-parity signs.
  struct Pair {
    FockIndex key_left, key_right;
    cplx c00, c11;
    int sigma_left, sigma_right;  // (-1)^{|I|+|J|} of the 00-sector key
  };
  std::vector<Pair> pairs;
};

// Five-bucket decomposition of a doubled vector with respect to future mode l
// (l > t*d).  The f_l-to-front signs (crossing future modes below l, per leg)
// are folded into the stored coefficients of the bucket vectors' keys; the
// bucket vectors themselves are plain coordinate restrictions of v.
VacuumBuckets decompose_vacuum_vector(const QuasiFreeRep& rep, const ShiftModel& model, int t,
                                      int l, const std::vector<cplx>& v, double tol = 1e-12);

struct CoefficientCheck {
  double ab_residual = 0.0;      // max ||A1 v - A2 v||, ||B1 v - B2 v|| (precondition)
  double u10_norm = 0.0, u01_norm = 0.0, u11_norm = 0.0;  // bracket-forced zeros
  double pair_sigma_violation = 0.0;  // max over pairs violating sigma_l != sigma_r of min(|c00|,|c11|)
  bool pass(double tol) const;
};

CoefficientCheck coefficient_equations_check(const QuasiFreeRep& rep, const ShiftModel& model,
                                             int t, int l, const std::vector<cplx>& v,
                                             double tol = 1e-12);

struct RelativeCommutantSpan {
  // Orthonormal vacuum spans T OmOm.
  Matrix span;       // ungraded
  Matrix span_even;  // Gamma2-even solutions only
  int dim_ops = 0;        // operator-space dimension, ungraded
  int dim_ops_even = 0;   // Gamma2-even operator-space dimension
  // Monomial-coefficient solutions (columns, over the 4^n monomial basis).
  Matrix coeffs, coeffs_even;
  // Rebuild the k-th ungraded (or even) solution as an operator.
  SparseOp op(const QuasiFreeRep& rep, int k, bool even) const;
};

// Solve alpha_t(M_small)' ∩ M_R in the monomial parametrization
// T = sum c_{IJ} a*_R(h_I) a_R(h_J) (membership in M_R is then automatic).
RelativeCommutantSpan relative_commutant_vacuum_span(const QuasiFreeRep& rep,
                                                     const ShiftModel& model, int t,
                                                     double rtol = 1e-9);

struct ConfinementReport {
  // Residual of the vacuum span outside the parity-confined past span
  // span{ e_{I1} (x) e_{I2} : |I1| = |I2| mod 2 }, per graded and ungraded.
  double residual_even = 0.0;
  double residual_ungraded = 0.0;
  int confined_dim = 0;      // dim of the confined target span
  int dim_even = 0;          // vacuum-span dim, even part
  int dim_ungraded = 0;
  // Equal-total-parity assertion (components with nonempty future support
  // carry equal left/right total parity): max violating coefficient.
  double parity_violation_even = 0.0;
  double parity_violation_ungraded = 0.0;
};

ConfinementReport parity_confinement_check(const QuasiFreeRep& rep, const ShiftModel& model, int t,
                                           const RelativeCommutantSpan& span, double rtol = 1e-9);

struct ExtendabilityReport {
  // max_g |<e_g (x) Omega, P_span>| (projection norm onto the span) for past
  // modes g, for the even-graded and ungraded spans.
  double max_overlap_even = 0.0;
  double max_overlap_ungraded = 0.0;
  int span_dim_even = 0;
  int span_dim_ungraded = 0;
  bool obstruction_present = false;  // even-graded overlaps all below tol
};

// Weak-totality witness: span { y alpha_t(x) OmOm } over relative-commutant
// basis elements y and small monomials x, tested against e_g (x) Omega.
ExtendabilityReport extendability_criterion(const QuasiFreeRep& rep, const ShiftModel& model,
                                            int t, double rtol = 1e-9, double tol = 1e-10);

struct HalfLambdaReport {
  // |sqrt(lambda/(1-lambda)) - sqrt((1-lambda)/lambda)|: the mismatch of the
  // two scalar multipliers in the singleton-bucket coefficient equations.
  double margin = 0.0;
  // Forcing strength of the A/B equalities on the margin-controlled
  // (odd-total-parity) subspace of each singleton bucket: the smallest
  // singular value of (A1-A2, B1-B2) restricted there.  These drop to zero
  // exactly when the equations read "both sides equal".
  double sigma_min_u10 = 0.0;
  double sigma_min_u01 = 0.0;
  double sigma_min_u11 = 0.0;
  // Control group: the parity-sum-forced (even) subspace of u10 stays forced
  // at every lambda.
  double sigma_min_even_u10 = 0.0;

  bool vacuous(double tol) const {
    return margin <= tol && sigma_min_u10 <= tol && sigma_min_u01 <= tol && sigma_min_u11 <= tol;
  }
};

// At lambda = 1/2 the singleton-bucket coefficient equations degenerate: the
// two scalar multipliers coincide, so they no longer force u10/u01/u11 to
// vanish on the odd-parity subspace.  This measures that degeneration.
HalfLambdaReport half_lambda_vacuousness(const QuasiFreeRep& rep, const ShiftModel& model,
                                         int t, int l);

}  // namespace carlab
