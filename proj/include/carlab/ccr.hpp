// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT
//
// Truncated bosonic Fock space, Weyl operators, and the quasi-free CCR state
// with its doubled representation.  This is the commutative-relations
// companion of the fermionic core: the same "double the space, split the
// symbol" construction, with W((1+T)^{1/2} f) (x) W(q T^{1/2} f) in place of
// the fermionic a/b pair.
//
// Conventions.  The boson module uses the physics pairing
//     <f,g> = sum_k conj(f_k) g_k   (antilinear in the FIRST argument),
// under which all three structure identities hold simultaneously and exactly
// (up to truncation):
//     [a(f), a*(g)] = <f,g> 1                    on the sector |m| <= N-1,
//     W(f) exp(g)   = e^{-1/2 ||f||^2 - <f,g>} exp(g+f),
//     W(f) W(g)     = e^{-i Im<f,g>} W(f+g).
// Here a(f) is antilinear in f and a*(f) = a(f)^dagger is linear.  The
// displacement W(f) = exp(a*(f) - a(f)) is realized through a Hermitian
// eigendecomposition of the truncated generator, so it is exactly unitary on
// the truncated space.

#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "carlab/dense.hpp"

namespace carlab {

// ---------------------------------------------------------------------------
// Boson space: occupation tuples with total quanta <= cutoff.
// ---------------------------------------------------------------------------

struct BosonSpace {
  int n_modes = 0;
  int cutoff = 0;  // N: maximal total number of quanta kept
  // Basis tuples in lexicographic order; occ[k][i] = quanta in mode i+1.
  std::vector<std::vector<int>> occ;
  std::map<std::vector<int>, int> index;

  int dim() const { return static_cast<int>(occ.size()); }
  int total_quanta(int k) const;
  int index_of(const std::vector<int> &m) const;  // -1 if absent

  static BosonSpace make(int n_modes, int cutoff);
};

// C(n+N, n), the dimension of the truncated space.
long boson_dimension(int n_modes, int cutoff);

// Physics-convention pairing: antilinear in the first slot.
cplx phys_inner(const std::vector<cplx> &u, const std::vector<cplx> &v);

// ---------------------------------------------------------------------------
// Covariance symbol T (diagonal, nonnegative).
// ---------------------------------------------------------------------------

struct BosonCovariance {
  int n_modes = 0;
  std::vector<double> t;  // diagonal entries of T, one per mode

  void validate() const;  // throws std::invalid_argument if T < 0 or size off
  bool injective() const;

  // One-particle symbols applied to a vector.
  std::vector<cplx> apply_sqrt_T(const std::vector<cplx> &f) const;
  std::vector<cplx> apply_sqrt_1pT(const std::vector<cplx> &f) const;
  std::vector<cplx> apply_1p2T(const std::vector<cplx> &f) const;

  // Convenience constructor T = lambda/(1-lambda), the symbol matched to the
  // fermionic parameter lambda in (0,1).
  static BosonCovariance from_lambda(const std::vector<double> &lambdas);
};

// ---------------------------------------------------------------------------
// Elementary operators (dense; the truncated spaces are tiny).
// ---------------------------------------------------------------------------

// Truncated creator/annihilator for one mode (1-based), a* = P_N a*_full P_N.
Matrix boson_create(const BosonSpace &bs, int mode);
Matrix boson_annihilate(const BosonSpace &bs, int mode);

// Smeared fields: a*(f) = sum_i f_i a*_i (linear), a(f) = sum_i conj(f_i) a_i
// (antilinear); a(f) = a*(f)^dagger.
Matrix boson_create_op(const BosonSpace &bs, const std::vector<cplx> &f);
Matrix boson_annihilate_op(const BosonSpace &bs, const std::vector<cplx> &f);

// Number operator (diagonal), for truncation bookkeeping.
Matrix boson_number_op(const BosonSpace &bs);

// ---------------------------------------------------------------------------
// Exponential vectors and Weyl operators.
// ---------------------------------------------------------------------------

struct ExpVector {
  std::vector<cplx> v;  // truncated exponential vector, coefficients
                        // prod_i f_i^{m_i} / sqrt(m_i!)
  double tail_defect = 0.0;  // e^{||f||^2} - sum_{k<=N} ||f||^{2k}/k!
};

ExpVector exp_vector(const BosonSpace &bs, const std::vector<cplx> &f);

// The norm-squared tail bound by itself.
double exp_tail_defect(double norm_sq, int cutoff);

// W(f) = exp(a*(f) - a(f)) via Hermitian eigendecomposition of the truncated
// generator; exactly unitary on the truncated space.
Matrix weyl_op(const BosonSpace &bs, const std::vector<cplx> &f);

// ||W^dagger W - 1||_max, the (machine-level) unitarity defect.
double weyl_unitarity_defect(const Matrix &w);

// Doubled quasi-free representation on F_+ (x) F_+:
//     pi_T(W(f)) = W((1+T)^{1/2} f) (x) W(q T^{1/2} f),
// where q is componentwise complex conjugation.  The conjugation on the right
// leg is what makes the product phases of the two legs recombine into the
// original CCR phase e^{-i Im<f,g>}.
Matrix doubled_weyl_rep(const BosonSpace &bs, const BosonCovariance &cov,
                        const std::vector<cplx> &f);

// Commutant candidate W~(g) = W(T^{1/2} g) (x) W(q (1+T)^{1/2} g); commutes
// with pi_T(W(f)) up to truncation.
Matrix doubled_weyl_commutant(const BosonSpace &bs, const BosonCovariance &cov,
                              const std::vector<cplx> &g);

// ---------------------------------------------------------------------------
// Checks.
// ---------------------------------------------------------------------------

// [a(f), a*(g)] - <f,g> 1 restricted to total quanta <= N-1 (exact there).
double truncated_ccr_defect(const BosonSpace &bs, const std::vector<cplx> &f,
                            const std::vector<cplx> &g);

struct WeylRelationCheck {
  cplx phase_oracle;     // e^{-i Im<f,g>}
  cplx phase_measured;   // <v,u>/<v,v> with u = W(f)W(g) Omega, v = W(f+g) Omega
  double phase_error;    // |measured - oracle|
  double vector_residual;  // ||u - oracle * v||
};

WeylRelationCheck weyl_relation_check(const BosonSpace &bs,
                                      const std::vector<cplx> &f,
                                      const std::vector<cplx> &g);

// Same relation for the doubled representation pi_T.
WeylRelationCheck doubled_weyl_relation_check(const BosonSpace &bs,
                                              const BosonCovariance &cov,
                                              const std::vector<cplx> &f,
                                              const std::vector<cplx> &g);

struct CcrStateSample {
  std::vector<cplx> f;
  cplx gns_value;            // <Omega(x)Omega, pi_T(W(f)) Omega(x)Omega>
  double squared_formula;    // e^{-1/2 ||(1+2T)^{1/2} f||^2}
  double unsquared_formula;  // e^{-1/2 ||(1+2T)^{1/2} f||}   (the naive reading)
  double dev_squared;
  double dev_unsquared;
  double tail_tolerance;  // combined truncation tails of the two legs
};

struct CcrStateReport {
  std::vector<CcrStateSample> samples;
  bool squared_matches = false;    // every sample within tail tolerance
  bool unsquared_matches = false;  // the naive reading (expected to fail)
  double max_dev_squared = 0.0;
  double max_dev_unsquared = 0.0;
};

// Compares the numerically computed vacuum expectation of pi_T(W(f)) against
// the squared-norm reading exp(-1/2 ||(1+2T)^{1/2} f||^2) and against the
// naive unsquared one; reports which matches.
CcrStateReport ccr_state_check(const BosonSpace &bs, const BosonCovariance &cov,
                               const std::vector<std::vector<cplx>> &fs,
                               double tol_floor = 1e-9);

// ||[pi_T(W(f)), W~(g)]||_max, which must vanish up to truncation.  The
// max-abs norm is dominated by states at the cutoff boundary, where the
// truncated Weyl operators are least accurate; report-grade only.
double doubled_commutant_defect(const BosonSpace &bs,
                                const BosonCovariance &cov,
                                const std::vector<cplx> &f,
                                const std::vector<cplx> &g);

// ||[pi_T(W(f)), W~(g)] Omega(x)Omega||: same commutation relation measured
// on the GNS vector, where the truncation tail controls the error.
double doubled_commutant_vacuum_defect(const BosonSpace &bs,
                                       const BosonCovariance &cov,
                                       const std::vector<cplx> &f,
                                       const std::vector<cplx> &g);

// Smallest eigenvalue of the Gram matrix of {pi_T(W(f_i)) Omega(x)Omega}
// (state positivity; >= -tolerance).
double state_gram_min_eigenvalue(const BosonSpace &bs,
                                 const BosonCovariance &cov,
                                 const std::vector<std::vector<cplx>> &fs);

}  // namespace carlab
