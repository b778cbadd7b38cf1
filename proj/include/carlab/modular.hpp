// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT
//
// Tomita-Takesaki modular data for (M_R, Omega (x) Omega).
//
// Closed forms on basis masks (P = left mask, Q = right mask):
//   S(h_P (x) h_Q) = tau_P tau_Q  prod_{i in P} sqrt(l_i/(1-l_i))
//                                 prod_{j in Q} sqrt((1-l_j)/l_j)  h_Q (x) h_P
//   F = same with the two weight products swapped,
//   J(h_P (x) h_Q) = (-1)^{|L|(|I|+|J|)} tau_I tau_J  h_Q (x) h_P,
//     where I = P\Q, J = Q\P, L = P∩Q and tau_K = (-1)^{|K|(|K|-1)/2},
// all maps antilinear.  Delta = F S is linear diagonal with eigenvalue
//   prod_{i in P} l_i/(1-l_i) * prod_{j in Q} (1-l_j)/l_j
// on h_P (x) h_Q (the F S composition form; a standalone display that keys
// the eigenvalue on the (I, L, J) decode double-counts the overlap L).

#pragma once

#include "carlab/quasifree.hpp"

namespace carlab {

struct ModularData {
  AntiLinearMap S;  // closure of x Omega -> x* Omega
  AntiLinearMap F;  // S* (adjoint)
  AntiLinearMap J;  // modular conjugation (antiunitary part of S)
  Matrix Delta;     // modular operator F S (positive)
};

// Modular data from the GNS construction: assemble G = [m_k Omega] and
// G* = [m_k* Omega] over the 4^n monomial basis, solve M_S conj(G) = G*,
// then polar-decompose.  Throws if the vacuum is not cyclic and separating.
ModularData tomita_from_gns(const QuasiFreeRep& rep, double rtol = 1e-9);

AntiLinearMap closed_form_S(const Covariance& cov);
AntiLinearMap closed_form_F(const Covariance& cov);
AntiLinearMap closed_form_J(const Covariance& cov);
Matrix closed_form_Delta(const Covariance& cov);
double delta_eigenvalue(const Covariance& cov, FockIndex P, FockIndex Q);

struct ConjugationResiduals {
  double j_a_vs_bdag_gamma = 0.0;  // max over modes of ||J a_m J - b*_m Gamma2||
  double j_adag_vs_gamma_b = 0.0;  // max over modes of ||J a*_m J - Gamma2 b_m||
  double j_gamma2 = 0.0;           // ||J Gamma2 J - Gamma2||
  double commutation = 0.0;        // max over pairs of ||[J x J, y]||
  double max() const;
};

// Verify J M_R J = M_R' generator-wise.
ConjugationResiduals verify_commutant_conjugation(const QuasiFreeRep& rep, const ModularData& md);

}  // namespace carlab
