// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT
//
// Intertwiner spaces of the shifted CAR flow:
//   E^{alpha_t}  = { T : alpha_t(g) T = T g,   g in small CAR generators }
//   E^{alpha'_t} = { T : alpha'_t(g') T = T g', g' in small commutant
//                    generators }, alpha'_t = J alpha_t(J . J) J, which on
//                    generators is the clean shift Gamma2 b_m -> Gamma2
//                    b_{m+td} and b*_m Gamma2 -> b*_{m+td} Gamma2,
//   H_t = E^{alpha_t} ∩ E^{alpha'_t}   (the super product system fiber).
//
// Null spaces use SVD semantics: directions with sigma <= rtol * sigma_max.
// Large solves go through sparse Gram accumulation + one Hermitian
// eigendecomposition (sigma_i = sqrt(eig_i)); a spectral-gap assertion guards
// the squared conditioning and falls back to a dense SVD if the spectrum is
// ambiguous near the threshold.

#pragma once

#include <optional>

#include "carlab/flow.hpp"
#include "carlab/modular.hpp"

namespace carlab {

enum class Side { flow, commutant_flow };

struct IntertwinerSpace {
  // Orthonormal basis of vec(T) solutions, one column per basis element.
  Matrix basis;  // (D*D) x dim
  int D = 0;
  int dim() const { return basis.cols(); }
  Matrix element(int k) const;  // reshape column k to D x D
};

// Solve one side's intertwiner relations over all of B(doubled space).
IntertwinerSpace solve_intertwiners(const QuasiFreeRep& rep, const ShiftModel& model, int t,
                                    Side side, double rtol = 1e-9);

struct SuperProductSpace {
  IntertwinerSpace E_flow;
  IntertwinerSpace E_comm;
  IntertwinerSpace H;       // intersection
  IntertwinerSpace H_even;  // intersection with [Gamma2, T] = 0 added
  int dim_H_compressed = 0;       // rank of {T P : T in H}
  int dim_H_compressed_even = 0;  // rank of {T P : T in H_even}
  int predicted_even = 0;         // 2^{2p-1}, p = t*d past modes
};

SuperProductSpace super_product_space(const QuasiFreeRep& rep, const ShiftModel& model, int t,
                                      double rtol = 1e-9);

// Canonical intertwiner T_{I1 I2} (I1, I2 masks over past modes 1..t*d):
//   T_{I1 I2} (h_{J1} (x) h_{J2}) =
//     (-1)^{|I2||J2|} h_{I1 u s_t J1} (x) h_{I2 u s_t J2},  J1, J2 small,
// zero on basis vectors outside the small-lattice doubled subspace.
// T_{emptyset emptyset} = S_t.
SparseOp canonical_intertwiner(const ShiftModel& model, int t, FockIndex I1, FockIndex I2);

struct BimoduleReport {
  int dim_E_flow = 0;
  int dim_comm_span = 0;        // dim span { m' S_t : m' in M_R' monomials }
  double containment_residual = 0.0;  // max relative distance of m' S_t from E^{alpha_t}
  bool equality = false;        // dim_comm_span == dim_E_flow
  double eq23_residual = 0.0;   // max relative distance of m S_t from E^{alpha'_t}
};

// Finite analog of the bimodule description of E^{alpha_t}: the commutant
// multiples { m' S_t } embed into the solver space (containment is exact);
// equality of dimensions is reported, not asserted.
BimoduleReport verify_bimodule_theorem(const QuasiFreeRep& rep, const ShiftModel& model, int t,
                                       double rtol = 1e-9);

struct ProductStructureReport {
  double projection_residual = 0.0;  // max distance of H_s * H_t elements from H_{s+t}
  double gram_defect = 0.0;          // |<T S, T' S'> - <T, T'><S, S'>| max (report-only)
  double scalar_residual = 0.0;      // max ||P T* T' P - c P|| over canonical pairs
};

ProductStructureReport product_structure_check(const QuasiFreeRep& rep, const ShiftModel& model,
                                               int s, int t, double rtol = 1e-9);

struct CanonicalFamilyReport {
  int count = 0;  // equal-parity past pairs (I1, I2): 2^{2p-1} of them
  double intertwining_residual = 0.0;       // flow-side relations, max over family
  double comm_intertwining_residual = 0.0;  // commutant-side relations
  double conjugation_residual = 0.0;        // max ||J T_{I1 I2} J - T_{I2 I1}||
  double orthogonality_residual = 0.0;      // max ||T_I* T_K - delta_{IK} P||
  double isometry_residual = 0.0;           // ||T_{emptyset emptyset} - S_t||
  double membership_residual = 0.0;         // distance of vec(T) from span(H), if H given
};

// Run the whole canonical family { T_{I1 I2} : |I1| = |I2| mod 2 } through the
// defining relations, the J-conjugation symmetry and mutual orthogonality.
CanonicalFamilyReport canonical_family_check(const QuasiFreeRep& rep, const ShiftModel& model,
                                             int t, const IntertwinerSpace* H = nullptr);

// Shared helpers -----------------------------------------------------------

// Null space of stacked sparse constraint blocks acting on C^m via the Gram
// path (sum C_k^dag C_k, zheevd) with gap assertion and dense-SVD fallback.
Matrix sparse_constraint_nullspace(const std::vector<SparseOp>& blocks, int m, double rtol);

// Orthonormal columns spanning the intersection of span(A) and the null space
// of the stacked blocks applied after A (i.e. {A c : C_k A c = 0 all k}).
Matrix restrict_nullspace(const std::vector<SparseOp>& blocks, const Matrix& A, double rtol);

// Frobenius inner product of sparse operators, <a, b> = sum conj(a_ij) b_ij.
cplx sparse_frob_dot(const SparseOp& a, const SparseOp& b);

}  // namespace carlab
