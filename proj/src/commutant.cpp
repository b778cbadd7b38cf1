// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT

#include "carlab/commutant.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

#include "carlab/lapack.hpp"

namespace carlab {

namespace {

// Generator pairs (L_k, R_k) for the side's relations L_k T = T R_k.
std::vector<std::pair<SparseOp, SparseOp>> side_pairs(const QuasiFreeRep& rep,
                                                      const ShiftModel& model, int t, Side side) {
  std::vector<std::pair<SparseOp, SparseOp>> pairs;
  const int shift = t * model.d;
  for (int m = 1; m <= model.small_modes(t); ++m) {
    if (side == Side::flow) {
      pairs.emplace_back(rep.a(m + shift), rep.a(m));
      pairs.emplace_back(rep.a_dag(m + shift), rep.a_dag(m));
    } else {
      // alpha'_t(Gamma2 b_m) = Gamma2 b_{m+td}, alpha'_t(b*_m Gamma2) =
      // b*_{m+td} Gamma2 (from J-conjugating the flow relations).
      const SparseOp& g2 = rep.gamma2();
      pairs.emplace_back(g2.mul(rep.b(m + shift)), g2.mul(rep.b(m)));
      pairs.emplace_back(rep.b_dag(m + shift).mul(g2), rep.b_dag(m).mul(g2));
    }
  }
  return pairs;
}

constexpr double kGramFloorFactor = 40.0;  // floor = factor * sqrt(m * eps) * sigma_max

struct SigmaSplit {
  int null_count;
  bool gap_ok;
};

// Classify sigma values (ascending) against the effective threshold.  The
// Gram path squares the conditioning, so the threshold is floored at the
// machine level of the eigensolve; a clean split requires the band
// (thresh, 50 * thresh] to be empty.
SigmaSplit split_sigmas(const std::vector<double>& sigmas_ascending, double rtol, int m) {
  const double smax = sigmas_ascending.empty() ? 0.0 : sigmas_ascending.back();
  if (smax == 0.0) return {static_cast<int>(sigmas_ascending.size()), true};
  const double floor = kGramFloorFactor * std::sqrt(m * 2.2e-16) * smax;
  const double thresh = std::max(rtol * smax, floor);
  int nullc = 0;
  bool gap_ok = true;
  for (double s : sigmas_ascending) {
    if (s <= thresh)
      ++nullc;
    else if (s <= 50.0 * thresh)
      gap_ok = false;
  }
  return {nullc, gap_ok};
}

Matrix dense_stacked_nullspace(const std::vector<SparseOp>& blocks, int m, double rtol) {
  int rows = 0;
  for (const auto& b : blocks) rows += b.rows();
  Matrix C(rows, m);
  int off = 0;
  for (const auto& b : blocks) {
    for (int i = 0; i < b.rows(); ++i)
      for (int k = b.row_ptr()[i]; k < b.row_ptr()[i + 1]; ++k)
        C(off + i, b.col_idx()[k]) = b.vals()[k];
    off += b.rows();
  }
  return lapack::nullspace(C, rtol);
}

}  // namespace

Matrix IntertwinerSpace::element(int k) const {
  Matrix T(D, D);
  for (int j = 0; j < D; ++j)
    for (int i = 0; i < D; ++i) T(i, j) = basis(j * D + i, k);
  return T;
}

cplx sparse_frob_dot(const SparseOp& a, const SparseOp& b) {
  cplx s{0.0, 0.0};
  for (int i = 0; i < a.rows(); ++i) {
    int ka = a.row_ptr()[i], kb = b.row_ptr()[i];
    const int ea = a.row_ptr()[i + 1], eb = b.row_ptr()[i + 1];
    while (ka < ea && kb < eb) {
      const int ca = a.col_idx()[ka], cb = b.col_idx()[kb];
      if (ca == cb) {
        s += std::conj(a.vals()[ka]) * b.vals()[kb];
        ++ka;
        ++kb;
      } else if (ca < cb) {
        ++ka;
      } else {
        ++kb;
      }
    }
  }
  return s;
}

Matrix sparse_constraint_nullspace(const std::vector<SparseOp>& blocks, int m, double rtol) {
  if (blocks.empty()) return Matrix::identity(m);
  long long rows = 0;
  for (const auto& b : blocks) rows += b.rows();
  // Small systems: direct dense SVD (exact threshold semantics).
  if (static_cast<long long>(m) * (rows + m) <= 2LL * 2048 * 2048)
    return dense_stacked_nullspace(blocks, m, rtol);

  // Gram path: accumulate sum C^dag C sparse, one Hermitian eigensolve.
  SparseOp gram(m, m);
  for (const auto& b : blocks) gram = gram.add(b.adjoint().mul(b));
  lapack::EigResult eig = lapack::hermitian_eig(gram.to_dense());
  std::vector<double> sigmas(eig.values.size());
  for (std::size_t i = 0; i < eig.values.size(); ++i) sigmas[i] = std::sqrt(std::max(eig.values[i], 0.0));
  SigmaSplit split = split_sigmas(sigmas, rtol, m);
  if (!split.gap_ok) return dense_stacked_nullspace(blocks, m, rtol);
  Matrix N(m, split.null_count);
  for (int j = 0; j < split.null_count; ++j)
    for (int i = 0; i < m; ++i) N(i, j) = eig.vectors(i, j);  // ascending eigenvalues
  return N;
}

Matrix restrict_nullspace(const std::vector<SparseOp>& blocks, const Matrix& A, double rtol) {
  const int k = A.cols();
  if (k == 0 || blocks.empty()) return A;
  Matrix gram(k, k);
  for (const auto& b : blocks) {
    Matrix M = b.apply_dense(A);
    gram += M.adjoint().mul(M);
  }
  lapack::EigResult eig = lapack::hermitian_eig(gram);
  std::vector<double> sigmas(eig.values.size());
  for (std::size_t i = 0; i < eig.values.size(); ++i) sigmas[i] = std::sqrt(std::max(eig.values[i], 0.0));
  SigmaSplit split = split_sigmas(sigmas, rtol, A.rows());
  if (!split.gap_ok) {
    // Fallback: dense SVD of the stacked projected blocks.
    int rows = 0;
    for (const auto& b : blocks) rows += b.rows();
    Matrix stacked(rows, k);
    int off = 0;
    for (const auto& b : blocks) {
      Matrix M = b.apply_dense(A);
      for (int j = 0; j < k; ++j)
        for (int i = 0; i < M.rows(); ++i) stacked(off + i, j) = M(i, j);
      off += M.rows();
    }
    return A.mul(lapack::nullspace(stacked, rtol));
  }
  Matrix coords(k, split.null_count);
  for (int j = 0; j < split.null_count; ++j)
    for (int i = 0; i < k; ++i) coords(i, j) = eig.vectors(i, j);
  return A.mul(coords);
}

IntertwinerSpace solve_intertwiners(const QuasiFreeRep& rep, const ShiftModel& model, int t,
                                    Side side, double rtol) {
  // The same space is requested repeatedly by the bimodule and product
  // checks; the solve dominates the runtime, so memoize per configuration.
  struct Key {
    int L, d, t, side;
    double rtol;
    std::vector<double> lambdas;
    bool operator<(const Key& o) const {
      return std::tie(L, d, t, side, rtol, lambdas) <
             std::tie(o.L, o.d, o.t, o.side, o.rtol, o.lambdas);
    }
  };
  static std::map<Key, IntertwinerSpace> cache;
  const Key key{model.L, model.d, t, static_cast<int>(side), rtol, rep.cov().lambdas};
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  const int D = rep.dim();
  std::vector<SparseOp> blocks;
  for (const auto& [L, R] : side_pairs(rep, model, t, side)) blocks.push_back(sylvester_block(L, R));
  IntertwinerSpace sp;
  sp.D = D;
  sp.basis = sparse_constraint_nullspace(blocks, D * D, rtol);
  if (cache.size() < 32) cache.emplace(key, sp);
  return sp;
}

// T -> J T J maps E^{alpha_t} antiunitarily (in Hilbert-Schmidt norm) onto
// E^{alpha'_t}, so beyond small sizes the second side comes from conjugating
// the first basis instead of a second large eigensolve.  The small-size
// tests check this against the direct solve.
static IntertwinerSpace commutant_intertwiner_space(const QuasiFreeRep& rep,
                                                    const ShiftModel& model, int t, double rtol,
                                                    const IntertwinerSpace& E_flow) {
  const int D = rep.dim();
  if (static_cast<long long>(D) * D <= 1024)
    return solve_intertwiners(rep, model, t, Side::commutant_flow, rtol);
  IntertwinerSpace out;
  const AntiLinearMap Jc = closed_form_J(rep.cov());
  out.D = D;
  out.basis = Matrix(D * D, E_flow.dim());
  for (int k = 0; k < E_flow.dim(); ++k) {
    const Matrix jtj = Jc.conjugate_op(E_flow.element(k));
    for (int j = 0; j < D; ++j)
      for (int i = 0; i < D; ++i) out.basis(j * D + i, k) = jtj(i, j);
  }
  return out;
}

SuperProductSpace super_product_space(const QuasiFreeRep& rep, const ShiftModel& model, int t,
                                      double rtol) {
  SuperProductSpace out;
  out.E_flow = solve_intertwiners(rep, model, t, Side::flow, rtol);
  out.E_comm = commutant_intertwiner_space(rep, model, t, rtol, out.E_flow);

  std::vector<SparseOp> comm_blocks;
  for (const auto& [L, R] : side_pairs(rep, model, t, Side::commutant_flow))
    comm_blocks.push_back(sylvester_block(L, R));
  out.H.D = rep.dim();
  out.H.basis = restrict_nullspace(comm_blocks, out.E_flow.basis, rtol);

  std::vector<SparseOp> even_block{sylvester_block(rep.gamma2(), rep.gamma2())};
  out.H_even.D = rep.dim();
  out.H_even.basis = restrict_nullspace(even_block, out.H.basis, rtol);

  const SparseOp P = initial_projection(model, t);
  const SparseOp compress = kron(P.transpose_noconj(), SparseOp::identity(rep.dim()));
  auto compressed_rank = [&](const Matrix& basis) {
    if (basis.cols() == 0) return 0;
    return lapack::rank(compress.apply_dense(basis), rtol);
  };
  out.dim_H_compressed = compressed_rank(out.H.basis);
  out.dim_H_compressed_even = compressed_rank(out.H_even.basis);
  out.predicted_even = 1 << (2 * model.past_modes(t) - 1);
  return out;
}

SparseOp canonical_intertwiner(const ShiftModel& model, int t, FockIndex I1, FockIndex I2) {
  const int ld = 1 << model.n();
  const FockIndex small = model.small_mask(t);
  const FockIndex past = model.past_mask(t);
  if ((I1 & ~past) || (I2 & ~past))
    throw std::invalid_argument("canonical_intertwiner: I1, I2 must be past-mode masks");
  std::vector<Triplet> ts;
  for (FockIndex J1 = 0; J1 <= small; ++J1) {
    if ((J1 & small) != J1) continue;
    for (FockIndex J2 = 0; J2 <= small; ++J2) {
      if ((J2 & small) != J2) continue;
      const int col = static_cast<int>(J1) * ld + static_cast<int>(J2);
      const FockIndex P = I1 | model.shift_mask(J1, t);
      const FockIndex Q = I2 | model.shift_mask(J2, t);
      const int row = static_cast<int>(P) * ld + static_cast<int>(Q);
      // Right-leg crossing sign, times the reversal sign tau_{I2} that makes
      // the family J-covariant: J T_{I1 I2} J = T_{I2 I1}.
      const int k2 = popcount(I2);
      const int tau2 = ((k2 * (k2 - 1) / 2) % 2) ? -1 : 1;
      const double sign = (((k2 * popcount(J2)) % 2) ? -1.0 : 1.0) * tau2;
      ts.push_back({row, col, cplx{sign, 0.0}});
    }
  }
  return SparseOp::from_triplets(ld * ld, ld * ld, std::move(ts));
}

BimoduleReport verify_bimodule_theorem(const QuasiFreeRep& rep, const ShiftModel& model, int t,
                                       double rtol) {
  BimoduleReport rep_out;
  const int D = rep.dim();
  const int n = rep.n();
  IntertwinerSpace E = solve_intertwiners(rep, model, t, Side::flow, rtol);
  rep_out.dim_E_flow = E.dim();

  const ModularData md = tomita_from_gns(rep);
  const SparseOp st = flow_isometry(model, t);
  const Matrix st_dense = st.to_dense();

  // span { m' S_t }, m' = J m J over the 4^n monomial basis of M_R.
  const int nmono = 1 << (2 * n);
  Matrix V(D * D, nmono);
  double worst = 0.0;
  for (FockIndex I = 0; I < static_cast<FockIndex>(1 << n); ++I)
    for (FockIndex J = 0; J < static_cast<FockIndex>(1 << n); ++J) {
      const int k = static_cast<int>(I) * (1 << n) + static_cast<int>(J);
      const Matrix mp = md.J.conjugate_op(rep.monomial(I, J).to_dense());
      const Matrix v = mp.mul(st_dense);
      std::vector<cplx> vv(static_cast<std::size_t>(D) * D);
      for (int j = 0; j < D; ++j)
        for (int i = 0; i < D; ++i) vv[static_cast<std::size_t>(j) * D + i] = v(i, j);
      // Distance from the solver space (E.basis has orthonormal columns).
      std::vector<cplx> resid = vv;
      for (int c = 0; c < E.basis.cols(); ++c) {
        cplx coef = kernels::dotc(vv.size(), E.basis.col(c), vv.data());
        kernels::axpy(vv.size(), -coef, E.basis.col(c), resid.data());
      }
      const double nv = vnorm(vv);
      if (nv > 1e-14) worst = std::max(worst, vnorm(resid) / nv);
      for (std::size_t i = 0; i < vv.size(); ++i) V(static_cast<int>(i), k) = vv[i];
    }
  rep_out.containment_residual = worst;
  rep_out.dim_comm_span = lapack::rank(V, rtol);
  rep_out.equality = (rep_out.dim_comm_span == rep_out.dim_E_flow);

  // Mirror relation: { m S_t } lies in E^{alpha'_t}.
  IntertwinerSpace Ep = commutant_intertwiner_space(rep, model, t, rtol, E);
  double worst23 = 0.0;
  for (FockIndex I = 0; I < static_cast<FockIndex>(1 << n); ++I)
    for (FockIndex J = 0; J < static_cast<FockIndex>(1 << n); ++J) {
      const auto v = rep.monomial(I, J).mul(st).vec();
      std::vector<cplx> resid = v;
      for (int c = 0; c < Ep.basis.cols(); ++c) {
        cplx coef = kernels::dotc(v.size(), Ep.basis.col(c), v.data());
        kernels::axpy(v.size(), -coef, Ep.basis.col(c), resid.data());
      }
      const double nv = vnorm(v);
      if (nv > 1e-14) worst23 = std::max(worst23, vnorm(resid) / nv);
    }
  rep_out.eq23_residual = worst23;
  return rep_out;
}

ProductStructureReport product_structure_check(const QuasiFreeRep& rep, const ShiftModel& model,
                                               int s, int t, double rtol) {
  if (s + t >= model.L) throw std::invalid_argument("product_structure_check: s + t must leave a nonempty small lattice");
  ProductStructureReport out;
  SuperProductSpace Hs = super_product_space(rep, model, s, rtol);
  SuperProductSpace Ht = super_product_space(rep, model, t, rtol);
  SuperProductSpace Hst = super_product_space(rep, model, s + t, rtol);

  const Matrix& HB = Hst.H.basis;
  for (int i = 0; i < Hs.H.dim(); ++i) {
    const Matrix Ti = Hs.H.element(i);
    for (int j = 0; j < Ht.H.dim(); ++j) {
      const Matrix prod = Ti.mul(Ht.H.element(j));
      std::vector<cplx> v(static_cast<std::size_t>(prod.rows()) * prod.cols());
      for (int c = 0; c < prod.cols(); ++c)
        for (int r = 0; r < prod.rows(); ++r) v[static_cast<std::size_t>(c) * prod.rows() + r] = prod(r, c);
      const double nv = vnorm(v);
      if (nv < 1e-14) continue;
      std::vector<cplx> resid = v;
      for (int c = 0; c < HB.cols(); ++c) {
        cplx coef = kernels::dotc(v.size(), HB.col(c), v.data());
        kernels::axpy(v.size(), -coef, HB.col(c), resid.data());
      }
      out.projection_residual = std::max(out.projection_residual, vnorm(resid) / nv);
    }
  }

  // Gram defect of the product map on canonical intertwiners:
  // <T_a S_b, T_c S_d> vs <T_a, T_c> <S_b, S_d> (normalized by dim factors).
  const FockIndex past_s = model.past_mask(s);
  const FockIndex past_t = model.past_mask(t);
  std::vector<std::pair<FockIndex, FockIndex>> fam_s, fam_t;
  for (FockIndex i1 = 0; i1 <= past_s; ++i1)
    for (FockIndex i2 = 0; i2 <= past_s; ++i2)
      if ((popcount(i1) + popcount(i2)) % 2 == 0) fam_s.emplace_back(i1, i2);
  for (FockIndex i1 = 0; i1 <= past_t; ++i1)
    for (FockIndex i2 = 0; i2 <= past_t; ++i2)
      if ((popcount(i1) + popcount(i2)) % 2 == 0) fam_t.emplace_back(i1, i2);
  for (const auto& [a1, a2] : fam_s)
    for (const auto& [b1, b2] : fam_t)
      for (const auto& [c1, c2] : fam_s)
        for (const auto& [d1, d2] : fam_t) {
          const SparseOp Ts = canonical_intertwiner(model, s, a1, a2);
          const SparseOp St = canonical_intertwiner(model, t, b1, b2);
          const SparseOp Tc = canonical_intertwiner(model, s, c1, c2);
          const SparseOp Sd = canonical_intertwiner(model, t, d1, d2);
          const cplx lhs = sparse_frob_dot(Ts.mul(St), Tc.mul(Sd));
          const cplx rhs_s = sparse_frob_dot(Ts, Tc);
          const cplx rhs_t = sparse_frob_dot(St, Sd);
          // Normalize by the HS norm scale: each canonical T has squared norm
          // 4^{small(t)}.
          const double ns2 = std::pow(4.0, model.small_modes(s));
          const double nt2 = std::pow(4.0, model.small_modes(t));
          const double nst2 = std::pow(4.0, model.small_modes(s + t));
          out.gram_defect = std::max(out.gram_defect,
                                     std::abs(lhs / nst2 - (rhs_s / ns2) * (rhs_t / nt2)));
        }

  // P T* T' P = c P on the initial space, canonical family at level t.
  const SparseOp P = initial_projection(model, t);
  const double trP = std::pow(2.0, 2 * model.small_modes(t));
  for (const auto& [a1, a2] : fam_t)
    for (const auto& [c1, c2] : fam_t) {
      const SparseOp Ta = canonical_intertwiner(model, t, a1, a2);
      const SparseOp Tc = canonical_intertwiner(model, t, c1, c2);
      const SparseOp M = P.mul(Ta.adjoint().mul(Tc)).mul(P);
      const cplx c = sparse_frob_dot(P, M) / trP;
      out.scalar_residual = std::max(out.scalar_residual, M.add(P, -c).max_abs());
    }
  return out;
}

CanonicalFamilyReport canonical_family_check(const QuasiFreeRep& rep, const ShiftModel& model,
                                             int t, const IntertwinerSpace* H) {
  CanonicalFamilyReport out;
  const FockIndex past = model.past_mask(t);
  std::vector<std::pair<FockIndex, FockIndex>> family;
  for (FockIndex i1 = 0; i1 <= past; ++i1)
    for (FockIndex i2 = 0; i2 <= past; ++i2)
      if ((popcount(i1) + popcount(i2)) % 2 == 0) family.emplace_back(i1, i2);
  out.count = static_cast<int>(family.size());

  const auto flow_pairs = side_pairs(rep, model, t, Side::flow);
  const auto comm_pairs = side_pairs(rep, model, t, Side::commutant_flow);
  const AntiLinearMap Jc = closed_form_J(rep.cov());
  const SparseOp P = initial_projection(model, t);
  const SparseOp St = flow_isometry(model, t);

  out.isometry_residual = canonical_intertwiner(model, t, 0, 0).add(St, -1.0).max_abs();

  std::vector<SparseOp> ops;
  ops.reserve(family.size());
  for (const auto& [i1, i2] : family) ops.push_back(canonical_intertwiner(model, t, i1, i2));

  for (std::size_t k = 0; k < family.size(); ++k) {
    const SparseOp& T = ops[k];
    for (const auto& [L, R] : flow_pairs)
      out.intertwining_residual = std::max(out.intertwining_residual, L.mul(T).add(T.mul(R), -1.0).max_abs());
    for (const auto& [L, R] : comm_pairs)
      out.comm_intertwining_residual =
          std::max(out.comm_intertwining_residual, L.mul(T).add(T.mul(R), -1.0).max_abs());

    // J T_{I1 I2} J = T_{I2 I1}.
    const Matrix jtj = Jc.conjugate_op(T.to_dense());
    const Matrix swapped = canonical_intertwiner(model, t, family[k].second, family[k].first).to_dense();
    out.conjugation_residual = std::max(out.conjugation_residual, (jtj - swapped).max_abs());

    // T_I* T_K = delta_{IK} P.
    for (std::size_t m = 0; m < family.size(); ++m) {
      SparseOp prod = T.adjoint().mul(ops[m]);
      if (m == k) prod = prod.add(P, -1.0);
      out.orthogonality_residual = std::max(out.orthogonality_residual, prod.max_abs());
    }

    if (H != nullptr && H->basis.cols() > 0) {
      std::vector<cplx> v = T.vec();
      const double nv = vnorm(v);
      std::vector<cplx> resid = v;
      for (int c = 0; c < H->basis.cols(); ++c) {
        const cplx coef = kernels::dotc(v.size(), H->basis.col(c), v.data());
        kernels::axpy(v.size(), -coef, H->basis.col(c), resid.data());
      }
      if (nv > 1e-14)
        out.membership_residual = std::max(out.membership_residual, vnorm(resid) / nv);
    }
  }
  return out;
}

}  // namespace carlab
