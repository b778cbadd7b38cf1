// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT

#include "carlab/obstruction.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "carlab/lapack.hpp"

namespace carlab {

ABOperators ab_operators(const QuasiFreeRep& rep, int l, bool literal_swap) {
  const double lam = rep.cov().lambdas[l - 1];
  const double inv_sl = 1.0 / std::sqrt(lam);
  const double inv_sm = 1.0 / std::sqrt(1.0 - lam);
  const SparseOp& g2 = rep.gamma2();
  ABOperators ops{
      rep.a(l).scale(inv_sl),
      g2.mul(rep.b(l)).scale(inv_sm),
      rep.a_dag(l).scale(inv_sm),
      rep.b_dag(l).mul(g2).scale(inv_sl),
  };
  if (literal_swap) {
    // The a <-> a* swapped variant (creator and annihilator exchanged in the
    // first member of each pair, prefactors kept): its pair equalities fail
    // on the vacuum, which the tests demonstrate.
    ops.A1 = rep.a_dag(l).scale(inv_sl);
    ops.B1 = rep.a(l).scale(inv_sm);
  }
  return ops;
}

VacuumBuckets decompose_vacuum_vector(const QuasiFreeRep& rep, const ShiftModel& model, int t,
                                      int l, const std::vector<cplx>& v, double tol) {
  if (l <= model.past_modes(t) || l > model.n())
    throw std::invalid_argument("decompose_vacuum_vector: l must be a future mode");
  const int ld = rep.leg_dim();
  const FockIndex lbit = FockIndex{1} << (l - 1);
  const FockIndex future = ((FockIndex{1} << model.n()) - 1) & ~model.past_mask(t);

  VacuumBuckets out;
  const std::size_t dim = v.size();
  out.p00.assign(dim, {});
  out.p11.assign(dim, {});
  out.u00.assign(dim, {});
  out.u10.assign(dim, {});
  out.u01.assign(dim, {});
  out.u11.assign(dim, {});

  // Group coefficients by reduced key (masks with l removed on both legs).
  struct Sectors {
    cplx c[4] = {};         // folded coefficients, index = (l in left) + 2*(l in right)
    std::size_t idx[4];     // original coordinate indices
    bool present[4] = {};
  };
  std::map<std::pair<FockIndex, FockIndex>, Sectors> keys;
  for (std::size_t i = 0; i < dim; ++i) {
    if (std::abs(v[i]) <= tol) continue;
    const FockIndex P = static_cast<FockIndex>(i / ld);
    const FockIndex Q = static_cast<FockIndex>(i % ld);
    const int sector = ((P & lbit) ? 1 : 0) + ((Q & lbit) ? 2 : 0);
    // Fold the f_l-to-front sign: crossings with future modes below l, per leg.
    int sign = 1;
    if (P & lbit && popcount(P & future & (lbit - 1)) % 2) sign = -sign;
    if (Q & lbit && popcount(Q & future & (lbit - 1)) % 2) sign = -sign;
    auto& s = keys[{P & ~lbit, Q & ~lbit}];
    s.c[sector] = v[i] * static_cast<double>(sign);
    s.idx[sector] = i;
    s.present[sector] = true;
  }

  for (const auto& [key, s] : keys) {
    const bool paired = s.present[0] && s.present[3];
    if (paired) {
      out.p00[s.idx[0]] = v[s.idx[0]];
      out.p11[s.idx[3]] = v[s.idx[3]];
      VacuumBuckets::Pair pr;
      pr.key_left = key.first;
      pr.key_right = key.second;
      pr.c00 = s.c[0];
      pr.c11 = s.c[3];
      pr.sigma_left = (popcount(key.first) % 2) ? -1 : 1;
      pr.sigma_right = (popcount(key.second) % 2) ? -1 : 1;
      out.pairs.push_back(pr);
    } else {
      if (s.present[0]) out.u00[s.idx[0]] = v[s.idx[0]];
      if (s.present[3]) out.u11[s.idx[3]] = v[s.idx[3]];
    }
    if (s.present[1]) out.u10[s.idx[1]] = v[s.idx[1]];
    if (s.present[2]) out.u01[s.idx[2]] = v[s.idx[2]];
  }
  return out;
}

bool CoefficientCheck::pass(double tol) const {
  return ab_residual <= tol && u10_norm <= tol && u01_norm <= tol && u11_norm <= tol &&
         pair_sigma_violation <= tol;
}

CoefficientCheck coefficient_equations_check(const QuasiFreeRep& rep, const ShiftModel& model,
                                             int t, int l, const std::vector<cplx>& v,
                                             double tol) {
  CoefficientCheck out;
  const ABOperators ab = ab_operators(rep, l);
  auto diff_norm = [&](const SparseOp& x, const SparseOp& y) {
    auto xv = x.apply(v);
    auto yv = y.apply(v);
    for (std::size_t i = 0; i < xv.size(); ++i) xv[i] -= yv[i];
    return vnorm(xv);
  };
  out.ab_residual = std::max(diff_norm(ab.A1, ab.A2), diff_norm(ab.B1, ab.B2));

  const VacuumBuckets buckets = decompose_vacuum_vector(rep, model, t, l, v, tol * 1e-2);
  out.u10_norm = vnorm(buckets.u10);
  out.u01_norm = vnorm(buckets.u01);
  out.u11_norm = vnorm(buckets.u11);
  for (const auto& pr : buckets.pairs) {
    if (pr.sigma_left == pr.sigma_right) {
      const double weight = std::min(std::abs(pr.c00), std::abs(pr.c11));
      out.pair_sigma_violation = std::max(out.pair_sigma_violation, weight);
    }
  }
  return out;
}

SparseOp RelativeCommutantSpan::op(const QuasiFreeRep& rep, int k, bool even) const {
  const Matrix& C = even ? coeffs_even : coeffs;
  const int n = rep.n();
  SparseOp T(rep.dim(), rep.dim());
  for (FockIndex I = 0; I < static_cast<FockIndex>(1 << n); ++I)
    for (FockIndex J = 0; J < static_cast<FockIndex>(1 << n); ++J) {
      const int row = static_cast<int>(I) * (1 << n) + static_cast<int>(J);
      const cplx c = C(row, k);
      if (std::abs(c) < 1e-14) continue;
      T = T.add(rep.monomial(I, J).scale(c));
    }
  return T;
}

RelativeCommutantSpan relative_commutant_vacuum_span(const QuasiFreeRep& rep,
                                                     const ShiftModel& model, int t,
                                                     double rtol) {
  const int n = rep.n();
  const int nmono = 1 << (2 * n);
  const int shift = t * model.d;

  // Image generators of the small algebra under alpha_t.
  std::vector<SparseOp> gens;
  for (int m = 1; m <= model.small_modes(t); ++m) {
    gens.push_back(rep.a(m + shift));
    gens.push_back(rep.a_dag(m + shift));
  }

  // Gram of the commutators [g, m_IJ] in the monomial parametrization.
  std::vector<std::vector<SparseOp>> comms(gens.size());
  std::vector<SparseOp> monos(nmono);
  for (FockIndex I = 0; I < static_cast<FockIndex>(1 << n); ++I)
    for (FockIndex J = 0; J < static_cast<FockIndex>(1 << n); ++J) {
      const int k = static_cast<int>(I) * (1 << n) + static_cast<int>(J);
      monos[k] = rep.monomial(I, J);
    }
  Matrix gram(nmono, nmono);
  for (std::size_t g = 0; g < gens.size(); ++g) {
    comms[g].resize(nmono);
    for (int k = 0; k < nmono; ++k) comms[g][k] = commutator(gens[g], monos[k]);
    for (int k1 = 0; k1 < nmono; ++k1)
      for (int k2 = k1; k2 < nmono; ++k2) {
        const cplx val = sparse_frob_dot(comms[g][k1], comms[g][k2]);
        gram(k1, k2) += val;
        if (k2 != k1) gram(k2, k1) += std::conj(val);
      }
  }

  auto null_coeffs = [&](const std::vector<int>& cols) {
    Matrix sub(static_cast<int>(cols.size()), static_cast<int>(cols.size()));
    for (std::size_t a = 0; a < cols.size(); ++a)
      for (std::size_t b = 0; b < cols.size(); ++b) sub(static_cast<int>(a), static_cast<int>(b)) = gram(cols[a], cols[b]);
    lapack::EigResult eig = lapack::hermitian_eig(sub);
    const double emax = eig.values.empty() ? 0.0 : eig.values.back();
    const double floor = std::max(emax * rtol * rtol, emax * 1e-13);
    int nullc = 0;
    while (nullc < static_cast<int>(eig.values.size()) && eig.values[nullc] <= floor) ++nullc;
    Matrix C(1 << (2 * n), nullc);
    for (int j = 0; j < nullc; ++j)
      for (std::size_t a = 0; a < cols.size(); ++a) C(cols[a], j) = eig.vectors(static_cast<int>(a), j);
    return C;
  };

  std::vector<int> all_cols(nmono), even_cols;
  for (int k = 0; k < nmono; ++k) {
    all_cols[k] = k;
    const FockIndex I = static_cast<FockIndex>(k) >> n;
    const FockIndex J = static_cast<FockIndex>(k) & ((FockIndex{1} << n) - 1);
    if ((popcount(I) + popcount(J)) % 2 == 0) even_cols.push_back(k);
  }

  RelativeCommutantSpan out;
  out.coeffs = null_coeffs(all_cols);
  out.coeffs_even = null_coeffs(even_cols);
  out.dim_ops = out.coeffs.cols();
  out.dim_ops_even = out.coeffs_even.cols();

  // Vacuum spans: T_c OmOm = [m_IJ OmOm] * c.
  const int D = rep.dim();
  Matrix mono_vac(D, nmono);
  for (int k = 0; k < nmono; ++k) {
    const auto mv = monos[k].apply(rep.vacuum());
    for (int i = 0; i < D; ++i) mono_vac(i, k) = mv[i];
  }
  out.span = lapack::column_space(mono_vac.mul(out.coeffs), rtol);
  out.span_even = lapack::column_space(mono_vac.mul(out.coeffs_even), rtol);
  return out;
}

ConfinementReport parity_confinement_check(const QuasiFreeRep& rep, const ShiftModel& model, int t,
                                           const RelativeCommutantSpan& span, double rtol) {
  ConfinementReport out;
  const int ld = rep.leg_dim();
  const FockIndex past = model.past_mask(t);
  out.dim_even = span.span_even.cols();
  out.dim_ungraded = span.span.cols();
  // Confined target: e_{I1} (x) e_{I2}, past-only masks of equal parity.
  int confined = 0;
  for (FockIndex i1 = 0; i1 <= past; ++i1)
    for (FockIndex i2 = 0; i2 <= past; ++i2)
      if ((popcount(i1) + popcount(i2)) % 2 == 0) ++confined;
  out.confined_dim = confined;

  auto analyze = [&](const Matrix& S, double& residual, double& parity_violation) {
    for (int c = 0; c < S.cols(); ++c) {
      double outside = 0.0;
      for (int i = 0; i < S.rows(); ++i) {
        const cplx z = S(i, c);
        if (std::abs(z) < 1e-300) continue;
        const FockIndex P = static_cast<FockIndex>(i / ld);
        const FockIndex Q = static_cast<FockIndex>(i % ld);
        const bool past_only = !(P & ~past) && !(Q & ~past);
        const bool equal_parity = (popcount(P) + popcount(Q)) % 2 == 0;
        if (!past_only || !equal_parity) outside += std::norm(z);
        const bool future_support = (P & ~past) || (Q & ~past);
        if (future_support && (popcount(P) % 2) != (popcount(Q) % 2))
          parity_violation = std::max(parity_violation, std::abs(z));
      }
      residual = std::max(residual, std::sqrt(outside));
    }
  };
  analyze(span.span_even, out.residual_even, out.parity_violation_even);
  analyze(span.span, out.residual_ungraded, out.parity_violation_ungraded);
  (void)rtol;
  return out;
}

ExtendabilityReport extendability_criterion(const QuasiFreeRep& rep, const ShiftModel& model,
                                            int t, double rtol, double tol) {
  ExtendabilityReport out;
  const RelativeCommutantSpan rc = relative_commutant_vacuum_span(rep, model, t, rtol);
  const int D = rep.dim();
  const int ns = model.small_modes(t);
  const int nsmall_mono = 1 << (2 * ns);

  auto build_span = [&](bool even, int count) {
    Matrix vecs(D, count * nsmall_mono);
    int col = 0;
    for (int k = 0; k < count; ++k) {
      const SparseOp y = rc.op(rep, k, even);
      for (FockIndex I = 0; I < static_cast<FockIndex>(1 << ns); ++I)
        for (FockIndex J = 0; J < static_cast<FockIndex>(1 << ns); ++J) {
          const SparseOp shifted = rep.monomial(model.shift_mask(I, t), model.shift_mask(J, t));
          const auto v = y.apply(shifted.apply(rep.vacuum()));
          for (int i = 0; i < D; ++i) vecs(i, col) = v[i];
          ++col;
        }
    }
    return lapack::column_space(vecs, rtol);
  };

  const Matrix Q_even = build_span(true, rc.dim_ops_even);
  const Matrix Q_all = build_span(false, rc.dim_ops);
  out.span_dim_even = Q_even.cols();
  out.span_dim_ungraded = Q_all.cols();

  const int ld = rep.leg_dim();
  for (int g = 1; g <= model.past_modes(t); ++g) {
    std::vector<cplx> target(D, cplx{0.0, 0.0});
    target[static_cast<std::size_t>(FockIndex{1} << (g - 1)) * ld] = 1.0;  // e_g (x) Omega
    double ov_even = 0.0, ov_all = 0.0;
    for (int c = 0; c < Q_even.cols(); ++c)
      ov_even = std::hypot(ov_even, std::abs(kernels::dotc(target.size(), Q_even.col(c), target.data())));
    for (int c = 0; c < Q_all.cols(); ++c)
      ov_all = std::hypot(ov_all, std::abs(kernels::dotc(target.size(), Q_all.col(c), target.data())));
    out.max_overlap_even = std::max(out.max_overlap_even, ov_even);
    out.max_overlap_ungraded = std::max(out.max_overlap_ungraded, ov_all);
  }
  out.obstruction_present = out.max_overlap_even <= tol;
  return out;
}

HalfLambdaReport half_lambda_vacuousness(const QuasiFreeRep& rep, const ShiftModel& model,
                                         int t, int l) {
  if (l <= model.past_modes(t) || l > model.n())
    throw std::invalid_argument("half_lambda_vacuousness: l must be a future mode");
  HalfLambdaReport out;
  const double lam = rep.cov().lambdas[l - 1];
  out.margin = std::abs(std::sqrt(lam / (1.0 - lam)) - std::sqrt((1.0 - lam) / lam));

  const ABOperators ab = ab_operators(rep, l);
  const Matrix dA = ab.A1.add(ab.A2, -1.0).to_dense();
  const Matrix dB = ab.B1.add(ab.B2, -1.0).to_dense();

  const int ld = rep.leg_dim();
  const int D = rep.dim();
  const FockIndex lbit = FockIndex{1} << (l - 1);

  // Doubled coordinates with the requested l-sector and total leg parity.
  auto coords = [&](bool in_left, bool in_right, int parity) {
    std::vector<int> out_ix;
    for (int i = 0; i < D; ++i) {
      const FockIndex P = static_cast<FockIndex>(i / ld);
      const FockIndex Q = static_cast<FockIndex>(i % ld);
      if (static_cast<bool>(P & lbit) != in_left) continue;
      if (static_cast<bool>(Q & lbit) != in_right) continue;
      if ((popcount(P) + popcount(Q)) % 2 != parity) continue;
      out_ix.push_back(i);
    }
    return out_ix;
  };

  // Smallest singular value of the stacked row/column restrictions.
  auto sigma_min = [&](const std::vector<std::pair<const Matrix*, std::vector<int>>>& row_sets,
                       const std::vector<int>& cols) {
    if (cols.empty()) return 0.0;
    int rows = 0;
    for (const auto& [m, rs] : row_sets) rows += static_cast<int>(rs.size());
    if (rows == 0) return 0.0;
    Matrix block(rows, static_cast<int>(cols.size()));
    int off = 0;
    for (const auto& [m, rs] : row_sets) {
      for (std::size_t i = 0; i < rs.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
          block(off + static_cast<int>(i), static_cast<int>(j)) = (*m)(rs[i], cols[j]);
      off += static_cast<int>(rs.size());
    }
    const auto svd = lapack::svd_econ(block);
    return svd.s.empty() ? 0.0 : svd.s.back();
  };

  // The margin-controlled blocks: each singleton bucket's odd-parity part,
  // mapped into the even-parity part of its target sector.  These carry
  // exactly the (1 - 2 lambda)-type multiplier mismatch.
  out.sigma_min_u10 = sigma_min({{&dA, coords(false, false, 0)}}, coords(true, false, 1));
  out.sigma_min_u01 = sigma_min({{&dB, coords(false, false, 0)}}, coords(false, true, 1));
  out.sigma_min_u11 = sigma_min({{&dA, coords(false, true, 0)}, {&dB, coords(true, false, 0)}},
                                coords(true, true, 1));
  // Control: the parity-sum-forced blocks never degenerate.
  out.sigma_min_even_u10 = sigma_min({{&dA, coords(false, false, 1)}}, coords(true, false, 0));
  return out;
}

}  // namespace carlab
