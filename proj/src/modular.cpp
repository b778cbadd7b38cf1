// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT

#include "carlab/modular.hpp"

#include <cmath>
#include <stdexcept>

#include "carlab/lapack.hpp"

namespace carlab {

namespace {

int tau_sign(int k) { return ((k * (k - 1) / 2) % 2) ? -1 : 1; }  // reversal sign of a k-wedge

}  // namespace

ModularData tomita_from_gns(const QuasiFreeRep& rep, double rtol) {
  const int D = rep.dim();
  const int n = rep.n();
  const int nmono = 1 << (2 * n);  // 4^n
  if (nmono != D) throw std::logic_error("monomial count != doubled dimension");

  Matrix G(D, nmono), Gstar(D, nmono);
  for (FockIndex I = 0; I < static_cast<FockIndex>(1 << n); ++I) {
    for (FockIndex J = 0; J < static_cast<FockIndex>(1 << n); ++J) {
      const int k = static_cast<int>(I) * (1 << n) + static_cast<int>(J);
      const SparseOp m = rep.monomial(I, J);
      const auto v = m.apply(rep.vacuum());
      const auto vs = m.adjoint().apply(rep.vacuum());
      for (int i = 0; i < D; ++i) {
        G(i, k) = v[i];
        Gstar(i, k) = vs[i];
      }
    }
  }
  // S (m Omega) = m* Omega and S v = M_S conj(v)  =>  M_S conj(G) = G*.
  // Solve the transposed square system conj(G)^T M_S^T = G*^T.  Cyclicity is
  // validated by the solve residual (cheaper than a rank SVD at this size);
  // separation by positivity of Delta below.
  Matrix mst;
  try {
    mst = lapack::solve(G.conj().transpose(), Gstar.transpose());
  } catch (const std::exception&) {
    throw std::runtime_error("tomita_from_gns: vacuum is not cyclic for M_R");
  }
  ModularData md;
  md.S.M = mst.transpose();
  const double resid = (md.S.M.mul(G.conj()) - Gstar).frobenius_norm();
  if (resid > std::max(rtol, 1e-8) * Gstar.frobenius_norm() * 100.0)
    throw std::runtime_error("tomita_from_gns: vacuum is not cyclic for M_R");
  md.F.M = md.S.M.transpose();  // antilinear adjoint: M_{S*} = M_S^T
  md.Delta = md.F.compose_linear(md.S);

  // Delta^{-1/2} via Hermitian eigendecomposition; J = S Delta^{-1/2}.
  lapack::EigResult eig = lapack::hermitian_eig(md.Delta);
  for (double v : eig.values)
    if (v <= 0.0) throw std::runtime_error("tomita_from_gns: Delta not positive");
  Matrix isqrt(md.Delta.rows(), md.Delta.cols());
  for (int j = 0; j < md.Delta.cols(); ++j)
    for (int i = 0; i < md.Delta.rows(); ++i) {
      cplx s{0.0, 0.0};
      for (int k = 0; k < md.Delta.rows(); ++k)
        s += eig.vectors(i, k) * (1.0 / std::sqrt(eig.values[k])) * std::conj(eig.vectors(j, k));
      isqrt(i, j) = s;
    }
  // S = J Delta^{1/2}  =>  M_J = M_S conj(Delta^{-1/2}).
  md.J.M = md.S.M.mul(isqrt.conj());
  return md;
}

namespace {

AntiLinearMap closed_form_weighted_swap(const Covariance& cov, bool s_form) {
  const int ld = 1 << cov.n;
  Matrix M(ld * ld, ld * ld);
  for (FockIndex P = 0; P < static_cast<FockIndex>(ld); ++P) {
    for (FockIndex Q = 0; Q < static_cast<FockIndex>(ld); ++Q) {
      double w = 1.0;
      for (int i : mask_modes(P)) {
        const double r = cov.lambdas[i - 1] / (1.0 - cov.lambdas[i - 1]);
        w *= std::sqrt(s_form ? r : 1.0 / r);
      }
      for (int j : mask_modes(Q)) {
        const double r = (1.0 - cov.lambdas[j - 1]) / cov.lambdas[j - 1];
        w *= std::sqrt(s_form ? r : 1.0 / r);
      }
      w *= tau_sign(popcount(P)) * tau_sign(popcount(Q));
      const int col = static_cast<int>(P) * ld + static_cast<int>(Q);
      const int row = static_cast<int>(Q) * ld + static_cast<int>(P);
      M(row, col) = w;
    }
  }
  return AntiLinearMap{std::move(M)};
}

}  // namespace

AntiLinearMap closed_form_S(const Covariance& cov) { return closed_form_weighted_swap(cov, true); }
AntiLinearMap closed_form_F(const Covariance& cov) { return closed_form_weighted_swap(cov, false); }

AntiLinearMap closed_form_J(const Covariance& cov) {
  const int ld = 1 << cov.n;
  Matrix M(ld * ld, ld * ld);
  for (FockIndex P = 0; P < static_cast<FockIndex>(ld); ++P) {
    for (FockIndex Q = 0; Q < static_cast<FockIndex>(ld); ++Q) {
      const int nI = popcount(P & ~Q), nJ = popcount(Q & ~P), nL = popcount(P & Q);
      int sign = tau_sign(nI) * tau_sign(nJ);
      if ((nL * (nI + nJ)) % 2) sign = -sign;
      const int col = static_cast<int>(P) * ld + static_cast<int>(Q);
      const int row = static_cast<int>(Q) * ld + static_cast<int>(P);
      M(row, col) = sign;
    }
  }
  return AntiLinearMap{std::move(M)};
}

double delta_eigenvalue(const Covariance& cov, FockIndex P, FockIndex Q) {
  double w = 1.0;
  for (int i : mask_modes(P)) w *= cov.lambdas[i - 1] / (1.0 - cov.lambdas[i - 1]);
  for (int j : mask_modes(Q)) w *= (1.0 - cov.lambdas[j - 1]) / cov.lambdas[j - 1];
  return w;
}

Matrix closed_form_Delta(const Covariance& cov) {
  const int ld = 1 << cov.n;
  Matrix M(ld * ld, ld * ld);
  for (FockIndex P = 0; P < static_cast<FockIndex>(ld); ++P)
    for (FockIndex Q = 0; Q < static_cast<FockIndex>(ld); ++Q) {
      const int idx = static_cast<int>(P) * ld + static_cast<int>(Q);
      M(idx, idx) = delta_eigenvalue(cov, P, Q);
    }
  return M;
}

double ConjugationResiduals::max() const {
  return std::max(std::max(j_a_vs_bdag_gamma, j_adag_vs_gamma_b), std::max(j_gamma2, commutation));
}

ConjugationResiduals verify_commutant_conjugation(const QuasiFreeRep& rep, const ModularData& md) {
  ConjugationResiduals r;
  const Matrix g2 = rep.gamma2().to_dense();
  std::vector<Matrix> jxj_list;
  for (int m = 1; m <= rep.n(); ++m) {
    const Matrix JaJ = md.J.conjugate_op(rep.a(m).to_dense());
    const Matrix JadJ = md.J.conjugate_op(rep.a_dag(m).to_dense());
    const Matrix expected_a = rep.b_dag(m).to_dense().mul(g2);
    const Matrix expected_ad = g2.mul(rep.b(m).to_dense());
    r.j_a_vs_bdag_gamma = std::max(r.j_a_vs_bdag_gamma, (JaJ - expected_a).max_abs());
    r.j_adag_vs_gamma_b = std::max(r.j_adag_vs_gamma_b, (JadJ - expected_ad).max_abs());
    jxj_list.push_back(JaJ);
    jxj_list.push_back(JadJ);
  }
  r.j_gamma2 = (md.J.conjugate_op(g2) - g2).max_abs();
  for (const Matrix& jxj : jxj_list)
    for (int m = 1; m <= rep.n(); ++m) {
      const Matrix y = rep.a(m).to_dense();
      const Matrix yd = rep.a_dag(m).to_dense();
      r.commutation = std::max(r.commutation, (jxj.mul(y) - y.mul(jxj)).max_abs());
      r.commutation = std::max(r.commutation, (jxj.mul(yd) - yd.mul(jxj)).max_abs());
    }
  return r;
}

}  // namespace carlab
