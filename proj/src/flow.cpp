// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT

#include "carlab/flow.hpp"

#include <cmath>
#include <stdexcept>

#include "carlab/lapack.hpp"

namespace carlab {

Covariance ShiftModel::covariance(const std::vector<double>& channel_lambdas) const {
  if (static_cast<int>(channel_lambdas.size()) != d)
    throw std::invalid_argument("covariance: need one lambda per channel");
  Covariance cov;
  cov.n = n();
  cov.lambdas.resize(n());
  for (int p = 1; p <= L; ++p)
    for (int k = 1; k <= d; ++k) cov.lambdas[mode(p, k) - 1] = channel_lambdas[k - 1];
  return cov;
}

Matrix shift_isometry(const ShiftModel& model, int t) {
  Matrix s(model.n(), model.n());
  for (int p = 1; p + t <= model.L; ++p)
    for (int k = 1; k <= model.d; ++k) s(model.mode(p + t, k) - 1, model.mode(p, k) - 1) = 1.0;
  return s;
}

SparseOp flow_isometry(const ShiftModel& model, int t) {
  ModeSpace leg{model.n()};
  const SparseOp lam = second_quantize(leg, shift_isometry(model, t));
  return kron(lam, lam);
}

SparseOp initial_projection(const ShiftModel& model, int t) {
  const SparseOp st = flow_isometry(model, t);
  return st.adjoint().mul(st);
}

AlphaResult alpha_endomorphism(const QuasiFreeRep& rep, const ShiftModel& model, int t,
                               const SparseOp& x, double membership_tol) {
  if (model.n() != rep.n()) throw std::invalid_argument("alpha: lattice/rep size mismatch");
  const int ns = model.small_modes(t);
  const int nmono = 1 << (2 * ns);
  const int D = rep.dim();
  // Least-squares expansion of x over the small-lattice monomial basis.
  Matrix cols(D * D, nmono);
  std::vector<SparseOp> monos(nmono, SparseOp{});
  for (FockIndex I = 0; I < static_cast<FockIndex>(1 << ns); ++I)
    for (FockIndex J = 0; J < static_cast<FockIndex>(1 << ns); ++J) {
      const int k = static_cast<int>(I) * (1 << ns) + static_cast<int>(J);
      monos[k] = rep.monomial(I, J);
      const auto v = monos[k].vec();
      for (std::size_t i = 0; i < v.size(); ++i) cols(static_cast<int>(i), k) = v[i];
    }
  auto [c, residual] = lapack::lstsq(cols, x.vec());
  const double scale = std::max(1.0, x.frobenius_norm());
  if (residual / scale > membership_tol)
    throw std::invalid_argument("alpha: operator is not in the small-lattice algebra");
  // Rebuild with shifted masks.
  SparseOp img(D, D);
  for (FockIndex I = 0; I < static_cast<FockIndex>(1 << ns); ++I)
    for (FockIndex J = 0; J < static_cast<FockIndex>(1 << ns); ++J) {
      const int k = static_cast<int>(I) * (1 << ns) + static_cast<int>(J);
      if (std::abs(c[k]) < 1e-300) continue;
      img = img.add(rep.monomial(model.shift_mask(I, t), model.shift_mask(J, t)).scale(c[k]));
    }
  return {std::move(img), residual / scale};
}

PairedExpansion paired_monomial_expand(const QuasiFreeRep& rep, FockIndex Lset) {
  // a_R(h_L): annihilators ascending; a*_R(h_Ltilde): creators descending
  // (the reversed word).
  SparseOp op = SparseOp::identity(rep.dim());
  const auto modes = mask_modes(Lset);
  for (int m : modes) op = op.mul(rep.a(m));
  for (auto it = modes.rbegin(); it != modes.rend(); ++it) op = op.mul(rep.a_dag(*it));
  const auto v = op.apply(rep.vacuum());

  PairedExpansion out;
  const int ld = rep.leg_dim();
  std::vector<cplx> reconstructed(v.size(), cplx{0.0, 0.0});
  for (FockIndex L1 = 0; L1 <= Lset; ++L1) {
    if ((L1 & Lset) != L1) continue;
    // w_{L1} = A h_{L1} (x) B h_{L1} = prod sqrt((1-l) l) * (h_{L1} (x) h_{L1}).
    double w = 1.0;
    for (int m : mask_modes(L1)) w *= std::sqrt((1.0 - rep.cov().lambdas[m - 1]) * rep.cov().lambdas[m - 1]);
    const std::size_t idx = static_cast<std::size_t>(L1) * ld + L1;
    const cplx coeff = v[idx] / w;
    out.coefficients[L1] = coeff;
    reconstructed[idx] += coeff * w;
  }
  for (std::size_t i = 0; i < v.size(); ++i) reconstructed[i] -= v[i];
  out.residual = vnorm(reconstructed);
  return out;
}

}  // namespace carlab
