// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT

#include "carlab/quasifree.hpp"

#include <cmath>
#include <stdexcept>

namespace carlab {

void Covariance::validate(double eps) const {
  if (static_cast<int>(lambdas.size()) != n) throw std::invalid_argument("covariance: size mismatch");
  for (double l : lambdas)
    if (!(l >= eps && l <= 1.0 - eps))
      throw std::invalid_argument("covariance: lambda outside [eps, 1-eps]");
}

bool Covariance::has_half(double tol) const {
  for (double l : lambdas)
    if (std::abs(l - 0.5) < tol) return true;
  return false;
}

std::vector<cplx> Covariance::apply_R(const std::vector<cplx>& f) const {
  std::vector<cplx> r(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) r[i] = lambdas[i] * f[i];
  return r;
}

std::vector<cplx> Covariance::apply_sqrt_R(const std::vector<cplx>& f) const {
  std::vector<cplx> r(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) r[i] = std::sqrt(lambdas[i]) * f[i];
  return r;
}

std::vector<cplx> Covariance::apply_sqrt_1mR(const std::vector<cplx>& f) const {
  std::vector<cplx> r(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) r[i] = std::sqrt(1.0 - lambdas[i]) * f[i];
  return r;
}

cplx math_inner(const std::vector<cplx>& u, const std::vector<cplx>& v) {
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * std::conj(v[i]);
  return s;
}

cplx quasifree_moment(const Covariance& cov, const std::vector<std::vector<cplx>>& fs,
                      const std::vector<std::vector<cplx>>& gs) {
  if (fs.size() != gs.size()) return cplx{0.0, 0.0};
  const int m = static_cast<int>(fs.size());
  Matrix M(m, m);
  for (int i = 0; i < m; ++i) {
    const std::vector<cplx> rg = cov.apply_R(gs[i]);
    for (int j = 0; j < m; ++j) M(i, j) = math_inner(rg, fs[m - 1 - j]);
  }
  return det(M);
}

QuasiFreeRep::QuasiFreeRep(Covariance cov) : cov_(std::move(cov)) {
  cov_.validate();
  leg_.n = cov_.n;
  const SparseOp gamma = parity_op(leg_);
  const SparseOp id = SparseOp::identity(leg_.dim());
  gamma2_ = kron(gamma, gamma);
  for (int m = 1; m <= cov_.n; ++m) {
    const double sl = std::sqrt(cov_.lambdas[m - 1]);
    const double sm = std::sqrt(1.0 - cov_.lambdas[m - 1]);
    const SparseOp ann = annihilate_mode(leg_, m);
    const SparseOp cre = create_mode(leg_, m);
    // a_R(h_m) = sqrt(1-l) a_m (x) Gamma + sqrt(l) 1 (x) a*_m
    a_.push_back(kron(ann, gamma).scale(sm).add(kron(id, cre).scale(sl)));
    a_dag_.push_back(a_.back().adjoint());
    // b_R(h_m) = sqrt(l) a_m (x) Gamma - sqrt(1-l) 1 (x) a*_m
    b_.push_back(kron(ann, gamma).scale(sl).add(kron(id, cre).scale(-sm)));
    b_dag_.push_back(b_.back().adjoint());
  }
  vacuum_.assign(dim(), cplx{0.0, 0.0});
  vacuum_[0] = cplx{1.0, 0.0};
}

SparseOp QuasiFreeRep::rep_annihilator(const std::vector<cplx>& f) const {
  const SparseOp gamma = parity_op(leg_);
  const SparseOp id = SparseOp::identity(leg_.dim());
  // The q in a*(q R^{1/2} f) cancels the adjoint's conjugation in the real
  // mode basis, leaving create_op(R^{1/2} f), C-linear in f.
  return kron(annihilate_op(leg_, cov_.apply_sqrt_1mR(f)), gamma)
      .add(kron(id, create_op(leg_, cov_.apply_sqrt_R(f))));
}

SparseOp QuasiFreeRep::rep_creator(const std::vector<cplx>& f) const {
  return rep_annihilator(vconj(f)).adjoint();
}

SparseOp QuasiFreeRep::commutant_generator(const std::vector<cplx>& f) const {
  const SparseOp gamma = parity_op(leg_);
  const SparseOp id = SparseOp::identity(leg_.dim());
  return kron(annihilate_op(leg_, cov_.apply_sqrt_R(f)), gamma)
      .add(kron(id, create_op(leg_, cov_.apply_sqrt_1mR(f))).scale(cplx{-1.0, 0.0}));
}

SparseOp QuasiFreeRep::monomial(FockIndex I, FockIndex J) const {
  SparseOp m = SparseOp::identity(dim());
  for (int mode : mask_modes(I)) m = m.mul(a_dag(mode));  // ascending creators
  const auto jm = mask_modes(J);
  for (auto it = jm.rbegin(); it != jm.rend(); ++it) m = m.mul(a(*it));  // descending annihilators
  return m;
}

double car_check(const std::vector<SparseOp>& annihilators) {
  double dev = 0.0;
  const std::size_t n = annihilators.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      dev = std::max(dev, anticommutator(annihilators[i], annihilators[j]).max_abs());
      SparseOp mixed = anticommutator(annihilators[i], annihilators[j].adjoint());
      if (i == j) mixed = mixed.add(SparseOp::identity(mixed.rows()), cplx{-1.0, 0.0});
      dev = std::max(dev, mixed.max_abs());
    }
  }
  return dev;
}

}  // namespace carlab
