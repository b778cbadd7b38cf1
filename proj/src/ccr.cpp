// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT

#include "carlab/ccr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "carlab/lapack.hpp"

namespace carlab {

namespace {

void enumerate_occ(int n_modes, int budget, std::vector<int> &cur,
                   std::vector<std::vector<int>> &out) {
  if (static_cast<int>(cur.size()) == n_modes) {
    out.push_back(cur);
    return;
  }
  for (int q = 0; q <= budget; ++q) {
    cur.push_back(q);
    enumerate_occ(n_modes, budget - q, cur, out);
    cur.pop_back();
  }
}

Matrix dense_kron(const Matrix &A, const Matrix &B) {
  Matrix K(A.rows() * B.rows(), A.cols() * B.cols());
  for (int ja = 0; ja < A.cols(); ++ja)
    for (int jb = 0; jb < B.cols(); ++jb)
      for (int ia = 0; ia < A.rows(); ++ia) {
        const cplx a = A(ia, ja);
        if (a == cplx(0.0)) continue;
        for (int ib = 0; ib < B.rows(); ++ib)
          K(ia * B.rows() + ib, ja * B.cols() + jb) = a * B(ib, jb);
      }
  return K;
}

std::vector<cplx> vacuum_vector(int dim) {
  std::vector<cplx> v(dim, 0.0);
  v[0] = 1.0;
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// BosonSpace
// ---------------------------------------------------------------------------

int BosonSpace::total_quanta(int k) const {
  int s = 0;
  for (int q : occ[k]) s += q;
  return s;
}

int BosonSpace::index_of(const std::vector<int> &m) const {
  auto it = index.find(m);
  return it == index.end() ? -1 : it->second;
}

BosonSpace BosonSpace::make(int n_modes, int cutoff) {
  if (n_modes < 1) throw std::invalid_argument("BosonSpace: n_modes must be >= 1");
  if (cutoff < 0) throw std::invalid_argument("BosonSpace: cutoff must be >= 0");
  BosonSpace bs;
  bs.n_modes = n_modes;
  bs.cutoff = cutoff;
  std::vector<int> cur;
  enumerate_occ(n_modes, cutoff, cur, bs.occ);
  std::sort(bs.occ.begin(), bs.occ.end());
  for (int k = 0; k < static_cast<int>(bs.occ.size()); ++k) bs.index[bs.occ[k]] = k;
  // The all-zero tuple is lexicographically first: index 0 is the vacuum.
  if (bs.total_quanta(0) != 0) throw std::logic_error("BosonSpace: vacuum not at index 0");
  return bs;
}

long boson_dimension(int n_modes, int cutoff) {
  // C(n+N, n) without intermediate overflow at desk scale.
  long num = 1;
  for (int k = 1; k <= n_modes; ++k) num = num * (cutoff + k) / k;
  return num;
}

cplx phys_inner(const std::vector<cplx> &u, const std::vector<cplx> &v) {
  return vdot(u, v);
}

// ---------------------------------------------------------------------------
// BosonCovariance
// ---------------------------------------------------------------------------

void BosonCovariance::validate() const {
  if (static_cast<int>(t.size()) != n_modes)
    throw std::invalid_argument("BosonCovariance: size mismatch");
  for (double x : t)
    if (!(x >= 0.0)) throw std::invalid_argument("BosonCovariance: T must be >= 0");
}

bool BosonCovariance::injective() const {
  for (double x : t)
    if (x <= 0.0) return false;
  return true;
}

std::vector<cplx> BosonCovariance::apply_sqrt_T(const std::vector<cplx> &f) const {
  std::vector<cplx> g(f);
  for (int i = 0; i < n_modes; ++i) g[i] *= std::sqrt(t[i]);
  return g;
}

std::vector<cplx> BosonCovariance::apply_sqrt_1pT(const std::vector<cplx> &f) const {
  std::vector<cplx> g(f);
  for (int i = 0; i < n_modes; ++i) g[i] *= std::sqrt(1.0 + t[i]);
  return g;
}

std::vector<cplx> BosonCovariance::apply_1p2T(const std::vector<cplx> &f) const {
  std::vector<cplx> g(f);
  for (int i = 0; i < n_modes; ++i) g[i] *= (1.0 + 2.0 * t[i]);
  return g;
}

BosonCovariance BosonCovariance::from_lambda(const std::vector<double> &lambdas) {
  BosonCovariance cov;
  cov.n_modes = static_cast<int>(lambdas.size());
  cov.t.reserve(lambdas.size());
  for (double l : lambdas) {
    if (!(l > 0.0 && l < 1.0))
      throw std::invalid_argument("BosonCovariance::from_lambda: lambda must be in (0,1)");
    cov.t.push_back(l / (1.0 - l));
  }
  return cov;
}

// ---------------------------------------------------------------------------
// Elementary operators
// ---------------------------------------------------------------------------

Matrix boson_create(const BosonSpace &bs, int mode) {
  if (mode < 1 || mode > bs.n_modes) throw std::out_of_range("boson_create: mode");
  const int d = bs.dim();
  Matrix m(d, d);
  for (int k = 0; k < d; ++k) {
    std::vector<int> target = bs.occ[k];
    target[mode - 1] += 1;
    const int idx = bs.index_of(target);  // -1 when the cutoff truncates
    if (idx >= 0) m(idx, k) = std::sqrt(static_cast<double>(target[mode - 1]));
  }
  return m;
}

Matrix boson_annihilate(const BosonSpace &bs, int mode) {
  if (mode < 1 || mode > bs.n_modes) throw std::out_of_range("boson_annihilate: mode");
  const int d = bs.dim();
  Matrix m(d, d);
  for (int k = 0; k < d; ++k) {
    const int q = bs.occ[k][mode - 1];
    if (q == 0) continue;
    std::vector<int> target = bs.occ[k];
    target[mode - 1] -= 1;
    m(bs.index_of(target), k) = std::sqrt(static_cast<double>(q));
  }
  return m;
}

Matrix boson_create_op(const BosonSpace &bs, const std::vector<cplx> &f) {
  if (static_cast<int>(f.size()) != bs.n_modes)
    throw std::invalid_argument("boson_create_op: vector size mismatch");
  Matrix m(bs.dim(), bs.dim());
  for (int i = 1; i <= bs.n_modes; ++i) {
    if (f[i - 1] == cplx(0.0)) continue;
    m += boson_create(bs, i) * f[i - 1];
  }
  return m;
}

Matrix boson_annihilate_op(const BosonSpace &bs, const std::vector<cplx> &f) {
  return boson_create_op(bs, f).adjoint();
}

Matrix boson_number_op(const BosonSpace &bs) {
  Matrix m(bs.dim(), bs.dim());
  for (int k = 0; k < bs.dim(); ++k) m(k, k) = static_cast<double>(bs.total_quanta(k));
  return m;
}

// ---------------------------------------------------------------------------
// Exponential vectors and Weyl operators
// ---------------------------------------------------------------------------

double exp_tail_defect(double norm_sq, int cutoff) {
  double sum = 0.0, term = 1.0;
  for (int k = 0; k <= cutoff; ++k) {
    sum += term;
    term *= norm_sq / (k + 1);
  }
  return std::max(0.0, std::exp(norm_sq) - sum);
}

ExpVector exp_vector(const BosonSpace &bs, const std::vector<cplx> &f) {
  if (static_cast<int>(f.size()) != bs.n_modes)
    throw std::invalid_argument("exp_vector: vector size mismatch");
  ExpVector ev;
  ev.v.assign(bs.dim(), 0.0);
  for (int k = 0; k < bs.dim(); ++k) {
    cplx c = 1.0;
    for (int i = 0; i < bs.n_modes; ++i) {
      for (int q = 1; q <= bs.occ[k][i]; ++q) c *= f[i] / std::sqrt(static_cast<double>(q));
    }
    ev.v[k] = c;
  }
  double ns = 0.0;
  for (const cplx &x : f) ns += std::norm(x);
  ev.tail_defect = exp_tail_defect(ns, bs.cutoff);
  return ev;
}

Matrix weyl_op(const BosonSpace &bs, const std::vector<cplx> &f) {
  // Generator X = a*(f) - a(f) is anti-Hermitian; H = -iX is Hermitian and
  // W = exp(X) = exp(iH) comes from one eigendecomposition, exactly unitary.
  const Matrix X = boson_create_op(bs, f) - boson_annihilate_op(bs, f);
  const Matrix H = X * cplx(0.0, -1.0);
  const lapack::EigResult eig = lapack::hermitian_eig(H);
  const int d = bs.dim();
  Matrix scaled = eig.vectors;
  for (int j = 0; j < d; ++j) {
    const cplx phase = std::exp(cplx(0.0, eig.values[j]));
    kernels::scal(static_cast<std::size_t>(d), phase, scaled.col(j));
  }
  return scaled.mul(eig.vectors.adjoint());
}

double weyl_unitarity_defect(const Matrix &w) {
  return (w.adjoint().mul(w) - Matrix::identity(w.rows())).max_abs();
}

Matrix doubled_weyl_rep(const BosonSpace &bs, const BosonCovariance &cov,
                        const std::vector<cplx> &f) {
  cov.validate();
  const Matrix left = weyl_op(bs, cov.apply_sqrt_1pT(f));
  const Matrix right = weyl_op(bs, vconj(cov.apply_sqrt_T(f)));
  return dense_kron(left, right);
}

Matrix doubled_weyl_commutant(const BosonSpace &bs, const BosonCovariance &cov,
                              const std::vector<cplx> &g) {
  cov.validate();
  const Matrix left = weyl_op(bs, cov.apply_sqrt_T(g));
  const Matrix right = weyl_op(bs, vconj(cov.apply_sqrt_1pT(g)));
  return dense_kron(left, right);
}

// ---------------------------------------------------------------------------
// Checks
// ---------------------------------------------------------------------------

double truncated_ccr_defect(const BosonSpace &bs, const std::vector<cplx> &f,
                            const std::vector<cplx> &g) {
  const Matrix af = boson_annihilate_op(bs, f);
  const Matrix cg = boson_create_op(bs, g);
  Matrix k = af.mul(cg) - cg.mul(af);
  const cplx ip = phys_inner(f, g);
  for (int i = 0; i < k.rows(); ++i) k(i, i) -= ip;
  // Restrict to columns with total quanta <= N-1: there the truncation
  // projection never interferes and the relation is exact.
  double dev = 0.0;
  for (int j = 0; j < k.cols(); ++j) {
    if (bs.total_quanta(j) > bs.cutoff - 1) continue;
    for (int i = 0; i < k.rows(); ++i) dev = std::max(dev, std::abs(k(i, j)));
  }
  return dev;
}

namespace {

WeylRelationCheck relation_check_from_ops(const Matrix &wf, const Matrix &wg,
                                          const Matrix &wfg, cplx oracle) {
  const std::vector<cplx> omega = vacuum_vector(wf.rows());
  const std::vector<cplx> u = wf.apply(wg.apply(omega));
  const std::vector<cplx> v = wfg.apply(omega);
  WeylRelationCheck out;
  out.phase_oracle = oracle;
  out.phase_measured = vdot(v, u) / vdot(v, v);
  out.phase_error = std::abs(out.phase_measured - oracle);
  std::vector<cplx> resid = u;
  vaxpy(-oracle, v, resid);
  out.vector_residual = vnorm(resid);
  return out;
}

}  // namespace

WeylRelationCheck weyl_relation_check(const BosonSpace &bs,
                                      const std::vector<cplx> &f,
                                      const std::vector<cplx> &g) {
  std::vector<cplx> fg(f);
  for (int i = 0; i < bs.n_modes; ++i) fg[i] += g[i];
  const cplx oracle = std::exp(cplx(0.0, -std::imag(phys_inner(f, g))));
  return relation_check_from_ops(weyl_op(bs, f), weyl_op(bs, g), weyl_op(bs, fg),
                                 oracle);
}

WeylRelationCheck doubled_weyl_relation_check(const BosonSpace &bs,
                                              const BosonCovariance &cov,
                                              const std::vector<cplx> &f,
                                              const std::vector<cplx> &g) {
  std::vector<cplx> fg(f);
  for (int i = 0; i < bs.n_modes; ++i) fg[i] += g[i];
  // The left leg contributes Im<(1+T)f,g>, the conjugated right leg
  // -Im<Tf,g>; together exactly the one-particle phase Im<f,g>.
  const cplx oracle = std::exp(cplx(0.0, -std::imag(phys_inner(f, g))));
  return relation_check_from_ops(doubled_weyl_rep(bs, cov, f),
                                 doubled_weyl_rep(bs, cov, g),
                                 doubled_weyl_rep(bs, cov, fg), oracle);
}

CcrStateReport ccr_state_check(const BosonSpace &bs, const BosonCovariance &cov,
                               const std::vector<std::vector<cplx>> &fs,
                               double tol_floor) {
  cov.validate();
  CcrStateReport rep;
  bool all_sq = true, all_unsq = true;
  for (const std::vector<cplx> &f : fs) {
    CcrStateSample s;
    s.f = f;
    const Matrix p = doubled_weyl_rep(bs, cov, f);
    s.gns_value = p(0, 0);

    double q = 0.0;  // ||(1+2T)^{1/2} f||^2 = <f, (1+2T) f>
    for (int i = 0; i < bs.n_modes; ++i) q += (1.0 + 2.0 * cov.t[i]) * std::norm(f[i]);
    s.squared_formula = std::exp(-0.5 * q);
    s.unsquared_formula = std::exp(-0.5 * std::sqrt(q));
    s.dev_squared = std::abs(s.gns_value - s.squared_formula);
    s.dev_unsquared = std::abs(s.gns_value - s.unsquared_formula);

    double ns_left = 0.0, ns_right = 0.0;
    for (int i = 0; i < bs.n_modes; ++i) {
      ns_left += (1.0 + cov.t[i]) * std::norm(f[i]);
      ns_right += cov.t[i] * std::norm(f[i]);
    }
    const double tail = std::sqrt(exp_tail_defect(ns_left, bs.cutoff)) +
                        std::sqrt(exp_tail_defect(ns_right, bs.cutoff));
    s.tail_tolerance = std::max(tol_floor, 20.0 * tail);

    all_sq = all_sq && (s.dev_squared <= s.tail_tolerance);
    all_unsq = all_unsq && (s.dev_unsquared <= s.tail_tolerance);
    rep.max_dev_squared = std::max(rep.max_dev_squared, s.dev_squared);
    rep.max_dev_unsquared = std::max(rep.max_dev_unsquared, s.dev_unsquared);
    rep.samples.push_back(std::move(s));
  }
  rep.squared_matches = all_sq && !fs.empty();
  rep.unsquared_matches = all_unsq && !fs.empty();
  return rep;
}

double doubled_commutant_defect(const BosonSpace &bs,
                                const BosonCovariance &cov,
                                const std::vector<cplx> &f,
                                const std::vector<cplx> &g) {
  const Matrix p = doubled_weyl_rep(bs, cov, f);
  const Matrix c = doubled_weyl_commutant(bs, cov, g);
  return (p.mul(c) - c.mul(p)).max_abs();
}

double doubled_commutant_vacuum_defect(const BosonSpace &bs,
                                       const BosonCovariance &cov,
                                       const std::vector<cplx> &f,
                                       const std::vector<cplx> &g) {
  const Matrix p = doubled_weyl_rep(bs, cov, f);
  const Matrix c = doubled_weyl_commutant(bs, cov, g);
  const std::vector<cplx> omega = vacuum_vector(p.rows());
  std::vector<cplx> u = p.apply(c.apply(omega));
  const std::vector<cplx> v = c.apply(p.apply(omega));
  for (std::size_t i = 0; i < u.size(); ++i) u[i] -= v[i];
  return vnorm(u);
}

double state_gram_min_eigenvalue(const BosonSpace &bs,
                                 const BosonCovariance &cov,
                                 const std::vector<std::vector<cplx>> &fs) {
  const int k = static_cast<int>(fs.size());
  const int dd = bs.dim() * bs.dim();
  Matrix vecs(dd, k);
  const std::vector<cplx> omega = vacuum_vector(dd);
  for (int j = 0; j < k; ++j) {
    const std::vector<cplx> col = doubled_weyl_rep(bs, cov, fs[j]).apply(omega);
    std::copy(col.begin(), col.end(), vecs.col(j));
  }
  const Matrix gram = vecs.adjoint().mul(vecs);
  const lapack::EigResult eig = lapack::hermitian_eig(gram);
  return eig.values.empty() ? 0.0 : eig.values.front();
}

}  // namespace carlab
