// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT
//
// Quasi-free state and doubled-representation tests.  The determinant
// formula is pinned by hand-frozen two-mode values and then cross-checked
// against the GNS vacuum expectations of every normal-ordered monomial; the
// per-mode vacuum actions of a_R / b_R are pinned to their closed forms.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "carlab/quasifree.hpp"

using carlab::cplx;
using carlab::Covariance;
using carlab::FockIndex;
using carlab::Matrix;
using carlab::QuasiFreeRep;
using carlab::SparseOp;

namespace {

std::vector<cplx> basis_vec(int n, int mode) {
  std::vector<cplx> v(n, cplx{0.0, 0.0});
  v[mode - 1] = 1.0;
  return v;
}

// Doubled basis index for h_P (x) h_Q, left factor major.
int doubled_index(const QuasiFreeRep& rep, FockIndex P, FockIndex Q) {
  return static_cast<int>(P) * rep.leg_dim() + static_cast<int>(Q);
}

// Written-order argument lists for the normal-ordered monomial
// a*_R(h_I) a_R(h_J): creators ascending, annihilators descending.
std::vector<std::vector<cplx>> creator_list(int n, FockIndex I) {
  std::vector<std::vector<cplx>> fs;
  for (int mode : carlab::mask_modes(I)) fs.push_back(basis_vec(n, mode));
  return fs;
}
std::vector<std::vector<cplx>> annihilator_list(int n, FockIndex J) {
  auto modes = carlab::mask_modes(J);
  std::vector<std::vector<cplx>> gs;
  for (auto it = modes.rbegin(); it != modes.rend(); ++it) gs.push_back(basis_vec(n, *it));
  return gs;
}

}  // namespace

TEST_CASE("covariance validation and spectral maps") {
  Covariance cov{2, {0.3, 0.7}};
  CHECK_NOTHROW(cov.validate());
  CHECK_FALSE(cov.has_half());
  CHECK(Covariance{1, {0.5}}.has_half());

  CHECK_THROWS_AS(Covariance({1, {0.0}}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(Covariance({1, {1.5}}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(Covariance({2, {0.3}}).validate(), std::invalid_argument);

  const std::vector<cplx> f{{1.0, 1.0}, {2.0, 0.0}};
  const auto rf = cov.apply_R(f);
  CHECK(std::abs(rf[0] - 0.3 * f[0]) == 0.0);
  CHECK(std::abs(rf[1] - 0.7 * f[1]) == 0.0);
  const auto sf = cov.apply_sqrt_R(f);
  CHECK(std::abs(sf[0] - std::sqrt(0.3) * f[0]) < 1e-15);
  const auto cf = cov.apply_sqrt_1mR(f);
  CHECK(std::abs(cf[1] - std::sqrt(0.3) * f[1]) < 1e-15);
}

TEST_CASE("determinant formula: frozen two-mode values") {
  const Covariance cov{2, {0.3, 0.7}};
  const auto h1 = basis_vec(2, 1);
  const auto h2 = basis_vec(2, 2);

  // Empty monomial: the state is unital.
  CHECK(std::abs(carlab::quasifree_moment(cov, {}, {}) - cplx{1.0, 0.0}) == 0.0);

  // Two-point functions: omega(a*(h_i) a(h_j)) = <R h_j, h_i> = lambda_i d_ij.
  CHECK(std::abs(carlab::quasifree_moment(cov, {h1}, {h1}) - cplx{0.3, 0.0}) < 1e-15);
  CHECK(std::abs(carlab::quasifree_moment(cov, {h2}, {h2}) - cplx{0.7, 0.0}) < 1e-15);
  CHECK(std::abs(carlab::quasifree_moment(cov, {h1}, {h2})) == 0.0);

  // Mismatched counts vanish identically.
  CHECK(std::abs(carlab::quasifree_moment(cov, {h1, h2}, {h1})) == 0.0);
  CHECK(std::abs(carlab::quasifree_moment(cov, {}, {h1})) == 0.0);

  // Four-point, written order a*(h1) a*(h2) a(h1) a(h2):
  //   the moment matrix is anti-diagonal (0.3, 0.7), det = -0.21.
  CHECK(std::abs(carlab::quasifree_moment(cov, {h1, h2}, {h1, h2}) - cplx{-0.21, 0.0}) < 1e-15);
  // Reversed creators a*(h2) a*(h1) a(h1) a(h2): diagonal det = +0.21.
  CHECK(std::abs(carlab::quasifree_moment(cov, {h2, h1}, {h1, h2}) - cplx{0.21, 0.0}) < 1e-15);

  // Linearity hook: moments with random complex smearing vectors satisfy the
  // determinant definition directly.
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<cplx> f1(2), f2(2), g1(2), g2(2);
  for (int i = 0; i < 2; ++i) {
    f1[i] = cplx{dist(gen), dist(gen)};
    f2[i] = cplx{dist(gen), dist(gen)};
    g1[i] = cplx{dist(gen), dist(gen)};
    g2[i] = cplx{dist(gen), dist(gen)};
  }
  // omega(a*(f2) a*(f1) a(g1) a(g2)) with fs = written creators (f2, f1),
  // gs = written annihilators (g1, g2): det [ <R g_i, fs[m-1-j]> ].
  Matrix m(2, 2);
  m(0, 0) = carlab::math_inner(cov.apply_R(g1), f1);
  m(0, 1) = carlab::math_inner(cov.apply_R(g1), f2);
  m(1, 0) = carlab::math_inner(cov.apply_R(g2), f1);
  m(1, 1) = carlab::math_inner(cov.apply_R(g2), f2);
  const cplx expect = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  CHECK(std::abs(carlab::quasifree_moment(cov, {f2, f1}, {g1, g2}) - expect) < 1e-13);
}

TEST_CASE("doubled representation: CAR and per-mode vacuum actions") {
  const Covariance cov{2, {0.3, 0.6}};
  const QuasiFreeRep rep(cov);
  REQUIRE(rep.dim() == 16);
  REQUIRE(rep.leg_dim() == 4);

  std::vector<SparseOp> as, bs;
  for (int m = 1; m <= 2; ++m) {
    as.push_back(rep.a(m));
    bs.push_back(rep.b(m));
  }
  CHECK(carlab::car_check(as) < 1e-14);
  CHECK(carlab::car_check(bs) < 1e-14);

  // a_R and the parity-dressed commutant generators commute.
  for (int m = 1; m <= 2; ++m) {
    const SparseOp y = rep.gamma2().mul(rep.b(m));
    CHECK(carlab::commutator(rep.a(m), y).max_abs() < 1e-14);
    CHECK(carlab::commutator(rep.a_dag(m), y).max_abs() < 1e-14);
    CHECK(carlab::commutator(rep.a(m), y.adjoint()).max_abs() < 1e-14);
  }
  // Plain b_R anticommutes with a_R instead.
  CHECK(carlab::anticommutator(rep.a(1), rep.b(2)).max_abs() < 1e-14);

  // Vacuum actions, mode by mode:
  //   a_R(h_i)  OmOm = sqrt(li)   Om (x) h_i      a*_R(h_i) OmOm = sqrt(1-li) h_i (x) Om
  //   b_R(h_i)  OmOm = -sqrt(1-li) Om (x) h_i     b*_R(h_i) OmOm = sqrt(li)   h_i (x) Om
  const auto& vac = rep.vacuum();
  CHECK(carlab::vnorm(vac) == doctest::Approx(1.0).epsilon(1e-15));
  for (int m = 1; m <= 2; ++m) {
    const double li = cov.lambdas[m - 1];
    const FockIndex bit = FockIndex{1} << (m - 1);
    const int om_h = doubled_index(rep, 0, bit);
    const int h_om = doubled_index(rep, bit, 0);

    auto v = rep.a(m).apply(vac);
    CHECK(std::abs(v[om_h] - std::sqrt(li)) < 1e-15);
    v[om_h] = 0.0;
    CHECK(carlab::vnorm(v) < 1e-15);

    v = rep.a_dag(m).apply(vac);
    CHECK(std::abs(v[h_om] - std::sqrt(1.0 - li)) < 1e-15);
    v[h_om] = 0.0;
    CHECK(carlab::vnorm(v) < 1e-15);

    v = rep.b(m).apply(vac);
    CHECK(std::abs(v[om_h] + std::sqrt(1.0 - li)) < 1e-15);
    v[om_h] = 0.0;
    CHECK(carlab::vnorm(v) < 1e-15);

    v = rep.b_dag(m).apply(vac);
    CHECK(std::abs(v[h_om] - std::sqrt(li)) < 1e-15);
    v[h_om] = 0.0;
    CHECK(carlab::vnorm(v) < 1e-15);
  }

  // Smeared accessors agree with linear combinations of the cached per-mode
  // operators, and commutant_generator is the plain b_R.
  std::vector<cplx> f{{0.4, -0.2}, {0.1, 0.9}};
  Matrix lin(rep.dim(), rep.dim());
  for (int m = 1; m <= 2; ++m) lin += rep.a(m).to_dense() * f[m - 1];
  CHECK((rep.rep_annihilator(f).to_dense() - lin).max_abs() < 1e-15);
  CHECK((rep.rep_creator(f).to_dense() - rep.rep_annihilator(carlab::vconj(f)).to_dense().adjoint())
            .max_abs() < 1e-15);
  Matrix linb(rep.dim(), rep.dim());
  for (int m = 1; m <= 2; ++m) linb += rep.b(m).to_dense() * f[m - 1];
  CHECK((rep.commutant_generator(f).to_dense() - linb).max_abs() < 1e-15);
}

TEST_CASE("GNS vacuum expectations reproduce the determinant formula") {
  for (int n : {2, 3}) {
    std::vector<double> lambdas;
    for (int i = 0; i < n; ++i) lambdas.push_back(0.15 + 0.2 * i);
    const Covariance cov{n, lambdas};
    const QuasiFreeRep rep(cov);
    const auto& vac = rep.vacuum();

    double worst = 0.0;
    for (FockIndex I = 0; I < (FockIndex{1} << n); ++I)
      for (FockIndex J = 0; J < (FockIndex{1} << n); ++J) {
        const cplx measured = carlab::vdot(vac, rep.monomial(I, J).apply(vac));
        const cplx expected =
            (carlab::popcount(I) == carlab::popcount(J))
                ? carlab::quasifree_moment(cov, creator_list(n, I), annihilator_list(n, J))
                : cplx{0.0, 0.0};
        worst = std::max(worst, std::abs(measured - expected));
      }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("monomials multiply back to generator products") {
  const Covariance cov{2, {0.3, 0.7}};
  const QuasiFreeRep rep(cov);
  // monomial(I, J) = a*_R ascending * a_R descending, e.g. I={1,2}, J={1,2}
  // is a*_1 a*_2 a_2 a_1.
  const SparseOp expect = rep.a_dag(1).mul(rep.a_dag(2)).mul(rep.a(2)).mul(rep.a(1));
  CHECK((rep.monomial(0b11, 0b11).to_dense() - expect.to_dense()).max_abs() == 0.0);
  CHECK((rep.monomial(0, 0).to_dense() - Matrix::identity(rep.dim())).max_abs() == 0.0);
  CHECK((rep.monomial(0b10, 0b01).to_dense() - rep.a_dag(2).mul(rep.a(1)).to_dense()).max_abs() ==
        0.0);
}
