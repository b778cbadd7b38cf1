// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT
//
// Dense-matrix and LAPACK-wrapper tests.  Products are checked against a
// naive triple loop, factorizations against their defining reconstructions,
// and the null-space SVD semantics against matrices with known kernels.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "carlab/dense.hpp"
#include "carlab/lapack.hpp"

using carlab::AntiLinearMap;
using carlab::cplx;
using carlab::Matrix;

namespace {

Matrix random_matrix(int rows, int cols, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = cplx{dist(gen), dist(gen)};
  return m;
}

Matrix naive_mul(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j)
      for (int k = 0; k < a.cols(); ++k) c(i, j) += a(i, k) * b(k, j);
  return c;
}

}  // namespace

TEST_CASE("matrix arithmetic against naive loops") {
  const Matrix a = random_matrix(7, 5, 1);
  const Matrix b = random_matrix(5, 6, 2);
  const Matrix c = random_matrix(7, 5, 3);

  CHECK((a.mul(b) - naive_mul(a, b)).max_abs() < 1e-13);
  CHECK(((a + c) - (c + a)).max_abs() == 0.0);
  CHECK(((a - c) + c - a).max_abs() < 1e-15);

  const cplx s{0.5, -1.5};
  Matrix scaled = a * s;
  double dev = 0.0;
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i) dev = std::max(dev, std::abs(scaled(i, j) - s * a(i, j)));
  CHECK(dev == 0.0);
  CHECK(((s * a) - scaled).max_abs() == 0.0);

  Matrix acc = a;
  acc += c;
  acc -= a;
  CHECK((acc - c).max_abs() < 1e-15);

  // Structure maps.
  CHECK((a.adjoint().adjoint() - a).max_abs() == 0.0);
  CHECK((a.transpose().conj() - a.adjoint()).max_abs() == 0.0);
  CHECK((a.mul(b).adjoint() - b.adjoint().mul(a.adjoint())).max_abs() < 1e-13);

  // Norms.
  double frob = 0.0, mx = 0.0;
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i) {
      frob += std::norm(a(i, j));
      mx = std::max(mx, std::abs(a(i, j)));
    }
  CHECK(a.frobenius_norm() == doctest::Approx(std::sqrt(frob)).epsilon(1e-13));
  CHECK(a.max_abs() == mx);

  // identity / apply / column access.
  const Matrix id = Matrix::identity(5);
  CHECK((b - id.mul(b)).max_abs() == 0.0);
  std::vector<cplx> v(5);
  for (int i = 0; i < 5; ++i) v[i] = cplx{1.0 + i, -0.5 * i};
  const auto av = a.apply(v);
  std::vector<cplx> ref(7, cplx{0.0, 0.0});
  for (int k = 0; k < 5; ++k)
    for (int i = 0; i < 7; ++i) ref[i] += a(i, k) * v[k];
  for (int i = 0; i < 7; ++i) CHECK(std::abs(av[i] - ref[i]) < 1e-13);
  CHECK(a.col(2)[3] == a(3, 2));
}

TEST_CASE("vector helpers use the physics pairing") {
  const std::vector<cplx> x{{1.0, 2.0}, {0.0, -1.0}};
  const std::vector<cplx> y{{3.0, 0.0}, {1.0, 1.0}};
  // <x,y> = sum conj(x_i) y_i.
  const cplx expect = std::conj(x[0]) * y[0] + std::conj(x[1]) * y[1];
  CHECK(std::abs(carlab::vdot(x, y) - expect) == 0.0);
  CHECK(carlab::vnorm(x) == doctest::Approx(std::sqrt(6.0)).epsilon(1e-15));
  const auto xc = carlab::vconj(x);
  CHECK(xc[0] == std::conj(x[0]));
  auto acc = y;
  carlab::vaxpy(cplx{2.0, 0.0}, x, acc);
  CHECK(std::abs(acc[1] - (y[1] + 2.0 * x[1])) == 0.0);
}

TEST_CASE("antilinear maps compose, adjoint and conjugate as documented") {
  const Matrix m1 = random_matrix(4, 4, 10);
  const Matrix m2 = random_matrix(4, 4, 11);
  const AntiLinearMap x1{m1}, x2{m2};

  std::vector<cplx> v(4);
  for (int i = 0; i < 4; ++i) v[i] = cplx{0.3 * i - 1.0, 0.7 - 0.2 * i};

  // apply = M conj(v)
  const auto xv = x1.apply(v);
  const auto ref = m1.apply(carlab::vconj(v));
  for (int i = 0; i < 4; ++i) CHECK(std::abs(xv[i] - ref[i]) == 0.0);

  // (X1 X2) v = M1 conj(M2 conj(v)) is linear with matrix M1 conj(M2).
  const Matrix comp = x1.compose_linear(x2);
  const auto lhs = x1.apply(x2.apply(v));
  const auto rhs = comp.apply(v);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(lhs[i] - rhs[i]) < 1e-13);

  // Antilinear adjoint pairing: <X* u, v> = conj(<u, X v>).
  std::vector<cplx> u(4);
  for (int i = 0; i < 4; ++i) u[i] = cplx{0.1 + 0.4 * i, -0.6 + 0.3 * i};
  const cplx left = carlab::vdot(x1.adjoint().apply(u), v);
  const cplx right = std::conj(carlab::vdot(u, x1.apply(v)));
  CHECK(std::abs(left - right) < 1e-13);

  // conjugate_op for an antiunitary involution: J A J with J = plain
  // conjugation (M = 1) is entrywise conjugation of A.
  const AntiLinearMap j{Matrix::identity(4)};
  const Matrix a = random_matrix(4, 4, 12);
  CHECK((j.conjugate_op(a) - a.conj()).max_abs() == 0.0);
}

TEST_CASE("svd and eigendecomposition reconstruct their input") {
  const Matrix a = random_matrix(6, 4, 20);
  const auto svd = carlab::lapack::svd_econ(a);
  REQUIRE(svd.s.size() == 4);
  for (std::size_t k = 1; k < svd.s.size(); ++k) CHECK(svd.s[k] <= svd.s[k - 1]);
  Matrix us(6, 4);
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 6; ++i) us(i, j) = svd.U(i, j) * svd.s[j];
  CHECK((us.mul(svd.Vh) - a).max_abs() < 1e-12);
  CHECK((svd.U.adjoint().mul(svd.U) - Matrix::identity(4)).max_abs() < 1e-12);

  Matrix h = random_matrix(5, 5, 21);
  h = h + h.adjoint();
  const auto eig = carlab::lapack::hermitian_eig(h);
  for (std::size_t k = 1; k < eig.values.size(); ++k) CHECK(eig.values[k] >= eig.values[k - 1]);
  Matrix vd(5, 5);
  for (int j = 0; j < 5; ++j)
    for (int i = 0; i < 5; ++i) vd(i, j) = eig.vectors(i, j) * eig.values[j];
  CHECK((vd.mul(eig.vectors.adjoint()) - h).max_abs() < 1e-12);
}

TEST_CASE("linear solves and least squares") {
  Matrix a = random_matrix(5, 5, 30);
  a += Matrix::identity(5) * cplx{3.0, 0.0};  // keep it well-conditioned
  const Matrix b = random_matrix(5, 2, 31);
  const Matrix x = carlab::lapack::solve(a, b);
  CHECK((a.mul(x) - b).max_abs() < 1e-12);

  // Overdetermined least squares: residual orthogonal to the column space.
  const Matrix tall = random_matrix(8, 3, 32);
  std::vector<cplx> rhs(8);
  for (int i = 0; i < 8; ++i) rhs[i] = cplx{1.0 - 0.3 * i, 0.2 * i};
  const auto [sol, res] = carlab::lapack::lstsq(tall, rhs);
  REQUIRE(sol.size() == 3);
  auto r = rhs;
  const auto ts = tall.apply(sol);
  for (int i = 0; i < 8; ++i) r[i] -= ts[i];
  CHECK(carlab::vnorm(r) == doctest::Approx(res).epsilon(1e-10));
  const Matrix rm = [&] {
    Matrix m(8, 1);
    for (int i = 0; i < 8; ++i) m(i, 0) = r[i];
    return m;
  }();
  CHECK(tall.adjoint().mul(rm).max_abs() < 1e-12);
}

TEST_CASE("nullspace, column space and rank with known kernels") {
  // 4x4 with a 2-dimensional kernel: columns 2,3 are copies of 0,1.
  Matrix a(4, 4);
  const Matrix base = random_matrix(4, 2, 40);
  for (int i = 0; i < 4; ++i) {
    a(i, 0) = base(i, 0);
    a(i, 1) = base(i, 1);
    a(i, 2) = base(i, 0);
    a(i, 3) = base(i, 1);
  }
  const Matrix ns = carlab::lapack::nullspace(a, 1e-10);
  REQUIRE(ns.cols() == 2);
  CHECK(a.mul(ns).max_abs() < 1e-12);
  CHECK((ns.adjoint().mul(ns) - Matrix::identity(2)).max_abs() < 1e-12);
  CHECK(carlab::lapack::rank(a, 1e-10) == 2);

  const Matrix cs = carlab::lapack::column_space(a, 1e-10);
  REQUIRE(cs.cols() == 2);
  // Every column of a lies in span(cs).
  const Matrix proj = cs.mul(cs.adjoint().mul(a));
  CHECK((proj - a).max_abs() < 1e-12);

  // Zero matrix: the entire space is the kernel.
  const Matrix z(3, 3);
  CHECK(carlab::lapack::nullspace(z, 1e-10).cols() == 3);
  CHECK(carlab::lapack::rank(z, 1e-10) == 0);

  // Wide matrix (more unknowns than equations).
  const Matrix wide = random_matrix(2, 5, 41);
  const Matrix wns = carlab::lapack::nullspace(wide, 1e-10);
  REQUIRE(wns.cols() == 3);
  CHECK(wide.mul(wns).max_abs() < 1e-12);
}
