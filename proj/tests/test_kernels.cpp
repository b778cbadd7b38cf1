// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT
//
// Kernel-lane tests: the scalar reference implementations are checked against
// hand-rolled loops, and the AVX2 variants are checked against the scalar
// lane on sizes that straddle the vector width (remainder handling).  The
// dispatch table is exercised through set_backend / active_name.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "carlab/kernels.hpp"

using carlab::kernels::cplx;
namespace kernels = carlab::kernels;

namespace {

std::vector<cplx> random_vector(std::size_t n, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<cplx> v(n);
  for (auto& z : v) z = cplx{dist(gen), dist(gen)};
  return v;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// A guard that restores the auto-dispatched backend when a test section ends.
struct BackendGuard {
  ~BackendGuard() { kernels::set_backend("auto"); }
};

}  // namespace

TEST_CASE("scalar backend matches naive loops") {
  const kernels::Backend& sb = kernels::scalar_backend;
  for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{7}, std::size_t{64}}) {
    auto x = random_vector(n, 11 + static_cast<std::uint32_t>(n));
    auto y = random_vector(n, 23 + static_cast<std::uint32_t>(n));
    const cplx alpha{0.3, -0.7};

    // axpy
    auto y2 = y;
    sb.axpy(n, alpha, x.data(), y2.data());
    double dev = 0.0;
    for (std::size_t i = 0; i < n; ++i) dev = std::max(dev, std::abs(y2[i] - (y[i] + alpha * x[i])));
    CHECK(dev == 0.0);

    // dotc / dotu / nrm2sq
    cplx dc{0.0, 0.0}, du{0.0, 0.0};
    double n2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dc += std::conj(x[i]) * y[i];
      du += x[i] * y[i];
      n2 += std::norm(x[i]);
    }
    CHECK(std::abs(sb.dotc(n, x.data(), y.data()) - dc) < 1e-13);
    CHECK(std::abs(sb.dotu(n, x.data(), y.data()) - du) < 1e-13);
    CHECK(std::abs(sb.nrm2sq(n, x.data()) - n2) < 1e-13);

    // scal + conj_inplace
    auto x2 = x;
    sb.scal(n, alpha, x2.data());
    sb.conj_inplace(n, x2.data());
    dev = 0.0;
    for (std::size_t i = 0; i < n; ++i) dev = std::max(dev, std::abs(x2[i] - std::conj(alpha * x[i])));
    CHECK(dev == 0.0);
  }
}

TEST_CASE("avx2 backend agrees with scalar on width-straddling sizes") {
  if (!kernels::avx2_available()) {
    MESSAGE("AVX2 not available on this host; dispatch falls back to scalar");
    return;
  }
  const kernels::Backend& sb = kernels::scalar_backend;
  const kernels::Backend& vb = kernels::avx2_backend;
  const cplx alpha{-0.25, 0.85};
  // 2 complex doubles per 256-bit lane: cover every remainder class, plus a
  // long run to accumulate rounding differences if the reductions disagreed.
  for (std::size_t n = 0; n <= 17; ++n) {
    auto x = random_vector(n, 100 + static_cast<std::uint32_t>(n));
    auto y = random_vector(n, 200 + static_cast<std::uint32_t>(n));

    auto ys = y, yv = y;
    sb.axpy(n, alpha, x.data(), ys.data());
    vb.axpy(n, alpha, x.data(), yv.data());
    CHECK(max_abs_diff(ys, yv) < 1e-14);

    CHECK(std::abs(sb.dotc(n, x.data(), y.data()) - vb.dotc(n, x.data(), y.data())) < 1e-13);
    CHECK(std::abs(sb.dotu(n, x.data(), y.data()) - vb.dotu(n, x.data(), y.data())) < 1e-13);
    CHECK(std::abs(sb.nrm2sq(n, x.data()) - vb.nrm2sq(n, x.data())) < 1e-13);

    auto xs = x, xv = x;
    sb.scal(n, alpha, xs.data());
    vb.scal(n, alpha, xv.data());
    CHECK(max_abs_diff(xs, xv) < 1e-14);
    sb.conj_inplace(n, xs.data());
    vb.conj_inplace(n, xv.data());
    CHECK(max_abs_diff(xs, xv) < 1e-14);
  }
  // Long reduction: relative agreement.
  const std::size_t big = 4097;
  auto x = random_vector(big, 7);
  auto y = random_vector(big, 9);
  const cplx ds = sb.dotc(big, x.data(), y.data());
  const cplx dv = vb.dotc(big, x.data(), y.data());
  CHECK(std::abs(ds - dv) < 1e-11 * (1.0 + std::abs(ds)));
  CHECK(std::abs(sb.nrm2sq(big, x.data()) - vb.nrm2sq(big, x.data())) <
        1e-11 * sb.nrm2sq(big, x.data()));
}

TEST_CASE("runtime dispatch pins and restores backends") {
  BackendGuard guard;
  REQUIRE(kernels::set_backend("scalar"));
  CHECK(std::string(kernels::active_name()) == "scalar");

  const bool have_avx2 = kernels::avx2_available();
  CHECK(kernels::set_backend("avx2") == have_avx2);
  if (have_avx2) CHECK(std::string(kernels::active_name()) == "avx2");

  CHECK_FALSE(kernels::set_backend("sse9"));

  REQUIRE(kernels::set_backend("auto"));
  const std::string resolved = kernels::active_name();
  CHECK((resolved == "scalar" || resolved == "avx2"));
  if (have_avx2) CHECK(resolved == "avx2");

  // The forwarding wrappers go through the active table.
  auto x = random_vector(5, 42);
  const double direct = kernels::active().nrm2sq(5, x.data());
  CHECK(kernels::nrm2sq(5, x.data()) == direct);
}
