// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT
//
// AVX2+FMA kernels, two interleaved complex doubles per 256-bit register.
// This translation unit is the only one compiled with -mavx2 -mfma; it is
// reached exclusively through the dispatch table after a cpuid check.
//
// Complex multiply layout: for x = (xr, xi) per lane pair,
//   movedup(x)      = (xr, xr)
//   permute(x,0101) = (xi, xr)   [swap within each complex]
//   permute(x,1111) = (xi, xi)
// and _mm256_addsub_pd(a, b) = (a0 - b0, a1 + b1, a2 - b2, a3 + b3), which is
// exactly the sign pattern of (re, im) in a complex product.

#include "carlab/kernels.hpp"

#include <immintrin.h>

namespace carlab::kernels {
namespace {

inline __m256d neg(__m256d v) {
  return _mm256_xor_pd(v, _mm256_set1_pd(-0.0));
}

void axpy_avx2(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
  const double ar = alpha.real(), ai = alpha.imag();
  const __m256d are = _mm256_set1_pd(ar);
  const __m256d aim = _mm256_set1_pd(ai);
  auto* yd = reinterpret_cast<double*>(y);
  const auto* xd = reinterpret_cast<const double*>(x);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    __m256d xs = _mm256_permute_pd(xv, 0b0101);
    // (y + ar*x) -+ ai*swap(x): re gets -, im gets +.
    __m256d r = _mm256_addsub_pd(_mm256_fmadd_pd(are, xv, yv), _mm256_mul_pd(aim, xs));
    _mm256_storeu_pd(yd + 2 * i, r);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

cplx dotc_avx2(std::size_t n, const cplx* x, const cplx* y) {
  const auto* xd = reinterpret_cast<const double*>(x);
  const auto* yd = reinterpret_cast<const double*>(y);
  __m256d acc1 = _mm256_setzero_pd();  // (xr*yr, xr*yi) accumulator
  __m256d acc2 = _mm256_setzero_pd();  // (xi*yi, xi*yr) accumulator
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    acc1 = _mm256_fmadd_pd(_mm256_movedup_pd(xv), yv, acc1);
    acc2 = _mm256_fmadd_pd(_mm256_permute_pd(xv, 0b1111), _mm256_permute_pd(yv, 0b0101), acc2);
  }
  // conj(x)*y = (xr*yr + xi*yi, xr*yi - xi*yr) = addsub(acc1, -acc2).
  __m256d r = _mm256_addsub_pd(acc1, neg(acc2));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, r);
  cplx s{lanes[0] + lanes[2], lanes[1] + lanes[3]};
  for (; i < n; ++i) s += std::conj(x[i]) * y[i];
  return s;
}

cplx dotu_avx2(std::size_t n, const cplx* x, const cplx* y) {
  const auto* xd = reinterpret_cast<const double*>(x);
  const auto* yd = reinterpret_cast<const double*>(y);
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    acc1 = _mm256_fmadd_pd(_mm256_movedup_pd(xv), yv, acc1);
    acc2 = _mm256_fmadd_pd(_mm256_permute_pd(xv, 0b1111), _mm256_permute_pd(yv, 0b0101), acc2);
  }
  // x*y = (xr*yr - xi*yi, xr*yi + xi*yr) = addsub(acc1, acc2).
  __m256d r = _mm256_addsub_pd(acc1, acc2);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, r);
  cplx s{lanes[0] + lanes[2], lanes[1] + lanes[3]};
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void scal_avx2(std::size_t n, cplx alpha, cplx* x) {
  const __m256d are = _mm256_set1_pd(alpha.real());
  const __m256d aim = _mm256_set1_pd(alpha.imag());
  auto* xd = reinterpret_cast<double*>(x);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    __m256d xs = _mm256_permute_pd(xv, 0b0101);
    __m256d r = _mm256_addsub_pd(_mm256_mul_pd(are, xv), _mm256_mul_pd(aim, xs));
    _mm256_storeu_pd(xd + 2 * i, r);
  }
  for (; i < n; ++i) x[i] *= alpha;
}

double nrm2sq_avx2(std::size_t n, const cplx* x) {
  const auto* xd = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    acc = _mm256_fmadd_pd(xv, xv, acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) s += std::norm(x[i]);
  return s;
}

void conj_inplace_avx2(std::size_t n, cplx* x) {
  auto* xd = reinterpret_cast<double*>(x);
  const __m256d mask = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    _mm256_storeu_pd(xd + 2 * i, _mm256_xor_pd(xv, mask));
  }
  for (; i < n; ++i) x[i] = std::conj(x[i]);
}

}  // namespace

const Backend avx2_backend = {
    "avx2",    axpy_avx2,   dotc_avx2,
    dotu_avx2, scal_avx2,   nrm2sq_avx2,
    conj_inplace_avx2,
};

}  // namespace carlab::kernels
