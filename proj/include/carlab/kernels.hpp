// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT
//
// Runtime-dispatched dense complex kernels.  Every operation has a scalar
// reference implementation and an AVX2+FMA variant; the dispatch table is
// filled in once, after a cpuid feature check, and can be pinned to a named
// backend for equivalence testing.  Complex numbers are stored interleaved
// (re, im), i.e. the memory layout of std::complex<double>.

#pragma once

#include <complex>
#include <cstddef>

namespace carlab::kernels {

using cplx = std::complex<double>;

struct Backend {
  const char* name;
  // y[i] += alpha * x[i]
  void (*axpy)(std::size_t n, cplx alpha, const cplx* x, cplx* y);
  // sum_i conj(x[i]) * y[i]
  cplx (*dotc)(std::size_t n, const cplx* x, const cplx* y);
  // sum_i x[i] * y[i]
  cplx (*dotu)(std::size_t n, const cplx* x, const cplx* y);
  // x[i] *= alpha
  void (*scal)(std::size_t n, cplx alpha, cplx* x);
  // sum_i |x[i]|^2
  double (*nrm2sq)(std::size_t n, const cplx* x);
  // x[i] = conj(x[i])
  void (*conj_inplace)(std::size_t n, cplx* x);
};

extern const Backend scalar_backend;
extern const Backend avx2_backend;

// The active backend ("auto" resolves via cpuid on first use).
const Backend& active();
// Pin the backend by name: "scalar", "avx2", or "auto".  Returns false if the
// requested backend is unavailable on this machine.
bool set_backend(const char* name);
const char* active_name();
bool avx2_available();

// Convenience forwarding wrappers.
inline void axpy(std::size_t n, cplx a, const cplx* x, cplx* y) { active().axpy(n, a, x, y); }
inline cplx dotc(std::size_t n, const cplx* x, const cplx* y) { return active().dotc(n, x, y); }
inline cplx dotu(std::size_t n, const cplx* x, const cplx* y) { return active().dotu(n, x, y); }
inline void scal(std::size_t n, cplx a, cplx* x) { active().scal(n, a, x); }
inline double nrm2sq(std::size_t n, const cplx* x) { return active().nrm2sq(n, x); }
inline void conj_inplace(std::size_t n, cplx* x) { active().conj_inplace(n, x); }

}  // namespace carlab::kernels
