// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT
//
// Scalar reference kernels.  These are the semantic ground truth the SIMD
// variants are equivalence-tested against.

#include "carlab/kernels.hpp"

namespace carlab::kernels {
namespace {

void axpy_scalar(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

cplx dotc_scalar(std::size_t n, const cplx* x, const cplx* y) {
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) s += std::conj(x[i]) * y[i];
  return s;
}

cplx dotu_scalar(std::size_t n, const cplx* x, const cplx* y) {
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void scal_scalar(std::size_t n, cplx alpha, cplx* x) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

double nrm2sq_scalar(std::size_t n, const cplx* x) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::norm(x[i]);
  return s;
}

void conj_inplace_scalar(std::size_t n, cplx* x) {
  for (std::size_t i = 0; i < n; ++i) x[i] = std::conj(x[i]);
}

}  // namespace

const Backend scalar_backend = {
    "scalar",    axpy_scalar,   dotc_scalar,
    dotu_scalar, scal_scalar,   nrm2sq_scalar,
    conj_inplace_scalar,
};

}  // namespace carlab::kernels
