// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT
//
// Thin LAPACKE wrappers (column-major, zero-copy).  Factorizations go to
// LAPACK; streaming products stay with the dispatched kernels.

#pragma once

#include <string>
#include <vector>

#include "carlab/dense.hpp"

namespace carlab::lapack {

struct SvdResult {
  Matrix U;               // m x k
  std::vector<double> s;  // k = min(m, n), descending
  Matrix Vh;              // k x n
};

// Economy SVD (zgesdd, divide and conquer).  Destroys no inputs.
SvdResult svd_econ(const Matrix& A);

struct EigResult {
  std::vector<double> values;  // ascending
  Matrix vectors;              // columns are eigenvectors
};

// Hermitian eigendecomposition (zheevd).  A must be Hermitian.
EigResult hermitian_eig(const Matrix& A);

// Solve A X = B for square A (zgesv).
Matrix solve(const Matrix& A, const Matrix& B);

// Least squares min ||A x - b|| (zgels); returns {x, residual norm}.
std::pair<std::vector<cplx>, double> lstsq(const Matrix& A, const std::vector<cplx>& b);

// Orthonormal basis (columns) of the null space of A: right singular vectors
// with sigma <= rtol * sigma_max (all of them if A == 0).
Matrix nullspace(const Matrix& A, double rtol);

// Orthonormal basis (columns) of the column space of A: left singular vectors
// with sigma > rtol * sigma_max.
Matrix column_space(const Matrix& A, double rtol);

int rank(const Matrix& A, double rtol);

}  // namespace carlab::lapack
