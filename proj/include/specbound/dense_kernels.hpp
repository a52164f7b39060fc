#pragma once
#include <vector>

#include "specbound/linear_operator.hpp"

namespace specbound::core {

// C = A * B
DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B);
DenseMatrix transpose(const DenseMatrix& A);
DenseMatrix identity(std::size_t n);
double norm1(const DenseMatrix& A);        // max column sum
double frobenius(const DenseMatrix& A);

// Thin Householder QR of an m x k matrix (m >= k). Returns Q (m x k) with
// orthonormal columns; R's diagonal is made positive so Q is Haar-distributed
// when the input is i.i.d. Gaussian.
DenseMatrix householder_q(const DenseMatrix& A);

// Solve A X = B by LU with partial pivoting (A square). Used by expm's Pade solve.
DenseMatrix lu_solve(DenseMatrix A, DenseMatrix B);

struct SvdResult {
  std::vector<double> singular_values;  // nonincreasing
  DenseMatrix u;                        // m x k, only if factors requested
  DenseMatrix v;                        // n x k
  bool has_factors = false;
};

// One-sided Jacobi on columns; rotations applied until every off-diagonal
// Gram entry is below 1e-12 relative. Accurate at desk scale (<= 2000).
SvdResult jacobi_svd(const DenseMatrix& A, bool want_factors = false);

GroundTruth dense_svd(const DenseMatrix& m);

}  // namespace specbound::core
