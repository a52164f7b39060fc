#pragma once
#include <cstdint>
#include <utility>

#include "specbound/linear_operator.hpp"

namespace specbound::core {

// Hilbert matrix A_ij = 1/(i+j-1), i, j 1-based (top-left entry 1). Of the two
// printed-index conventions only this one lands on the documented effective
// rank ~1.15 at n = 100; the shifted variant 1/(i+j) measures ~1.18.
DenseMatrix hilbert_matrix(std::size_t n);
LinearOperator hilbert_operator(std::size_t n);

// A = U diag(sv) V^T with U, V from sign-fixed Householder QR of Gaussians.
DenseMatrix gen_synthetic_dense(const SpectrumSpec& spec, std::uint64_t seed);
std::pair<LinearOperator, GroundTruth> gen_synthetic(const SpectrumSpec& spec, std::uint64_t seed);

// X |-> Dexp{H}(X) with H = scale * (I (x) T_n + T_n (x) I), T_n tridiagonal
// with 2/(n-1)^2 on the diagonal and -1/(n-1)^2 off it. Acts on vec(X) for
// X of size n^2 x n^2, so the operator is n^4-dimensional.
//
// Default route diagonalizes H analytically (eigenbasis of T_n is the sine
// basis) and applies the divided-difference kernel in that basis; it is exact
// and fast enough for 10^5-trial batches. The block route evaluates
// exp([[H, X], [0, H]]) and reads the top-right block -- the defining formula,
// kept as the cross-check reference (slow: one 2n^2 x 2n^2 exponential per apply).
LinearOperator frechet_expm_operator(std::size_t n, double scale);
LinearOperator frechet_block_reference(std::size_t n, double scale);
DenseMatrix frechet_hamiltonian(std::size_t n, double scale);  // H itself

// exact spectrum: in H's eigenbasis the map is diagonal with the (positive)
// divided-difference entries, so those are the singular values
GroundTruth frechet_ground_truth(std::size_t n, double scale);

}  // namespace specbound::core
