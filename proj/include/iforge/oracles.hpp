#pragma once

#include <iforge/fock.hpp>
#include <iforge/types.hpp>

#include <cstdint>

namespace iforge::oracles {

/// Brute-force permanent: sum over all n! permutations. Independent of
/// the Ryser kernel; n <= 10.
Complex naive_permanent(const ComplexMatrix& a);

/// Glynn's formula with Gray-coded sign vectors, a second independent
/// permanent kernel; n <= 24.
Complex glynn_permanent(const ComplexMatrix& a);

/// Brute-force signed permutation sum for the determinant; n <= 10.
Complex naive_determinant(const ComplexMatrix& a);

/// Coefficient tensor evaluated directly as the permutation sum
///   g(j) = sum_sigma sgn_{B/F}(sigma) prod_k W(rows[sigma(k)], d(k-1)+j_k),
/// bypassing the permanent/determinant kernels entirely. Empty rows means
/// the default (1, d+1, ..., (N-1)d+1); N <= 8.
CoefficientTensor permutation_sum_tensor(const ComplexMatrix& w, Species species, int d, int N,
                                         std::vector<int> source_rows = {});

/// Central finite differences of the coefficient map at W' (step h along
/// the real axis; the map is holomorphic, so this is the complex
/// derivative). Columns ordered as in analytic_jacobian.
ComplexMatrix finite_difference_jacobian(const ComplexMatrix& w_prime, Species species, int d,
                                         int N, double step = 1e-6);

/// Haar-random unitary via QR of a Ginibre matrix with phase fixing.
ComplexMatrix random_unitary(int n, std::uint64_t seed);

/// Random strictly sub-unitary matrix: U diag(s) V with s uniform in
/// (0, 1).
ComplexMatrix random_subunitary(int n, std::uint64_t seed);

/// iid standard complex Gaussian entries.
ComplexMatrix random_ginibre(int rows, int cols, std::uint64_t seed);

/// Completes a unit vector to a unitary whose FIRST ROW is the vector
/// (prepares |eps> from internal state 1 when used as an input local).
ComplexMatrix unitary_with_first_row(const ComplexVector& row);

}  // namespace iforge::oracles
