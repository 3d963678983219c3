#pragma once

#include <iforge/types.hpp>

#include <cstdint>
#include <vector>

namespace iforge {

/// Factorization of the fermionic coefficient map: every coefficient is
/// the prefactor determinant D times a minor of the coordinate matrix C
/// that expresses the non-pivot columns of W' in the pivot-column basis.
/// For qubits C is N x N and the minors are principal; for general d the
/// matrix is (d-1)N x N and the minors pick row (k-1)(d-1) + (j_k - 1)
/// with column k for every party k with j_k > 1.
struct MinorDecomposition {
    Complex d_factor;              // determinant of the pivot-column matrix
    ComplexMatrix c;               // (d-1)N x N coordinate matrix
    std::vector<int> pivot_columns;  // 1-based columns of W' used as the basis
    bool rank_deficient = false;   // W' had rank < N; every coefficient vanishes
    bool pivot_fallback = false;   // default pivots were ill-conditioned
};

/// Decomposes an N x dN matrix W'. Default pivots are the columns
/// 1, d+1, ..., (N-1)d+1; if their condition number exceeds 1e12 the
/// pivots are re-chosen by column-pivoted QR.
MinorDecomposition decompose(const ComplexMatrix& w_prime, int d);

/// D * det(Cbar(j_1..j_N)) for a 1-based multi-index; equals the fermionic
/// coefficient tensor entry.
Complex reconstruct(const MinorDecomposition& decomposition, int d,
                    const std::vector<int>& multi_index);

/// Determinants of all 2^N principal submatrices of C, indexed by subset
/// bitmask (bit k-1 set means index k is kept); the empty minor is 1.
std::vector<Complex> principal_minors(const ComplexMatrix& c);

/// Jacobian rank of the map C -> (all nonempty principal minors) at
/// random Ginibre points; the generic value is N^2 - N + 1.
int minor_map_rank(int N, int trials, std::uint64_t seed);

struct SpanningMinor {
    std::vector<int> subset;  // 1-based indices of the principal submatrix
    Complex value;
};

/// The distinguished spanning family: all 1x1 minors, all 2x2 minors, and
/// the 3x3 minors containing index 1; N + N(N-1)/2 + (N-1)(N-2)/2 values.
std::vector<SpanningMinor> spanning_minors(const ComplexMatrix& c);

/// Rank of the minor-map Jacobian restricted to the spanning family.
int spanning_minor_rank(int N, int trials, std::uint64_t seed);

}  // namespace iforge
