#pragma once

#include <iforge/fock.hpp>
#include <iforge/types.hpp>

#include <cstdint>
#include <vector>

namespace iforge {

/// Certified sandwich around the generalized Schmidt rank of a generated
/// state: the combinatorial path-counting upper bound and the best
/// bipartite matricization rank found (a lower bound).
struct RankReport {
    std::int64_t combinatorial_upper = 0;
    int bipartite_lower = 0;
    std::vector<int> bipartition_achieving_lower;  // 1-based parties
    std::int64_t input_rank_factor = 1;

    struct Spectrum {
        std::vector<int> partition;
        std::vector<double> singular_values;
    };
    std::vector<Spectrum> spectra;
};

/// Path-counting bound input_rank * N! / prod_j r_j! : each distinct
/// many-particle path contributes at most one separable term, and
/// permutations of identically prepared particles repeat paths.
std::int64_t combinatorial_bound(int N, const ModeOccupation& input_occupation,
                                 std::int64_t input_rank);

/// Rank of the matricization of g across (partition | complement),
/// counting singular values above tolerance * sigma_max. The partition is
/// a set of 1-based party indices.
int bipartite_rank(const CoefficientTensor& g, const std::vector<int>& partition,
                   double tolerance = kRankTolerance);

/// The singular values themselves, largest first.
std::vector<double> bipartite_spectrum(const CoefficientTensor& g,
                                       const std::vector<int>& partition);

struct MaxBipartiteRank {
    int rank = 0;
    std::vector<int> partition;  // lexicographically first achiever containing party 1
};

/// Maximum of bipartite_rank over all 2^(N-1) - 1 bipartitions.
MaxBipartiteRank max_bipartite_rank(const CoefficientTensor& g,
                                    double tolerance = kRankTolerance);

/// RankReport computed from a generated tensor plus the input-side data.
RankReport rank_report(const CoefficientTensor& g, std::int64_t combinatorial_upper,
                       std::int64_t input_rank_factor, double tolerance = kRankTolerance);

/// One permutation of 1..N as its image list (1-based).
using Permutation = std::vector<int>;

/// Final state of a non-polarizing setup as a sum over many-particle
/// paths: coefficient(sigma) = sgn_{B/F}(sigma) * prod_j V(sigma(j), j),
/// one term per permutation, each placing the prepared internal states
/// (epsilon_1..epsilon_N) permuted across the N output parties.
struct PermutationRepresentation {
    std::vector<Permutation> permutations;  // lexicographic order
    std::vector<Complex> coefficients;
    CoefficientTensor materialized;  // sum_sigma coeff * (x)_k |eps_sigma(k)>
};

PermutationRepresentation permutation_representation(
    const ComplexMatrix& v, const std::vector<ComplexVector>& internal_states, Species species);

}  // namespace iforge
