#pragma once

#include <iforge/types.hpp>

#include <cstdint>
#include <vector>

namespace iforge {

/// Result of probing the dimensionality of the accessible-state manifold
/// at random scattering matrices via the rank of the coefficient Jacobian.
struct JacobianReport {
    int d = 0;
    int N = 0;
    Species species = Species::Boson;
    int rank = 0;
    std::vector<double> singular_values;  // spectrum of the achieving trial
    std::int64_t bound = 0;               // closed-form species bound
    int trials = 0;
    std::uint64_t seed = 0;
    bool rank_disagreement = false;  // trials disagreed; maximum was kept
};

/// Holomorphic Jacobian of the coefficient map W' -> g at W' (N x dN).
/// Rows index the d^N coefficients (row-major, j_1 most significant);
/// columns index W' entries (l, k) as (l-1)*dN + (k-1), l, k 1-based.
/// The (j, (l,k)) entry is the permanental minor (bosons) or the signed
/// cofactor (fermions) of the selected N x N submatrix, and zero when
/// column k is not selected by the multi-index j.
ComplexMatrix analytic_jacobian(const ComplexMatrix& w_prime, Species species, int d, int N);

/// Maximum Jacobian rank over `trials` independent Ginibre draws of W'.
/// Deterministic for a given seed.
JacobianReport manifold_rank(int d, int N, Species species, int trials, std::uint64_t seed);

/// dim(Xi_F) <= (d-1)N^2 - N + 2.
std::int64_t fermion_bound(int d, int N);

/// dim(Xi_B) <= dN^2 - 2N + 2 (meaningful only when <= d^N).
std::int64_t boson_bound(int d, int N);

struct LosslessParameterCount {
    std::int64_t twice_k = 0;  // 2K; K = (d - 1/2)N^2 - N/2 may be half-integer
    double k() const { return 0.5 * static_cast<double>(twice_k); }
    double boson_excess = 0.0;  // boson_bound - K: what loss buys for bosons
};

/// Euler-angle count of the W' block of a lossless (unitary) setup.
LosslessParameterCount lossless_parameter_count(int d, int N);

std::int64_t integer_power(std::int64_t base, int exponent);

struct Table2Cell {
    int d = 0;
    int N = 0;
};

struct Table2Row {
    int d = 0;
    int N = 0;
    Species species = Species::Boson;
    int rank = 0;
    std::int64_t bound = 0;
    std::int64_t dn_power = 0;
    bool tight = false;  // rank == min(bound, d^N)
    bool skipped = false;  // cell exceeded the size caps; rank is -1
    double seconds = 0.0;
    std::vector<double> singular_values;
};

/// Evaluates manifold_rank over the requested cells. Cells run in
/// parallel (bounded by max_threads; <= 0 means hardware concurrency);
/// results and per-cell seeding are independent of the schedule.
std::vector<Table2Row> table2(const std::vector<Table2Cell>& cells, Species species, int trials,
                              std::uint64_t seed, int max_threads = 0);

}  // namespace iforge
