#pragma once

#include <iforge/fock.hpp>
#include <iforge/types.hpp>

#include <map>
#include <utility>
#include <vector>

namespace iforge {

/// Permanent via Ryser's inclusion-exclusion formula with Gray-code
/// subset iteration, O(2^n * n). Hard cap n <= 24.
Complex permanent(const ComplexMatrix& a);

/// Determinant via pivoted LU.
Complex determinant(const ComplexMatrix& a);

/// perm(a) for bosons, det(a) for fermions.
Complex matrix_function(const ComplexMatrix& a, Species species);

/// Unnormalized coefficient tensor g of the post-selected N-qudit state
/// produced by scattering N particles (one per row in source_rows, each
/// entering in internal state 1) through W. Entry (j_1,...,j_N) is the
/// permanent/determinant of the N x N matrix A with
///   A(m,k) = W(source_rows[m], d*(k-1) + j_k).
/// source_rows are 1-based; empty means the default (1, d+1, ..., (N-1)d+1).
/// Repeated source rows model multiply occupied sources; for fermions the
/// result is then identically zero.
CoefficientTensor coefficient_tensor(const ComplexMatrix& w, Species species, int d, int N,
                                     std::vector<int> source_rows = {});

/// Scatters a Fock superposition through the single-particle matrix W
/// (rows = input modes, columns = output modes) and returns the full
/// output superposition over all occupations of the output modes, in
/// ascending lexicographic occupation order. Amplitudes follow
///   amp(rbar) = sum_terms amp_in * f(A) / sqrt(prod s_j! * prod rbar_l!)
/// with f the permanent or determinant of the matrix with one row per
/// input particle and one column per output particle.
/// Limits: particles <= 8, output modes <= 16.
FockSuperposition evolve_fock(const FockSuperposition& input, const ComplexMatrix& w,
                              Species species);

struct PostSelection {
    CoefficientTensor tensor;       // unnormalized
    double success_probability = 0.0;
};

/// Keeps the one-particle-per-group components of a (normalized) output
/// state and reads them back as qudit coefficients. The discarded norm is
/// the post-selection failure probability.
PostSelection post_select(const FockSuperposition& state, int d, int N);

/// Overlap <Psi(signal)| M(W^dagger) |Psi(target)>: the amplitude for the
/// target state, scattered backwards through the setup, to produce the
/// (separable) signal state. W must be square with d*N rows.
Complex detection_overlap(const CoefficientTensor& signal, const ComplexMatrix& w,
                          const CoefficientTensor& target, Species species);

struct ConditionalState {
    CoefficientTensor tensor;       // normalized over the remaining parties
    double probability = 0.0;       // |slice|^2 / |g|^2
};

/// Projects the listed parties onto fixed internal outcomes (1-based) and
/// renormalizes the remaining ones. Throws std::domain_error if the slice
/// has zero norm.
ConditionalState conditional_state(const CoefficientTensor& g, const std::map<int, int>& fixed);

/// Rotates the global phase so the first (lexicographic) non-negligible
/// amplitude is real positive. States are physical up to this phase.
CoefficientTensor canonical_phase(const CoefficientTensor& g);

/// |<a|b>|^2 for the normalized versions of a and b (phase invariant).
double fidelity(const CoefficientTensor& a, const CoefficientTensor& b);

/// All occupations of n_modes modes by n_particles particles, ascending
/// lexicographic. Shared by the evolution kernel and the CLI reports.
std::vector<std::vector<int>> enumerate_occupations(int n_modes, int n_particles);

}  // namespace iforge
