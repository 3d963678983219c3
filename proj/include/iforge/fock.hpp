#pragma once

#include <iforge/types.hpp>

#include <vector>

namespace iforge {

/// Particle count per physical mode. For the N-qudit interpretation the
/// n = d*N modes are read in groups of d: modes d*(k-1)+1 .. d*k belong
/// to party k. Modes are 1-based throughout the public interface.
struct ModeOccupation {
    std::vector<int> counts;

    int modes() const { return static_cast<int>(counts.size()); }
    int particles() const;
};

/// Sorted (nondecreasing) list of the occupied modes, one entry per
/// particle. Equivalent description to ModeOccupation.
struct ModeAssignment {
    std::vector<int> modes;

    int particles() const { return static_cast<int>(modes.size()); }
};

/// Dense rank-N coefficient tensor of an N-qudit state, d^N complex
/// amplitudes stored row-major with j_1 the most significant index.
/// Qudit indices j_k are 1-based.
struct CoefficientTensor {
    int d = 0;
    int N = 0;
    ComplexVector amplitudes;

    CoefficientTensor() = default;
    CoefficientTensor(int d_, int N_);

    std::size_t size() const { return static_cast<std::size_t>(amplitudes.size()); }
    double norm_squared() const { return amplitudes.squaredNorm(); }

    /// Flat offset of a 1-based multi-index (j_1, ..., j_N).
    std::size_t flat_index(const std::vector<int>& multi_index) const;
    /// Inverse of flat_index.
    std::vector<int> multi_index(std::size_t flat) const;

    Complex& at(const std::vector<int>& multi_index);
    Complex at(const std::vector<int>& multi_index) const;
};

ModeAssignment occupation_to_assignment(const ModeOccupation& r);
ModeOccupation assignment_to_occupation(const ModeAssignment& a, int n_modes);

/// True iff every group of d consecutive modes holds exactly one particle,
/// i.e. the state admits an N-qudit reading. counts.size() must be d*N.
bool is_post_selected(const ModeOccupation& r, int d, int N);

/// Internal-state labels (j_1, ..., j_N) of a post-selected assignment:
/// j_k = a_k - d*(k-1). Throws std::domain_error when the assignment is
/// not one-per-group.
std::vector<int> assignment_to_qudit_index(const ModeAssignment& a, int d);

/// Inverse embedding: party k in internal state j_k occupies mode d*(k-1)+j_k.
ModeAssignment qudit_index_to_assignment(const std::vector<int>& qudit_index, int d);

struct FockTerm {
    ModeOccupation occupation;
    Complex amplitude;
};

/// General second-quantized state: a superposition of Fock terms over
/// n_modes modes, all with the same total particle number.
struct FockSuperposition {
    int n_modes = 0;
    int particles = 0;
    std::vector<FockTerm> terms;

    double norm_squared() const;
};

/// Reads a post-selected superposition back into qudit coefficients.
/// Terms that fail post-selection must carry amplitude below the zero
/// threshold (they should have been projected out); otherwise a
/// std::domain_error reports the missing projection. Norm preserving.
CoefficientTensor omega_inverse(const FockSuperposition& state, int d, int N);

/// Embeds an N-qudit tensor as the corresponding post-selected Fock
/// superposition (one particle per group of d modes).
FockSuperposition omega_apply(const CoefficientTensor& tensor);

}  // namespace iforge
