#include <iforge/fock.hpp>

#include <numeric>
#include <sstream>

namespace iforge {

int ModeOccupation::particles() const {
    return std::accumulate(counts.begin(), counts.end(), 0);
}

CoefficientTensor::CoefficientTensor(int d_, int N_) : d(d_), N(N_) {
    if (d <= 0 || N <= 0) throw std::invalid_argument("CoefficientTensor: d and N must be positive");
    std::size_t len = 1;
    for (int k = 0; k < N; ++k) {
        len *= static_cast<std::size_t>(d);
        if (len > (std::size_t{1} << 28)) throw SizeLimitError("CoefficientTensor: d^N too large");
    }
    amplitudes = ComplexVector::Zero(static_cast<Eigen::Index>(len));
}

std::size_t CoefficientTensor::flat_index(const std::vector<int>& multi_index) const {
    if (static_cast<int>(multi_index.size()) != N)
        throw std::invalid_argument("CoefficientTensor: multi-index length != N");
    std::size_t flat = 0;
    for (int k = 0; k < N; ++k) {
        const int j = multi_index[static_cast<std::size_t>(k)];
        if (j < 1 || j > d) throw std::invalid_argument("CoefficientTensor: index out of 1..d");
        flat = flat * static_cast<std::size_t>(d) + static_cast<std::size_t>(j - 1);
    }
    return flat;
}

std::vector<int> CoefficientTensor::multi_index(std::size_t flat) const {
    std::vector<int> idx(static_cast<std::size_t>(N));
    for (int k = N - 1; k >= 0; --k) {
        idx[static_cast<std::size_t>(k)] = static_cast<int>(flat % static_cast<std::size_t>(d)) + 1;
        flat /= static_cast<std::size_t>(d);
    }
    return idx;
}

Complex& CoefficientTensor::at(const std::vector<int>& multi_index) {
    return amplitudes[static_cast<Eigen::Index>(flat_index(multi_index))];
}

Complex CoefficientTensor::at(const std::vector<int>& multi_index) const {
    return amplitudes[static_cast<Eigen::Index>(flat_index(multi_index))];
}

ModeAssignment occupation_to_assignment(const ModeOccupation& r) {
    ModeAssignment a;
    a.modes.reserve(static_cast<std::size_t>(r.particles()));
    for (int mode = 1; mode <= r.modes(); ++mode) {
        const int count = r.counts[static_cast<std::size_t>(mode - 1)];
        if (count < 0) throw std::invalid_argument("occupation_to_assignment: negative count");
        for (int c = 0; c < count; ++c) a.modes.push_back(mode);
    }
    return a;
}

ModeOccupation assignment_to_occupation(const ModeAssignment& a, int n_modes) {
    ModeOccupation r;
    r.counts.assign(static_cast<std::size_t>(n_modes), 0);
    for (int mode : a.modes) {
        if (mode < 1 || mode > n_modes)
            throw std::invalid_argument("assignment_to_occupation: mode out of range");
        ++r.counts[static_cast<std::size_t>(mode - 1)];
    }
    return r;
}

bool is_post_selected(const ModeOccupation& r, int d, int N) {
    if (r.modes() != d * N) {
        std::ostringstream msg;
        msg << "is_post_selected: occupation has " << r.modes() << " modes, expected d*N = " << d * N;
        throw std::invalid_argument(msg.str());
    }
    for (int k = 0; k < N; ++k) {
        int group = 0;
        for (int l = 0; l < d; ++l) group += r.counts[static_cast<std::size_t>(k * d + l)];
        if (group != 1) return false;
    }
    return true;
}

std::vector<int> assignment_to_qudit_index(const ModeAssignment& a, int d) {
    const int N = a.particles();
    std::vector<int> qudit(static_cast<std::size_t>(N));
    for (int k = 0; k < N; ++k) {
        const int j = a.modes[static_cast<std::size_t>(k)] - d * k;
        if (j < 1 || j > d)
            throw std::domain_error("assignment_to_qudit_index: state is not post-selected");
        qudit[static_cast<std::size_t>(k)] = j;
    }
    return qudit;
}

ModeAssignment qudit_index_to_assignment(const std::vector<int>& qudit_index, int d) {
    ModeAssignment a;
    a.modes.reserve(qudit_index.size());
    for (std::size_t k = 0; k < qudit_index.size(); ++k) {
        const int j = qudit_index[k];
        if (j < 1 || j > d) throw std::invalid_argument("qudit_index_to_assignment: index out of 1..d");
        a.modes.push_back(d * static_cast<int>(k) + j);
    }
    return a;
}

double FockSuperposition::norm_squared() const {
    double total = 0.0;
    for (const auto& term : terms) total += std::norm(term.amplitude);
    return total;
}

CoefficientTensor omega_inverse(const FockSuperposition& state, int d, int N) {
    CoefficientTensor tensor(d, N);
    for (const auto& term : state.terms) {
        if (!is_post_selected(term.occupation, d, N)) {
            if (std::abs(term.amplitude) > kAmplitudeZero)
                throw std::domain_error(
                    "omega_inverse: non-post-selected term with non-negligible amplitude "
                    "(apply the post-selection projector first)");
            continue;
        }
        const auto assignment = occupation_to_assignment(term.occupation);
        tensor.at(assignment_to_qudit_index(assignment, d)) = term.amplitude;
    }
    return tensor;
}

FockSuperposition omega_apply(const CoefficientTensor& tensor) {
    FockSuperposition state;
    state.n_modes = tensor.d * tensor.N;
    state.particles = tensor.N;
    for (std::size_t flat = 0; flat < tensor.size(); ++flat) {
        const Complex amp = tensor.amplitudes[static_cast<Eigen::Index>(flat)];
        if (amp == Complex(0.0, 0.0)) continue;
        const auto assignment = qudit_index_to_assignment(tensor.multi_index(flat), tensor.d);
        state.terms.push_back({assignment_to_occupation(assignment, state.n_modes), amp});
    }
    return state;
}

}  // namespace iforge
