#include <iforge/amplitude.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace iforge {

namespace {

void require_square(const ComplexMatrix& a, const char* who) {
    if (a.rows() != a.cols()) {
        std::ostringstream msg;
        msg << who << ": matrix is " << a.rows() << "x" << a.cols() << ", expected square";
        throw std::invalid_argument(msg.str());
    }
}

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

}  // namespace

Complex permanent(const ComplexMatrix& a) {
    require_square(a, "permanent");
    const int n = static_cast<int>(a.rows());
    if (n == 0) return Complex(1.0, 0.0);
    if (n > 24) throw SizeLimitError("permanent: n > 24");
    if (n == 1) return a(0, 0);

    // Ryser: perm(A) = (-1)^n sum_{S != empty} (-1)^|S| prod_i sum_{j in S} A(i,j).
    // Gray-code order updates one column of the row-sum vector per subset.
    std::vector<Complex> row_sums(static_cast<std::size_t>(n), Complex(0.0, 0.0));
    Complex total(0.0, 0.0);
    const std::uint32_t end = std::uint32_t{1} << n;
    std::uint32_t gray = 0;
    for (std::uint32_t k = 1; k < end; ++k) {
        const int bit = std::countr_zero(k);
        const std::uint32_t next = gray ^ (std::uint32_t{1} << bit);
        if (next > gray) {
            for (int i = 0; i < n; ++i) row_sums[static_cast<std::size_t>(i)] += a(i, bit);
        } else {
            for (int i = 0; i < n; ++i) row_sums[static_cast<std::size_t>(i)] -= a(i, bit);
        }
        gray = next;
        Complex prod(1.0, 0.0);
        for (int i = 0; i < n; ++i) prod *= row_sums[static_cast<std::size_t>(i)];
        if (std::popcount(gray) & 1)
            total -= prod;
        else
            total += prod;
    }
    return (n % 2) ? -total : total;
}

Complex determinant(const ComplexMatrix& a) {
    require_square(a, "determinant");
    if (a.rows() == 0) return Complex(1.0, 0.0);
    return Eigen::PartialPivLU<ComplexMatrix>(a).determinant();
}

Complex matrix_function(const ComplexMatrix& a, Species species) {
    return species == Species::Boson ? permanent(a) : determinant(a);
}

CoefficientTensor coefficient_tensor(const ComplexMatrix& w, Species species, int d, int N,
                                     std::vector<int> source_rows) {
    if (source_rows.empty()) {
        source_rows.resize(static_cast<std::size_t>(N));
        for (int m = 0; m < N; ++m) source_rows[static_cast<std::size_t>(m)] = d * m + 1;
    }
    if (static_cast<int>(source_rows.size()) != N)
        throw std::invalid_argument("coefficient_tensor: need exactly N source rows");
    if (w.cols() < static_cast<Eigen::Index>(d) * N)
        throw std::invalid_argument("coefficient_tensor: W has fewer than d*N columns");
    for (int row : source_rows)
        if (row < 1 || row > w.rows())
            throw std::invalid_argument("coefficient_tensor: source row out of range");

    CoefficientTensor g(d, N);

    if (species == Species::Fermion) {
        auto sorted = source_rows;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            return g;  // Pauli: repeated source rows give the zero tensor
    }

    ComplexMatrix a(N, N);
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        const auto idx = g.multi_index(flat);
        for (int m = 0; m < N; ++m)
            for (int k = 0; k < N; ++k)
                a(m, k) = w(source_rows[static_cast<std::size_t>(m)] - 1,
                            d * k + idx[static_cast<std::size_t>(k)] - 1);
        g.amplitudes[static_cast<Eigen::Index>(flat)] = matrix_function(a, species);
    }
    return g;
}

std::vector<std::vector<int>> enumerate_occupations(int n_modes, int n_particles) {
    std::vector<std::vector<int>> all;
    std::vector<int> current(static_cast<std::size_t>(n_modes), 0);
    // Ascending lexicographic: fill from the last mode backwards.
    auto recurse = [&](auto&& self, int mode, int remaining) -> void {
        if (mode == n_modes - 1) {
            current[static_cast<std::size_t>(mode)] = remaining;
            all.push_back(current);
            return;
        }
        for (int c = 0; c <= remaining; ++c) {
            current[static_cast<std::size_t>(mode)] = c;
            self(self, mode + 1, remaining - c);
        }
    };
    if (n_modes > 0) recurse(recurse, 0, n_particles);
    return all;
}

FockSuperposition evolve_fock(const FockSuperposition& input, const ComplexMatrix& w,
                              Species species) {
    const int n_out = static_cast<int>(w.cols());
    const int N = input.particles;
    if (N > 8) throw SizeLimitError("evolve_fock: more than 8 particles");
    if (n_out > 16) throw SizeLimitError("evolve_fock: more than 16 output modes");
    if (input.n_modes > w.rows())
        throw std::invalid_argument("evolve_fock: W has fewer rows than input modes");

    struct PreparedTerm {
        std::vector<int> rows;  // 0-based input rows, one per particle
        Complex weight;         // amplitude / sqrt(prod s_j!)
        bool fermion_dead = false;
    };
    std::vector<PreparedTerm> prepared;
    prepared.reserve(input.terms.size());
    for (const auto& term : input.terms) {
        if (term.occupation.particles() != N)
            throw std::invalid_argument("evolve_fock: mixed particle numbers in superposition");
        PreparedTerm p;
        double s_fact = 1.0;
        for (int mode = 0; mode < term.occupation.modes(); ++mode) {
            const int count = term.occupation.counts[static_cast<std::size_t>(mode)];
            s_fact *= factorial(count);
            if (count >= 2 && species == Species::Fermion) p.fermion_dead = true;
            for (int c = 0; c < count; ++c) p.rows.push_back(mode);
        }
        p.weight = term.amplitude / std::sqrt(s_fact);
        prepared.push_back(std::move(p));
    }

    FockSuperposition output;
    output.n_modes = n_out;
    output.particles = N;

    ComplexMatrix a(N, N);
    std::vector<int> cols(static_cast<std::size_t>(N));
    for (const auto& occupation : enumerate_occupations(n_out, N)) {
        double r_fact = 1.0;
        bool multi = false;
        {
            int p = 0;
            for (int mode = 0; mode < n_out; ++mode) {
                const int count = occupation[static_cast<std::size_t>(mode)];
                r_fact *= factorial(count);
                if (count >= 2) multi = true;
                for (int c = 0; c < count; ++c) cols[static_cast<std::size_t>(p++)] = mode;
            }
        }
        Complex amp(0.0, 0.0);
        for (const auto& term : prepared) {
            if (species == Species::Fermion && (term.fermion_dead || multi)) continue;
            for (int m = 0; m < N; ++m)
                for (int k = 0; k < N; ++k)
                    a(m, k) = w(term.rows[static_cast<std::size_t>(m)],
                                cols[static_cast<std::size_t>(k)]);
            amp += term.weight * matrix_function(a, species);
        }
        amp /= std::sqrt(r_fact);
        output.terms.push_back({ModeOccupation{occupation}, amp});
    }
    return output;
}

PostSelection post_select(const FockSuperposition& state, int d, int N) {
    PostSelection result;
    FockSuperposition kept;
    kept.n_modes = state.n_modes;
    kept.particles = state.particles;
    for (const auto& term : state.terms) {
        if (!is_post_selected(term.occupation, d, N)) continue;
        kept.terms.push_back(term);
        result.success_probability += std::norm(term.amplitude);
    }
    result.tensor = omega_inverse(kept, d, N);
    return result;
}

Complex detection_overlap(const CoefficientTensor& signal, const ComplexMatrix& w,
                          const CoefficientTensor& target, Species species) {
    if (signal.d != target.d || signal.N != target.N)
        throw std::invalid_argument("detection_overlap: signal/target shapes differ");
    const Eigen::Index n = static_cast<Eigen::Index>(signal.d) * signal.N;
    if (w.rows() != n || w.cols() != n)
        throw std::invalid_argument("detection_overlap: W must be d*N x d*N");

    const FockSuperposition reversed = evolve_fock(omega_apply(target), w.adjoint(), species);
    CoefficientTensor produced(signal.d, signal.N);
    for (const auto& term : reversed.terms) {
        if (!is_post_selected(term.occupation, signal.d, signal.N)) continue;
        const auto assignment = occupation_to_assignment(term.occupation);
        produced.at(assignment_to_qudit_index(assignment, signal.d)) = term.amplitude;
    }
    return signal.amplitudes.dot(produced.amplitudes);  // conjugates the signal
}

ConditionalState conditional_state(const CoefficientTensor& g, const std::map<int, int>& fixed) {
    for (const auto& [party, outcome] : fixed) {
        if (party < 1 || party > g.N) throw std::invalid_argument("conditional_state: bad party index");
        if (outcome < 1 || outcome > g.d)
            throw std::invalid_argument("conditional_state: outcome out of 1..d");
    }
    const int remaining = g.N - static_cast<int>(fixed.size());
    if (remaining <= 0) throw std::invalid_argument("conditional_state: no parties left");

    ConditionalState result;
    result.tensor = CoefficientTensor(g.d, remaining);
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        const auto idx = g.multi_index(flat);
        bool matches = true;
        for (const auto& [party, outcome] : fixed)
            if (idx[static_cast<std::size_t>(party - 1)] != outcome) { matches = false; break; }
        if (!matches) continue;
        std::vector<int> rest;
        rest.reserve(static_cast<std::size_t>(remaining));
        for (int k = 1; k <= g.N; ++k)
            if (!fixed.count(k)) rest.push_back(idx[static_cast<std::size_t>(k - 1)]);
        result.tensor.at(rest) = g.amplitudes[static_cast<Eigen::Index>(flat)];
    }

    const double slice_norm = result.tensor.norm_squared();
    const double total_norm = g.norm_squared();
    if (slice_norm <= 0.0 || total_norm <= 0.0)
        throw std::domain_error("conditional_state: conditioning outcome has zero probability");
    result.probability = slice_norm / total_norm;
    result.tensor.amplitudes /= std::sqrt(slice_norm);
    return result;
}

CoefficientTensor canonical_phase(const CoefficientTensor& g) {
    const double max_abs = g.amplitudes.cwiseAbs().maxCoeff();
    CoefficientTensor out = g;
    if (max_abs <= 0.0) return out;
    for (Eigen::Index i = 0; i < g.amplitudes.size(); ++i) {
        const Complex amp = g.amplitudes[i];
        if (std::abs(amp) > 1e-12 * max_abs) {
            out.amplitudes *= std::conj(amp) / std::abs(amp);
            break;
        }
    }
    return out;
}

double fidelity(const CoefficientTensor& a, const CoefficientTensor& b) {
    if (a.d != b.d || a.N != b.N) throw std::invalid_argument("fidelity: shapes differ");
    const double na = a.norm_squared();
    const double nb = b.norm_squared();
    if (na <= 0.0 || nb <= 0.0) throw std::domain_error("fidelity: zero state");
    return std::norm(a.amplitudes.dot(b.amplitudes)) / (na * nb);
}

}  // namespace iforge
