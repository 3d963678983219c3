#include <iforge/entanglement.hpp>

#include <algorithm>
#include <numeric>

namespace iforge {

namespace {

std::int64_t factorial64(int n) {
    std::int64_t f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

ComplexMatrix matricize(const CoefficientTensor& g, const std::vector<int>& partition) {
    if (partition.empty()) throw std::invalid_argument("bipartite_rank: empty partition");
    std::vector<bool> in_partition(static_cast<std::size_t>(g.N), false);
    for (int party : partition) {
        if (party < 1 || party > g.N)
            throw std::invalid_argument("bipartite_rank: party index out of range");
        if (in_partition[static_cast<std::size_t>(party - 1)])
            throw std::invalid_argument("bipartite_rank: repeated party in partition");
        in_partition[static_cast<std::size_t>(party - 1)] = true;
    }
    if (static_cast<int>(partition.size()) == g.N)
        throw std::invalid_argument("bipartite_rank: partition must be a proper subset");

    std::vector<int> left, right;
    for (int k = 1; k <= g.N; ++k)
        (in_partition[static_cast<std::size_t>(k - 1)] ? left : right).push_back(k);

    Eigen::Index rows = 1, cols = 1;
    for (std::size_t i = 0; i < left.size(); ++i) rows *= g.d;
    for (std::size_t i = 0; i < right.size(); ++i) cols *= g.d;

    ComplexMatrix m(rows, cols);
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        const auto idx = g.multi_index(flat);
        Eigen::Index r = 0, c = 0;
        for (int party : left) r = r * g.d + (idx[static_cast<std::size_t>(party - 1)] - 1);
        for (int party : right) c = c * g.d + (idx[static_cast<std::size_t>(party - 1)] - 1);
        m(r, c) = g.amplitudes[static_cast<Eigen::Index>(flat)];
    }
    return m;
}

// All proper subsets of {1..N} containing party 1, in lexicographic order
// of their sorted element lists.
void enumerate_bipartitions(int N, const std::function<void(const std::vector<int>&)>& visit) {
    std::vector<int> subset{1};
    auto recurse = [&](auto&& self, int next) -> void {
        if (static_cast<int>(subset.size()) < N) visit(subset);
        for (int k = next; k <= N; ++k) {
            subset.push_back(k);
            self(self, k + 1);
            subset.pop_back();
        }
    };
    recurse(recurse, 2);
}

}  // namespace

std::int64_t combinatorial_bound(int N, const ModeOccupation& input_occupation,
                                 std::int64_t input_rank) {
    if (input_rank < 1) throw std::invalid_argument("combinatorial_bound: input_rank must be >= 1");
    if (input_occupation.particles() != N)
        throw std::invalid_argument("combinatorial_bound: occupation does not sum to N");
    std::int64_t bound = input_rank * factorial64(N);
    for (int count : input_occupation.counts) bound /= factorial64(count);
    return bound;
}

std::vector<double> bipartite_spectrum(const CoefficientTensor& g,
                                       const std::vector<int>& partition) {
    const ComplexMatrix m = matricize(g, partition);
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    const RealVector sigma = svd.singularValues();
    return {sigma.data(), sigma.data() + sigma.size()};
}

int bipartite_rank(const CoefficientTensor& g, const std::vector<int>& partition,
                   double tolerance) {
    const auto sigma = bipartite_spectrum(g, partition);
    if (sigma.empty() || sigma.front() <= 0.0)
        throw std::domain_error("bipartite_rank: zero tensor has no defined rank");
    const double cutoff = tolerance * sigma.front();
    int rank = 0;
    for (double s : sigma)
        if (s > cutoff) ++rank;
    return rank;
}

MaxBipartiteRank max_bipartite_rank(const CoefficientTensor& g, double tolerance) {
    if (g.N > 12) throw SizeLimitError("max_bipartite_rank: N > 12");
    if (g.N < 2) throw std::invalid_argument("max_bipartite_rank: need at least two parties");
    MaxBipartiteRank best;
    enumerate_bipartitions(g.N, [&](const std::vector<int>& subset) {
        const int rank = bipartite_rank(g, subset, tolerance);
        if (rank > best.rank) {
            best.rank = rank;
            best.partition = subset;
        }
    });
    return best;
}

RankReport rank_report(const CoefficientTensor& g, std::int64_t combinatorial_upper,
                       std::int64_t input_rank_factor, double tolerance) {
    RankReport report;
    report.combinatorial_upper = combinatorial_upper;
    report.input_rank_factor = input_rank_factor;
    enumerate_bipartitions(g.N, [&](const std::vector<int>& subset) {
        RankReport::Spectrum spectrum;
        spectrum.partition = subset;
        spectrum.singular_values = bipartite_spectrum(g, subset);
        const double top = spectrum.singular_values.empty() ? 0.0 : spectrum.singular_values.front();
        if (top > 0.0) {
            int rank = 0;
            for (double s : spectrum.singular_values)
                if (s > tolerance * top) ++rank;
            if (rank > report.bipartite_lower) {
                report.bipartite_lower = rank;
                report.bipartition_achieving_lower = subset;
            }
        }
        report.spectra.push_back(std::move(spectrum));
    });
    return report;
}

PermutationRepresentation permutation_representation(
    const ComplexMatrix& v, const std::vector<ComplexVector>& internal_states, Species species) {
    const int N = static_cast<int>(v.rows());
    if (v.cols() != N) throw std::invalid_argument("permutation_representation: V must be square");
    if (static_cast<int>(internal_states.size()) != N)
        throw std::invalid_argument("permutation_representation: need N internal states");
    if (N > 8) throw SizeLimitError("permutation_representation: N > 8");
    const int d = internal_states.empty() ? 0 : static_cast<int>(internal_states.front().size());
    for (const auto& eps : internal_states)
        if (static_cast<int>(eps.size()) != d)
            throw std::invalid_argument("permutation_representation: internal states differ in dimension");

    PermutationRepresentation rep;
    rep.materialized = CoefficientTensor(d, N);

    Permutation sigma(static_cast<std::size_t>(N));
    std::iota(sigma.begin(), sigma.end(), 1);
    std::vector<int> scratch;
    do {
        // sgn via explicit inversion count; cheap at these sizes.
        int inversions = 0;
        for (int i = 0; i < N; ++i)
            for (int j = i + 1; j < N; ++j)
                if (sigma[static_cast<std::size_t>(i)] > sigma[static_cast<std::size_t>(j)]) ++inversions;
        Complex coeff = (species == Species::Fermion && (inversions & 1)) ? Complex(-1.0, 0.0)
                                                                          : Complex(1.0, 0.0);
        for (int j = 0; j < N; ++j) coeff *= v(sigma[static_cast<std::size_t>(j)] - 1, j);

        rep.permutations.push_back(sigma);
        rep.coefficients.push_back(coeff);

        for (std::size_t flat = 0; flat < rep.materialized.size(); ++flat) {
            const auto idx = rep.materialized.multi_index(flat);
            Complex product = coeff;
            for (int k = 0; k < N; ++k)
                product *= internal_states[static_cast<std::size_t>(
                    sigma[static_cast<std::size_t>(k)] - 1)](idx[static_cast<std::size_t>(k)] - 1);
            rep.materialized.amplitudes[static_cast<Eigen::Index>(flat)] += product;
        }
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return rep;
}

}  // namespace iforge
