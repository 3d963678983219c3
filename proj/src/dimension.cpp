#include <iforge/dimension.hpp>

#include <iforge/amplitude.hpp>

#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

namespace iforge {

namespace {

// Minor with one row and one column struck out.
template <typename Matrix>
Matrix strike(const Matrix& a, Eigen::Index row, Eigen::Index col) {
    Matrix m(a.rows() - 1, a.cols() - 1);
    for (Eigen::Index i = 0, mi = 0; i < a.rows(); ++i) {
        if (i == row) continue;
        for (Eigen::Index j = 0, mj = 0; j < a.cols(); ++j) {
            if (j == col) continue;
            m(mi, mj) = a(i, j);
            ++mj;
        }
        ++mi;
    }
    return m;
}

template <typename Scalar>
Scalar permanent_generic(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a) {
    const int n = static_cast<int>(a.rows());
    if (n == 0) return Scalar(1);
    std::vector<Scalar> row_sums(static_cast<std::size_t>(n), Scalar(0));
    Scalar total(0);
    const std::uint32_t end = std::uint32_t{1} << n;
    std::uint32_t gray = 0;
    for (std::uint32_t k = 1; k < end; ++k) {
        const int bit = std::countr_zero(k);
        const std::uint32_t next = gray ^ (std::uint32_t{1} << bit);
        if (next > gray)
            for (int i = 0; i < n; ++i) row_sums[static_cast<std::size_t>(i)] += a(i, bit);
        else
            for (int i = 0; i < n; ++i) row_sums[static_cast<std::size_t>(i)] -= a(i, bit);
        gray = next;
        Scalar prod(1);
        for (int i = 0; i < n; ++i) prod *= row_sums[static_cast<std::size_t>(i)];
        if (std::popcount(gray) & 1)
            total -= prod;
        else
            total += prod;
    }
    return (n % 2) ? Scalar(-total) : total;
}

template <typename Scalar>
Scalar determinant_generic(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a) {
    if (a.rows() == 0) return Scalar(1);
    return Eigen::PartialPivLU<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>(a)
        .determinant();
}

// Jacobian assembly over an arbitrary complex scalar so borderline ranks
// can be re-evaluated in extended precision.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> assemble_jacobian(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& w_prime, Species species, int d,
    int N) {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const Eigen::Index dn = static_cast<Eigen::Index>(d) * N;
    std::size_t outputs = 1;
    for (int k = 0; k < N; ++k) outputs *= static_cast<std::size_t>(d);

    Matrix jac = Matrix::Zero(static_cast<Eigen::Index>(outputs),
                              static_cast<Eigen::Index>(N) * dn);
    std::vector<int> idx(static_cast<std::size_t>(N), 1);
    Matrix a(N, N);
    for (std::size_t flat = 0; flat < outputs; ++flat) {
        {
            std::size_t rest = flat;
            for (int k = N - 1; k >= 0; --k) {
                idx[static_cast<std::size_t>(k)] = static_cast<int>(rest % static_cast<std::size_t>(d)) + 1;
                rest /= static_cast<std::size_t>(d);
            }
        }
        for (int m = 0; m < N; ++m)
            for (int k = 0; k < N; ++k)
                a(m, k) = w_prime(m, static_cast<Eigen::Index>(d) * k +
                                         idx[static_cast<std::size_t>(k)] - 1);
        for (int l = 0; l < N; ++l) {
            for (int party = 0; party < N; ++party) {
                const Eigen::Index col_w =
                    static_cast<Eigen::Index>(d) * party + idx[static_cast<std::size_t>(party)] - 1;
                const Matrix minor = strike(a, l, party);
                Scalar value = species == Species::Boson ? permanent_generic<Scalar>(minor)
                                                         : determinant_generic<Scalar>(minor);
                if (species == Species::Fermion && ((l + party) & 1)) value = -value;
                jac(static_cast<Eigen::Index>(flat), static_cast<Eigen::Index>(l) * dn + col_w) =
                    value;
            }
        }
    }
    return jac;
}

struct RankResult {
    int rank = 0;
    std::vector<double> spectrum;
};

RankResult spectrum_rank(const std::vector<double>& sigma) {
    RankResult result;
    result.spectrum = sigma;
    if (sigma.empty() || sigma.front() <= 0.0) return result;
    const double cutoff = kRankTolerance * sigma.front();
    for (double s : sigma)
        if (s > cutoff) ++result.rank;
    return result;
}

bool borderline(const std::vector<double>& sigma) {
    if (sigma.empty() || sigma.front() <= 0.0) return false;
    for (double s : sigma) {
        const double ratio = s / sigma.front();
        if (ratio > kRankTolerance * 0.1 && ratio < kRankTolerance * 10.0) return true;
    }
    return false;
}

RankResult jacobian_rank(const ComplexMatrix& w_prime, Species species, int d, int N) {
    const ComplexMatrix jac = assemble_jacobian<Complex>(w_prime, species, d, N);
    Eigen::JacobiSVD<ComplexMatrix> svd(jac);
    std::vector<double> sigma(svd.singularValues().data(),
                              svd.singularValues().data() + svd.singularValues().size());
    if (borderline(sigma)) {
        // Redo the assembly and factorization in extended precision before
        // trusting a rank that sits near the cutoff.
        using LongComplex = std::complex<long double>;
        using LongMatrix = Eigen::Matrix<LongComplex, Eigen::Dynamic, Eigen::Dynamic>;
        LongMatrix wl = w_prime.cast<LongComplex>();
        const LongMatrix jl = assemble_jacobian<LongComplex>(wl, species, d, N);
        Eigen::JacobiSVD<LongMatrix> svdl(jl);
        sigma.assign(svdl.singularValues().size(), 0.0);
        for (Eigen::Index i = 0; i < svdl.singularValues().size(); ++i)
            sigma[static_cast<std::size_t>(i)] = static_cast<double>(svdl.singularValues()(i));
    }
    return spectrum_rank(sigma);
}

ComplexMatrix ginibre(int rows, int cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            m(i, j) = Complex(re, im);
        }
    return m;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    // splitmix64 step, so per-cell streams are decorrelated.
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

namespace {

void check_jacobian_size(int d, int N) {
    if (d < 1 || N < 1) throw std::invalid_argument("jacobian: d and N must be positive");
    if (N > 8 || d > 5) throw SizeLimitError("jacobian: supported sizes are N <= 8, d <= 5");
}

}  // namespace

ComplexMatrix analytic_jacobian(const ComplexMatrix& w_prime, Species species, int d, int N) {
    check_jacobian_size(d, N);
    if (w_prime.rows() != N || w_prime.cols() != static_cast<Eigen::Index>(d) * N)
        throw std::invalid_argument("analytic_jacobian: W' must be N x dN");
    return assemble_jacobian<Complex>(w_prime, species, d, N);
}

JacobianReport manifold_rank(int d, int N, Species species, int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("manifold_rank: trials must be >= 1");
    check_jacobian_size(d, N);
    JacobianReport report;
    report.d = d;
    report.N = N;
    report.species = species;
    report.trials = trials;
    report.seed = seed;
    report.bound = species == Species::Boson ? boson_bound(d, N) : fermion_bound(d, N);

    int first_rank = -1;
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t cell_seed = mix_seed(
            seed, (static_cast<std::uint64_t>(d) << 40) ^ (static_cast<std::uint64_t>(N) << 24) ^
                      (species == Species::Boson ? 0x1000000ULL : 0x2000000ULL) ^
                      static_cast<std::uint64_t>(t));
        const ComplexMatrix w_prime = ginibre(N, d * N, cell_seed);
        const RankResult result = jacobian_rank(w_prime, species, d, N);
        if (first_rank < 0) first_rank = result.rank;
        if (result.rank != first_rank) report.rank_disagreement = true;
        if (result.rank > report.rank) {
            report.rank = result.rank;
            report.singular_values = result.spectrum;
        }
    }
    return report;
}

std::int64_t fermion_bound(int d, int N) {
    if (d < 2 || N < 2) throw std::invalid_argument("fermion_bound: need d >= 2, N >= 2");
    const std::int64_t dd = d, nn = N;
    return (dd - 1) * nn * nn - nn + 2;
}

std::int64_t boson_bound(int d, int N) {
    if (d < 2 || N < 2) throw std::invalid_argument("boson_bound: need d >= 2, N >= 2");
    const std::int64_t dd = d, nn = N;
    return dd * nn * nn - 2 * nn + 2;
}

LosslessParameterCount lossless_parameter_count(int d, int N) {
    if (d < 2 || N < 2) throw std::invalid_argument("lossless_parameter_count: need d >= 2, N >= 2");
    LosslessParameterCount result;
    const std::int64_t dd = d, nn = N;
    result.twice_k = (2 * dd - 1) * nn * nn - nn;
    result.boson_excess = static_cast<double>(boson_bound(d, N)) - result.k();
    return result;
}

std::int64_t integer_power(std::int64_t base, int exponent) {
    std::int64_t value = 1;
    for (int k = 0; k < exponent; ++k) value *= base;
    return value;
}

std::vector<Table2Row> table2(const std::vector<Table2Cell>& cells, Species species, int trials,
                              std::uint64_t seed, int max_threads) {
    std::vector<Table2Row> rows(cells.size());

    int hardware = static_cast<int>(std::thread::hardware_concurrency());
    if (hardware < 1) hardware = 1;
    int threads = max_threads > 0 ? max_threads : hardware;
    if (const char* env = std::getenv("IFORGE_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) threads = std::min(threads, cap);
    }
    threads = std::min<int>(threads, static_cast<int>(cells.size()));
    if (threads < 1) threads = 1;

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) break;
            Table2Row row;
            row.d = cells[i].d;
            row.N = cells[i].N;
            row.species = species;
            row.dn_power = integer_power(cells[i].d, cells[i].N);
            const auto start = std::chrono::steady_clock::now();
            try {
                const JacobianReport report =
                    manifold_rank(cells[i].d, cells[i].N, species, trials, seed);
                row.rank = report.rank;
                row.bound = report.bound;
                row.tight = report.rank == std::min(row.bound, row.dn_power);
                row.singular_values = report.singular_values;
            } catch (const SizeLimitError&) {
                row.rank = -1;
                row.bound = species == Species::Boson ? boson_bound(cells[i].d, cells[i].N)
                                                      : fermion_bound(cells[i].d, cells[i].N);
                row.skipped = true;
            }
            const auto stop = std::chrono::steady_clock::now();
            row.seconds = std::chrono::duration<double>(stop - start).count();
            rows[i] = std::move(row);
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return rows;
}

}  // namespace iforge
