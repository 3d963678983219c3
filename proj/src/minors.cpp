#include <iforge/minors.hpp>

#include <iforge/amplitude.hpp>

#include <algorithm>
#include <random>

namespace iforge {

namespace {

constexpr double kConditionGuard = 1e12;

ComplexMatrix submatrix(const ComplexMatrix& c, const std::vector<int>& rows,
                        const std::vector<int>& cols) {
    ComplexMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                c(rows[i] - 1, cols[j] - 1);
    return m;
}

std::vector<int> mask_to_subset(std::uint32_t mask) {
    std::vector<int> subset;
    for (int k = 0; mask; ++k, mask >>= 1)
        if (mask & 1) subset.push_back(k + 1);
    return subset;
}

ComplexMatrix ginibre(int rows, int cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
    return m;
}

// d(det C[S,S])/dC(a,b): cofactor within the submatrix, zero when a or b
// is outside S. Rows of the Jacobian are the nonempty principal minors.
ComplexMatrix minor_map_jacobian(const ComplexMatrix& c) {
    const int n = static_cast<int>(c.rows());
    const std::uint32_t subsets = std::uint32_t{1} << n;
    ComplexMatrix jac = ComplexMatrix::Zero(static_cast<Eigen::Index>(subsets - 1),
                                            static_cast<Eigen::Index>(n) * n);
    for (std::uint32_t mask = 1; mask < subsets; ++mask) {
        const auto subset = mask_to_subset(mask);
        const int m = static_cast<int>(subset.size());
        for (int ia = 0; ia < m; ++ia) {
            for (int ib = 0; ib < m; ++ib) {
                std::vector<int> rows, cols;
                for (int i = 0; i < m; ++i) {
                    if (i != ia) rows.push_back(subset[static_cast<std::size_t>(i)]);
                    if (i != ib) cols.push_back(subset[static_cast<std::size_t>(i)]);
                }
                Complex value = determinant(submatrix(c, rows, cols));
                if ((ia + ib) & 1) value = -value;
                const int a = subset[static_cast<std::size_t>(ia)];
                const int b = subset[static_cast<std::size_t>(ib)];
                jac(static_cast<Eigen::Index>(mask - 1),
                    static_cast<Eigen::Index>(b - 1) * n + (a - 1)) = value;
            }
        }
    }
    return jac;
}

int svd_rank(const ComplexMatrix& m) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    const RealVector sigma = svd.singularValues();
    if (sigma.size() == 0 || sigma(0) <= 0.0) return 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        if (sigma(i) > kRankTolerance * sigma(0)) ++rank;
    return rank;
}

std::vector<std::vector<int>> spanning_subsets(int n) {
    std::vector<std::vector<int>> subsets;
    for (int i = 1; i <= n; ++i) subsets.push_back({i});
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) subsets.push_back({i, j});
    for (int j = 2; j <= n; ++j)
        for (int k = j + 1; k <= n; ++k) subsets.push_back({1, j, k});
    return subsets;
}

}  // namespace

MinorDecomposition decompose(const ComplexMatrix& w_prime, int d) {
    const int n_particles = static_cast<int>(w_prime.rows());
    if (d < 2) throw std::invalid_argument("decompose: need d >= 2");
    if (w_prime.cols() != static_cast<Eigen::Index>(d) * n_particles)
        throw std::invalid_argument("decompose: W' must be N x dN");

    MinorDecomposition result;
    result.pivot_columns.resize(static_cast<std::size_t>(n_particles));
    for (int k = 0; k < n_particles; ++k)
        result.pivot_columns[static_cast<std::size_t>(k)] = d * k + 1;

    auto pivot_matrix = [&](const std::vector<int>& pivots) {
        ComplexMatrix p(n_particles, n_particles);
        for (int k = 0; k < n_particles; ++k)
            p.col(k) = w_prime.col(pivots[static_cast<std::size_t>(k)] - 1);
        return p;
    };

    ComplexMatrix p = pivot_matrix(result.pivot_columns);
    Eigen::JacobiSVD<ComplexMatrix> svd(p);
    const RealVector sigma = svd.singularValues();
    const bool default_ok =
        sigma(sigma.size() - 1) > 0.0 && sigma(0) / sigma(sigma.size() - 1) < kConditionGuard;

    if (!default_ok) {
        // The default basis is (near-)singular; let column-pivoted QR of the
        // whole W' pick a well-conditioned basis instead.
        Eigen::ColPivHouseholderQR<ComplexMatrix> qr(w_prime);
        if (qr.rank() < n_particles) {
            result.rank_deficient = true;
            result.d_factor = Complex(0.0, 0.0);
            result.pivot_columns.clear();
            return result;
        }
        result.pivot_fallback = true;
        const auto& perm = qr.colsPermutation().indices();
        for (int k = 0; k < n_particles; ++k)
            result.pivot_columns[static_cast<std::size_t>(k)] = perm(k) + 1;
        std::sort(result.pivot_columns.begin(), result.pivot_columns.end());
        p = pivot_matrix(result.pivot_columns);
    }

    result.d_factor = determinant(p);
    Eigen::PartialPivLU<ComplexMatrix> lu(p);

    result.c = ComplexMatrix((static_cast<Eigen::Index>(d) - 1) * n_particles, n_particles);
    std::vector<bool> is_pivot(static_cast<std::size_t>(d) * n_particles, false);
    for (int col : result.pivot_columns) is_pivot[static_cast<std::size_t>(col - 1)] = true;
    Eigen::Index row = 0;
    for (int col = 1; col <= d * n_particles; ++col) {
        if (is_pivot[static_cast<std::size_t>(col - 1)]) continue;
        result.c.row(row) = lu.solve(w_prime.col(col - 1)).transpose();
        ++row;
    }
    return result;
}

Complex reconstruct(const MinorDecomposition& decomposition, int d,
                    const std::vector<int>& multi_index) {
    if (decomposition.rank_deficient) return Complex(0.0, 0.0);
    const int n_particles = static_cast<int>(decomposition.c.cols());
    if (static_cast<int>(multi_index.size()) != n_particles)
        throw std::invalid_argument("reconstruct: multi-index length mismatch");

    // Coordinates of column m of W' in the pivot basis: a unit vector for a
    // pivot column, a stored row of C otherwise. The selected-column
    // determinant factors as D times the determinant of these coordinates;
    // with the default pivots this is exactly the principal-minor form.
    std::vector<int> pivot_pos(static_cast<std::size_t>(d) * n_particles, 0);
    std::vector<int> c_row(static_cast<std::size_t>(d) * n_particles, 0);
    for (int p = 0; p < n_particles; ++p)
        pivot_pos[static_cast<std::size_t>(decomposition.pivot_columns[static_cast<std::size_t>(p)] - 1)] =
            p + 1;
    for (int col = 1, row = 1; col <= d * n_particles; ++col)
        if (pivot_pos[static_cast<std::size_t>(col - 1)] == 0) c_row[static_cast<std::size_t>(col - 1)] = row++;

    ComplexMatrix b = ComplexMatrix::Zero(n_particles, n_particles);
    for (int k = 0; k < n_particles; ++k) {
        const int jk = multi_index[static_cast<std::size_t>(k)];
        if (jk < 1 || jk > d) throw std::invalid_argument("reconstruct: index out of 1..d");
        const int col = d * k + jk;
        if (const int p = pivot_pos[static_cast<std::size_t>(col - 1)]; p > 0)
            b(p - 1, k) = Complex(1.0, 0.0);
        else
            b.col(k) = decomposition.c.row(c_row[static_cast<std::size_t>(col - 1)] - 1).transpose();
    }
    return decomposition.d_factor * determinant(b);
}

std::vector<Complex> principal_minors(const ComplexMatrix& c) {
    if (c.rows() != c.cols()) throw std::invalid_argument("principal_minors: C must be square");
    const int n = static_cast<int>(c.rows());
    if (n > 12) throw SizeLimitError("principal_minors: N > 12");
    const std::uint32_t subsets = std::uint32_t{1} << n;
    std::vector<Complex> minors(subsets);
    minors[0] = Complex(1.0, 0.0);
    for (std::uint32_t mask = 1; mask < subsets; ++mask) {
        const auto subset = mask_to_subset(mask);
        minors[mask] = determinant(submatrix(c, subset, subset));
    }
    return minors;
}

int minor_map_rank(int N, int trials, std::uint64_t seed) {
    if (N < 1 || N > 6) throw SizeLimitError("minor_map_rank: supported sizes are 1 <= N <= 6");
    if (trials < 1) throw std::invalid_argument("minor_map_rank: trials must be >= 1");
    int best = 0;
    for (int t = 0; t < trials; ++t) {
        const ComplexMatrix c = ginibre(N, N, seed + static_cast<std::uint64_t>(t) * 0x9e37ULL);
        best = std::max(best, svd_rank(minor_map_jacobian(c)));
    }
    return best;
}

std::vector<SpanningMinor> spanning_minors(const ComplexMatrix& c) {
    if (c.rows() != c.cols()) throw std::invalid_argument("spanning_minors: C must be square");
    const int n = static_cast<int>(c.rows());
    if (n > 12) throw SizeLimitError("spanning_minors: N > 12");
    std::vector<SpanningMinor> minors;
    for (const auto& subset : spanning_subsets(n))
        minors.push_back({subset, determinant(submatrix(c, subset, subset))});
    return minors;
}

int spanning_minor_rank(int N, int trials, std::uint64_t seed) {
    if (N < 1 || N > 6) throw SizeLimitError("spanning_minor_rank: supported sizes are 1 <= N <= 6");
    if (trials < 1) throw std::invalid_argument("spanning_minor_rank: trials must be >= 1");
    int best = 0;
    for (int t = 0; t < trials; ++t) {
        const ComplexMatrix c = ginibre(N, N, seed + static_cast<std::uint64_t>(t) * 0x9e37ULL);
        const ComplexMatrix full = minor_map_jacobian(c);
        const auto subsets = spanning_subsets(N);
        ComplexMatrix restricted(static_cast<Eigen::Index>(subsets.size()), full.cols());
        for (std::size_t i = 0; i < subsets.size(); ++i) {
            std::uint32_t mask = 0;
            for (int k : subsets[i]) mask |= std::uint32_t{1} << (k - 1);
            restricted.row(static_cast<Eigen::Index>(i)) = full.row(static_cast<Eigen::Index>(mask - 1));
        }
        best = std::max(best, svd_rank(restricted));
    }
    return best;
}

}  // namespace iforge
