#include <iforge/oracles.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

namespace iforge::oracles {

namespace {

void require_square_small(const ComplexMatrix& a, const char* who, int cap) {
    if (a.rows() != a.cols()) throw std::invalid_argument(std::string(who) + ": not square");
    if (a.rows() > cap) throw SizeLimitError(std::string(who) + ": matrix too large for brute force");
}

int permutation_sign(const std::vector<int>& sigma) {
    int inversions = 0;
    for (std::size_t i = 0; i < sigma.size(); ++i)
        for (std::size_t j = i + 1; j < sigma.size(); ++j)
            if (sigma[i] > sigma[j]) ++inversions;
    return (inversions & 1) ? -1 : 1;
}

Complex permutation_sum(const ComplexMatrix& a, bool signed_sum) {
    const int n = static_cast<int>(a.rows());
    if (n == 0) return Complex(1.0, 0.0);
    std::vector<int> sigma(static_cast<std::size_t>(n));
    std::iota(sigma.begin(), sigma.end(), 0);
    Complex total(0.0, 0.0);
    do {
        Complex prod(1.0, 0.0);
        for (int i = 0; i < n; ++i) prod *= a(i, sigma[static_cast<std::size_t>(i)]);
        if (signed_sum && permutation_sign(sigma) < 0)
            total -= prod;
        else
            total += prod;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return total;
}

}  // namespace

Complex naive_permanent(const ComplexMatrix& a) {
    require_square_small(a, "naive_permanent", 10);
    return permutation_sum(a, false);
}

Complex naive_determinant(const ComplexMatrix& a) {
    require_square_small(a, "naive_determinant", 10);
    return permutation_sum(a, true);
}

Complex glynn_permanent(const ComplexMatrix& a) {
    require_square_small(a, "glynn_permanent", 24);
    const int n = static_cast<int>(a.rows());
    if (n == 0) return Complex(1.0, 0.0);
    if (n == 1) return a(0, 0);

    // perm(A) = 2^{1-n} sum_{delta, delta_n = +1} (prod delta) prod_j (sum_k delta_k A(k,j)),
    // iterating the first n-1 signs in Gray-code order.
    std::vector<Complex> col_sums(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        Complex s(0.0, 0.0);
        for (int k = 0; k < n; ++k) s += a(k, j);
        col_sums[static_cast<std::size_t>(j)] = s;
    }
    Complex total(1.0, 0.0);
    for (int j = 0; j < n; ++j) total *= col_sums[static_cast<std::size_t>(j)];

    int sign = 1;
    const std::uint32_t end = std::uint32_t{1} << (n - 1);
    std::uint32_t gray = 0;
    for (std::uint32_t k = 1; k < end; ++k) {
        const int bit = std::countr_zero(k);
        const std::uint32_t next = gray ^ (std::uint32_t{1} << bit);
        const double delta = next > gray ? -2.0 : 2.0;  // sign of row `bit` flipped
        for (int j = 0; j < n; ++j) col_sums[static_cast<std::size_t>(j)] += delta * a(bit, j);
        gray = next;
        sign = -sign;
        Complex prod(1.0, 0.0);
        for (int j = 0; j < n; ++j) prod *= col_sums[static_cast<std::size_t>(j)];
        total += sign > 0 ? prod : -prod;
    }
    return total / std::pow(2.0, n - 1);
}

CoefficientTensor permutation_sum_tensor(const ComplexMatrix& w, Species species, int d, int N,
                                         std::vector<int> source_rows) {
    if (N > 8) throw SizeLimitError("permutation_sum_tensor: N > 8");
    if (source_rows.empty()) {
        source_rows.resize(static_cast<std::size_t>(N));
        for (int m = 0; m < N; ++m) source_rows[static_cast<std::size_t>(m)] = d * m + 1;
    }
    CoefficientTensor g(d, N);
    std::vector<int> sigma(static_cast<std::size_t>(N));
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        const auto idx = g.multi_index(flat);
        std::iota(sigma.begin(), sigma.end(), 0);
        Complex total(0.0, 0.0);
        do {
            Complex prod(1.0, 0.0);
            for (int k = 0; k < N; ++k)
                prod *= w(source_rows[static_cast<std::size_t>(sigma[static_cast<std::size_t>(k)])] - 1,
                          d * k + idx[static_cast<std::size_t>(k)] - 1);
            if (species == Species::Fermion && permutation_sign(sigma) < 0)
                total -= prod;
            else
                total += prod;
        } while (std::next_permutation(sigma.begin(), sigma.end()));
        g.amplitudes[static_cast<Eigen::Index>(flat)] = total;
    }
    return g;
}

ComplexMatrix finite_difference_jacobian(const ComplexMatrix& w_prime, Species species, int d,
                                         int N, double step) {
    const Eigen::Index dn = static_cast<Eigen::Index>(d) * N;
    if (w_prime.rows() != N || w_prime.cols() != dn)
        throw std::invalid_argument("finite_difference_jacobian: W' must be N x dN");
    std::size_t outputs = 1;
    for (int k = 0; k < N; ++k) outputs *= static_cast<std::size_t>(d);
    // W' is already the reduced matrix: one row per particle.
    std::vector<int> rows(static_cast<std::size_t>(N));
    for (int m = 0; m < N; ++m) rows[static_cast<std::size_t>(m)] = m + 1;
    ComplexMatrix jac(static_cast<Eigen::Index>(outputs), static_cast<Eigen::Index>(N) * dn);
    for (Eigen::Index l = 0; l < N; ++l) {
        for (Eigen::Index k = 0; k < dn; ++k) {
            ComplexMatrix plus = w_prime, minus = w_prime;
            plus(l, k) += step;
            minus(l, k) -= step;
            const CoefficientTensor gp = permutation_sum_tensor(plus, species, d, N, rows);
            const CoefficientTensor gm = permutation_sum_tensor(minus, species, d, N, rows);
            jac.col(l * dn + k) = (gp.amplitudes - gm.amplitudes) / (2.0 * step);
        }
    }
    return jac;
}

ComplexMatrix random_ginibre(int rows, int cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
    return m;
}

ComplexMatrix random_unitary(int n, std::uint64_t seed) {
    const ComplexMatrix g = random_ginibre(n, n, seed);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
        const Complex diag = r(j, j);
        if (std::abs(diag) > 0.0) q.col(j) *= diag / std::abs(diag);
    }
    return q;
}

ComplexMatrix random_subunitary(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0xabcdef1234567890ULL);
    std::uniform_real_distribution<double> uniform(0.05, 0.95);
    RealVector s(n);
    for (Eigen::Index i = 0; i < n; ++i) s(i) = uniform(rng);
    return random_unitary(n, seed) * s.asDiagonal() * random_unitary(n, seed + 1);
}

ComplexMatrix unitary_with_first_row(const ComplexVector& row) {
    const Eigen::Index d = row.size();
    if (d == 0) throw std::invalid_argument("unitary_with_first_row: empty vector");
    const double norm = row.norm();
    if (std::abs(norm - 1.0) > 1e-12)
        throw std::invalid_argument("unitary_with_first_row: vector must be unit norm");

    // Gram-Schmidt against the standard basis; rows are orthonormal under
    // the Hermitian inner product, so the result satisfies U U^dagger = I.
    ComplexMatrix u(d, d);
    u.row(0) = row.transpose();
    Eigen::Index filled = 1;
    for (Eigen::Index basis = 0; basis < d && filled < d; ++basis) {
        ComplexVector candidate = ComplexVector::Zero(d);
        candidate(basis) = Complex(1.0, 0.0);
        for (Eigen::Index r = 0; r < filled; ++r) {
            const ComplexVector v = u.row(r).transpose();
            candidate -= v * v.dot(candidate);
        }
        if (candidate.norm() > 1e-8) {
            u.row(filled) = (candidate / candidate.norm()).transpose();
            ++filled;
        }
    }
    if (filled < d) throw std::runtime_error("unitary_with_first_row: completion failed");
    return u;
}

}  // namespace iforge::oracles
