#include "helpers.hpp"

#include <iforge/entanglement.hpp>
#include <iforge/oracles.hpp>
#include <iforge/scatter.hpp>

#include <random>

using namespace iforge;

namespace {

CoefficientTensor ghz4() {
    CoefficientTensor g(2, 4);
    const double s = 1.0 / std::sqrt(2.0);
    g.at({1, 1, 1, 1}) = s;
    g.at({2, 2, 2, 2}) = s;
    return g;
}

CoefficientTensor w4() {
    CoefficientTensor g(2, 4);
    g.at({1, 2, 2, 2}) = 0.5;
    g.at({2, 1, 2, 2}) = 0.5;
    g.at({2, 2, 1, 2}) = 0.5;
    g.at({2, 2, 2, 1}) = 0.5;
    return g;
}

}  // namespace

TEST_CASE("combinatorial bound formula") {
    CHECK(combinatorial_bound(4, ModeOccupation{{1, 1, 1, 1}}, 1) == 24);
    CHECK(combinatorial_bound(4, ModeOccupation{{4, 0, 0, 0}}, 1) == 1);
    CHECK(combinatorial_bound(4, ModeOccupation{{2, 2, 0, 0}}, 2) == 12);
    CHECK(combinatorial_bound(3, ModeOccupation{{1, 1, 1}}, 5) == 30);
    CHECK_THROWS_AS(combinatorial_bound(4, ModeOccupation{{1, 1, 1, 1}}, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(combinatorial_bound(4, ModeOccupation{{1, 1, 1}}, 1), std::invalid_argument);
}

TEST_CASE("bipartite rank of reference states") {
    std::mt19937_64 rng(97);

    SUBCASE("product states have rank one across every cut") {
        CoefficientTensor product(2, 4);
        std::normal_distribution<double> gauss;
        std::vector<ComplexVector> factors;
        for (int k = 0; k < 4; ++k) {
            ComplexVector v(2);
            v << Complex(gauss(rng), gauss(rng)), Complex(gauss(rng), gauss(rng));
            factors.push_back(v);
        }
        for (std::size_t flat = 0; flat < product.size(); ++flat) {
            const auto idx = product.multi_index(flat);
            Complex amp(1.0, 0.0);
            for (int k = 0; k < 4; ++k)
                amp *= factors[static_cast<std::size_t>(k)](idx[static_cast<std::size_t>(k)] - 1);
            product.amplitudes[static_cast<Eigen::Index>(flat)] = amp;
        }
        CHECK(bipartite_rank(product, {1}) == 1);
        CHECK(bipartite_rank(product, {1, 3}) == 1);
        CHECK(max_bipartite_rank(product).rank == 1);
    }

    SUBCASE("GHZ has rank two across every cut") {
        const CoefficientTensor g = ghz4();
        CHECK(bipartite_rank(g, {1}) == 2);
        CHECK(bipartite_rank(g, {1, 2}) == 2);
        CHECK(bipartite_rank(g, {1, 4}) == 2);
        const auto best = max_bipartite_rank(g);
        CHECK(best.rank == 2);
        CHECK(best.partition == std::vector<int>{1});  // lexicographic tie-break
    }

    SUBCASE("W state has rank two") { CHECK(max_bipartite_rank(w4()).rank == 2); }

    SUBCASE("splitter HV output has rank two across the 1|2 cut") {
        const ComplexMatrix splitter = compile(named_device("beamsplitter", {2}));
        CoefficientTensor g(2, 2);
        g.at({1, 2}) = Complex(-0.5, 0.0);
        g.at({2, 1}) = Complex(0.5, 0.0);
        CHECK(bipartite_rank(g, {1}) == 2);
    }

    SUBCASE("generic two-qubit states have full rank") {
        CoefficientTensor g(2, 2);
        std::normal_distribution<double> gauss;
        for (Eigen::Index k = 0; k < 4; ++k) g.amplitudes[k] = Complex(gauss(rng), gauss(rng));
        CHECK(max_bipartite_rank(g).rank == 2);
    }

    SUBCASE("error paths") {
        CHECK_THROWS_AS(bipartite_rank(ghz4(), {}), std::invalid_argument);
        CHECK_THROWS_AS(bipartite_rank(ghz4(), {1, 2, 3, 4}), std::invalid_argument);
        CHECK_THROWS_AS(bipartite_rank(CoefficientTensor(2, 2), {1}), std::domain_error);
    }
}

TEST_CASE("pipeline states respect the combinatorial bound") {
    std::mt19937_64 rng(101);
    for (int t = 0; t < 120; ++t) {
        const int d = 2 + static_cast<int>(rng() % 3);
        const int n = 2 + static_cast<int>(rng() % 3);
        const ComplexMatrix w = oracles::random_ginibre(d * n, d * n, rng());
        const CoefficientTensor g = coefficient_tensor(w, Species::Boson, d, n);
        if (g.norm_squared() < 1e-12) continue;
        ModeOccupation ones;
        ones.counts.assign(static_cast<std::size_t>(n), 1);
        CHECK(max_bipartite_rank(g).rank <= combinatorial_bound(n, ones, 1));
    }
}

TEST_CASE("condensate sources always produce separable qudit states") {
    std::mt19937_64 rng(103);
    for (int t = 0; t < 40; ++t) {
        const int d = 2 + static_cast<int>(rng() % 3);
        const int n = 2 + static_cast<int>(rng() % 3);
        const ComplexMatrix w = oracles::random_ginibre(d * n, d * n, rng());
        std::vector<int> rows(static_cast<std::size_t>(n), 1);
        const CoefficientTensor g = coefficient_tensor(w, Species::Boson, d, n, rows);
        if (g.norm_squared() < 1e-12) continue;
        CHECK(max_bipartite_rank(g).rank == 1);
    }
}

TEST_CASE("permutation representation coefficients") {
    SUBCASE("identity network keeps only the identity path") {
        std::vector<ComplexVector> states;
        for (int k = 0; k < 3; ++k) {
            ComplexVector v = ComplexVector::Zero(2);
            v(k % 2) = 1.0;
            states.push_back(v);
        }
        const auto rep =
            permutation_representation(ComplexMatrix::Identity(3, 3), states, Species::Fermion);
        REQUIRE(rep.permutations.size() == 6);
        for (std::size_t i = 0; i < rep.permutations.size(); ++i) {
            const bool identity = rep.permutations[i] == Permutation{1, 2, 3};
            CHECK(std::abs(rep.coefficients[i] - (identity ? Complex(1, 0) : Complex(0, 0))) <
                  1e-15);
        }
    }

    SUBCASE("constant network gives the fully symmetric state") {
        const double p = 0.3;
        const int n = 3;
        const SetupSpec spec = named_device("freespace", {3, 2, p});
        std::vector<ComplexVector> states;
        ComplexVector h = ComplexVector::Zero(2), v = ComplexVector::Zero(2);
        h(0) = 1.0;
        v(1) = 1.0;
        states = {h, v, v};
        const auto rep = permutation_representation(spec.matrix, states, Species::Boson);
        const double expected = std::pow(p, 1.5);
        for (const Complex& coeff : rep.coefficients)
            CHECK(std::abs(coeff - Complex(expected, 0.0)) < 1e-14);

        // Invariance of the materialized state under every party permutation.
        const auto& g = rep.materialized;
        std::vector<int> perm = {2, 0, 1};
        for (std::size_t flat = 0; flat < g.size(); ++flat) {
            const auto idx = g.multi_index(flat);
            std::vector<int> permuted(static_cast<std::size_t>(n));
            for (int k = 0; k < n; ++k)
                permuted[static_cast<std::size_t>(k)] =
                    idx[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])];
            CHECK(std::abs(g.at(idx) - g.at(permuted)) < 1e-12);
        }
    }

    SUBCASE("Fourier network with two H and two V photons makes a GHZ-type state") {
        // With the (j-1)(k-1) phase convention the alternating arrangement
        // V,H,V,H is the one that collapses to two components; the adjacent
        // arrangement V,V,H,H gives a double-Bell product instead.
        const SetupSpec spec = named_device("fourier", {4, 2});
        ComplexVector h = ComplexVector::Zero(2), v = ComplexVector::Zero(2);
        h(0) = 1.0;
        v(1) = 1.0;

        const auto alternating =
            permutation_representation(spec.matrix, {v, h, v, h}, Species::Boson);
        const auto& g = alternating.materialized;
        CHECK(std::abs(g.at({1, 2, 1, 2}) - Complex(0.25, 0.0)) < 1e-12);
        CHECK(std::abs(g.at({2, 1, 2, 1}) - Complex(-0.25, 0.0)) < 1e-12);
        double off = 0.0;
        for (std::size_t flat = 0; flat < g.size(); ++flat) {
            const auto idx = g.multi_index(flat);
            if (idx == std::vector<int>{1, 2, 1, 2} || idx == std::vector<int>{2, 1, 2, 1})
                continue;
            off = std::max(off, std::abs(g.amplitudes[static_cast<Eigen::Index>(flat)]));
        }
        CHECK(off < 1e-12);
        CHECK(max_bipartite_rank(g).rank == 2);

        const auto adjacent =
            permutation_representation(spec.matrix, {v, v, h, h}, Species::Boson);
        CHECK(max_bipartite_rank(adjacent.materialized).rank == 4);  // Bell x Bell
    }
}

TEST_CASE("permutation representation equals the scattering pipeline") {
    std::mt19937_64 rng(107);
    for (int t = 0; t < 30; ++t) {
        const int d = 2 + static_cast<int>(rng() % 2);
        const int n = 2 + static_cast<int>(rng() % 4);
        const Species species = (rng() & 1) ? Species::Fermion : Species::Boson;
        const ComplexMatrix v = oracles::random_ginibre(n, n, rng());
        std::vector<ComplexVector> states;
        SetupSpec spec;
        spec.kind = SetupSpec::Kind::NonPolarizing;
        spec.d = d;
        spec.N = n;
        spec.matrix = v;
        for (int k = 0; k < n; ++k) {
            ComplexVector eps = oracles::random_ginibre(d, 1, rng()).col(0);
            eps /= eps.norm();
            states.push_back(eps);
            spec.input_locals.push_back(oracles::unitary_with_first_row(eps));
        }
        const CoefficientTensor direct = coefficient_tensor(compile(spec), species, d, n);
        const auto rep = permutation_representation(v, states, species);
        CHECK(test::tensor_relative_error(direct, rep.materialized) < 1e-10);
    }
}

TEST_CASE("rank report aggregates spectra and bounds") {
    const auto report = rank_report(ghz4(), 24, 1);
    CHECK(report.combinatorial_upper == 24);
    CHECK(report.bipartite_lower == 2);
    CHECK(report.bipartite_lower <= report.combinatorial_upper);
    CHECK(report.bipartition_achieving_lower == std::vector<int>{1});
    CHECK(report.spectra.size() == 7);  // 2^(4-1) - 1 bipartitions
    for (const auto& s : report.spectra) CHECK_FALSE(s.singular_values.empty());
}
