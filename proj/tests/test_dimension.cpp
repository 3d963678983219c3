#include "helpers.hpp"

#include <iforge/dimension.hpp>
#include <iforge/oracles.hpp>

#include <random>

using namespace iforge;

TEST_CASE("closed-form bounds") {
    CHECK(fermion_bound(2, 4) == 14);
    CHECK(fermion_bound(3, 3) == 17);
    CHECK(fermion_bound(2, 2) == 4);
    CHECK(fermion_bound(2, 7) == 44);
    CHECK(boson_bound(2, 8) == 114);
    CHECK(boson_bound(2, 6) == 62);
    CHECK(boson_bound(3, 3) == 23);
    CHECK(boson_bound(5, 5) == 117);
    for (int d = 2; d <= 10; ++d)
        for (int n = 2; n <= 10; ++n)
            CHECK(boson_bound(d, n) - fermion_bound(d, n) == static_cast<std::int64_t>(n) * n - n);
    CHECK_THROWS_AS(fermion_bound(1, 3), std::invalid_argument);
    CHECK_THROWS_AS(boson_bound(2, 1), std::invalid_argument);
}

TEST_CASE("lossless parameter count") {
    const auto k22 = lossless_parameter_count(2, 2);
    CHECK(k22.twice_k == 10);
    CHECK(k22.k() == doctest::Approx(5.0));

    const auto k24 = lossless_parameter_count(2, 4);
    CHECK(k24.k() == doctest::Approx(22.0));
    CHECK(boson_bound(2, 4) == 26);
    CHECK(k24.boson_excess == doctest::Approx(4.0));  // loss buys bosons parameters

    const auto k33 = lossless_parameter_count(3, 3);
    CHECK(k33.k() == doctest::Approx(21.0));
    CHECK(boson_bound(3, 3) == 23);
}

TEST_CASE("jacobian for one particle is the identity") {
    const ComplexMatrix w = oracles::random_ginibre(1, 2, 13);
    const ComplexMatrix jac = analytic_jacobian(w, Species::Boson, 2, 1);
    CHECK(test::max_abs_difference(jac, ComplexMatrix::Identity(2, 2)) == 0.0);
}

TEST_CASE("two-fermion jacobian entries are the partner matrix elements") {
    // g(j1,j2) = W'(1,a) W'(2,b) - W'(1,b) W'(2,a) with a = j1, b = 2 + j2.
    const ComplexMatrix w = oracles::random_ginibre(2, 4, 19);
    const ComplexMatrix jac = analytic_jacobian(w, Species::Fermion, 2, 2);
    const Eigen::Index dn = 4;
    // d g(1,1) / d W'(1,1) = W'(2,3); output (1,1) is row 0, column (l=1,k=1) is 0.
    CHECK(std::abs(jac(0, 0) - w(1, 2)) < 1e-15);
    // d g(1,1) / d W'(2,3) = W'(1,1): column (l=2,k=3) -> dn + 2.
    CHECK(std::abs(jac(0, dn + 2) - w(0, 0)) < 1e-15);
    // d g(1,2) / d W'(1,4) = -W'(2,1): output (1,2) is row 1, column (l=1,k=4) -> 3.
    CHECK(std::abs(jac(1, 3) + w(1, 0)) < 1e-15);
}

TEST_CASE("analytic jacobian matches central finite differences") {
    std::mt19937_64 rng(23);
    int checked = 0;
    for (int d = 2; d <= 3; ++d) {
        for (int n = 2; n <= 4; ++n) {
            for (Species species : {Species::Boson, Species::Fermion}) {
                for (int t = 0; t < 25; ++t) {
                    const ComplexMatrix w = oracles::random_ginibre(n, d * n, rng());
                    const ComplexMatrix analytic = analytic_jacobian(w, species, d, n);
                    const ComplexMatrix numeric =
                        oracles::finite_difference_jacobian(w, species, d, n);
                    CHECK(test::max_abs_difference(analytic, numeric) < 1e-5);
                    ++checked;
                }
            }
        }
    }
    CHECK(checked == 300);
}

TEST_CASE("manifold ranks reproduce the reference cells") {
    CHECK(manifold_rank(2, 4, Species::Boson, 3, 1).rank == 16);
    CHECK(manifold_rank(2, 4, Species::Fermion, 3, 1).rank == 14);
    CHECK(manifold_rank(3, 3, Species::Boson, 3, 1).rank == 23);
    CHECK(manifold_rank(3, 3, Species::Fermion, 3, 1).rank == 17);
}

TEST_CASE("rank is stable across seeds and respects the hierarchy") {
    for (const auto& [d, n] : std::vector<std::pair<int, int>>{{2, 3}, {2, 4}, {3, 2}, {3, 3}}) {
        int boson_rank = -1, fermion_rank = -1;
        for (std::uint64_t seed : {1ULL, 77ULL, 4242ULL, 999983ULL, 31ULL}) {
            const auto rb = manifold_rank(d, n, Species::Boson, 1, seed);
            const auto rf = manifold_rank(d, n, Species::Fermion, 1, seed);
            if (boson_rank < 0) boson_rank = rb.rank;
            if (fermion_rank < 0) fermion_rank = rf.rank;
            CHECK(rb.rank == boson_rank);
            CHECK(rf.rank == fermion_rank);
        }
        const std::int64_t dn_power = integer_power(d, n);
        CHECK(boson_rank >= fermion_rank);
        CHECK(boson_rank <= std::min<std::int64_t>(dn_power, d * n * n));
        CHECK(fermion_rank <= std::min<std::int64_t>(dn_power, d * n * n));
        CHECK(boson_rank <= boson_bound(d, n));
        CHECK(fermion_rank <= fermion_bound(d, n));
    }
}

TEST_CASE("jacobian report carries the spectrum and bound") {
    const auto report = manifold_rank(2, 3, Species::Fermion, 5, 9);
    CHECK(report.d == 2);
    CHECK(report.N == 3);
    CHECK(report.trials == 5);
    CHECK(report.bound == 8);
    CHECK(report.rank == 8);
    CHECK_FALSE(report.rank_disagreement);
    CHECK(report.singular_values.size() == 8);  // min(d^N, dN^2)
    CHECK(report.singular_values.front() >= report.singular_values.back());
}

TEST_CASE("table2 evaluates cells, flags tightness, skips oversized requests") {
    const std::vector<Table2Cell> cells = {{2, 2}, {2, 4}, {5, 9}};
    const auto rows = table2(cells, Species::Fermion, 2, 1, 2);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].rank == 4);
    CHECK(rows[0].tight);
    CHECK(rows[1].rank == 14);
    CHECK(rows[1].tight);
    CHECK(rows[1].dn_power == 16);
    CHECK(rows[2].skipped);
    CHECK(rows[2].rank == -1);

    // Schedule independence: same rows single-threaded.
    const auto serial = table2(cells, Species::Fermion, 2, 1, 1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].rank == serial[i].rank);
        CHECK(rows[i].tight == serial[i].tight);
    }
}

TEST_CASE("size caps trip") {
    CHECK_THROWS_AS(analytic_jacobian(ComplexMatrix::Zero(9, 18), Species::Boson, 2, 9),
                    SizeLimitError);
    CHECK_THROWS_AS(manifold_rank(6, 2, Species::Boson, 1, 1), SizeLimitError);
    CHECK_THROWS_AS(analytic_jacobian(ComplexMatrix::Zero(2, 2), Species::Boson, 2, 2),
                    std::invalid_argument);
}
