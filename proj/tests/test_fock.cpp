#include "helpers.hpp"

#include <iforge/fock.hpp>

#include <random>

using namespace iforge;

TEST_CASE("occupation to assignment matches the worked examples") {
    // d=3, N=4 layout from the four-particle qutrit setup
    ModeOccupation r{{1, 0, 0, 0, 1, 0, 0, 0, 1, 1, 0, 0}};
    CHECK(occupation_to_assignment(r).modes == std::vector<int>{1, 5, 9, 10});

    CHECK(occupation_to_assignment(ModeOccupation{{1, 0, 0, 0, 1, 0}}).modes ==
          std::vector<int>{1, 5});
    CHECK(occupation_to_assignment(ModeOccupation{{1, 1, 1}}).modes == std::vector<int>{1, 2, 3});
}

TEST_CASE("post-selection predicate") {
    CHECK(is_post_selected(ModeOccupation{{1, 0, 0, 1, 0, 1, 1, 0}}, 2, 4));
    CHECK_FALSE(is_post_selected(ModeOccupation{{1, 0, 1, 1, 0, 0}}, 2, 3));
    CHECK_FALSE(is_post_selected(ModeOccupation{{2, 0, 0, 0}}, 2, 2));
    CHECK_FALSE(is_post_selected(ModeOccupation{{1, 0, 1, 0, 0, 0}}, 3, 2));
    CHECK_THROWS_AS(is_post_selected(ModeOccupation{{1, 0, 1}}, 2, 2), std::invalid_argument);
}

TEST_CASE("assignment to qudit index") {
    CHECK(assignment_to_qudit_index(ModeAssignment{{1, 5}}, 3) == std::vector<int>{1, 2});
    CHECK(assignment_to_qudit_index(ModeAssignment{{1, 4, 6, 7}}, 2) ==
          std::vector<int>{1, 2, 2, 1});
    CHECK_THROWS_AS(assignment_to_qudit_index(ModeAssignment{{1, 3, 4}}, 2), std::domain_error);
    CHECK(qudit_index_to_assignment({1, 2, 2, 1}, 2).modes == std::vector<int>{1, 4, 6, 7});
}

TEST_CASE("assignment round trip on random occupations") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 200; ++t) {
        const int n = 2 + static_cast<int>(rng() % 15);
        const int particles = 1 + static_cast<int>(rng() % 6);
        ModeOccupation r;
        r.counts.assign(static_cast<std::size_t>(n), 0);
        for (int p = 0; p < particles; ++p) ++r.counts[static_cast<std::size_t>(rng() % n)];
        const auto a = occupation_to_assignment(r);
        CHECK(std::is_sorted(a.modes.begin(), a.modes.end()));
        CHECK(assignment_to_occupation(a, n).counts == r.counts);
    }
}

TEST_CASE("post-selection iff qudit interpretation exists") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 300; ++t) {
        const int d = 1 + static_cast<int>(rng() % 4);
        const int particles = 1 + static_cast<int>(rng() % 5);
        ModeOccupation r;
        r.counts.assign(static_cast<std::size_t>(d * particles), 0);
        for (int p = 0; p < particles; ++p)
            ++r.counts[static_cast<std::size_t>(rng() % (d * particles))];
        bool interpretable = true;
        try {
            assignment_to_qudit_index(occupation_to_assignment(r), d);
        } catch (const std::domain_error&) {
            interpretable = false;
        }
        CHECK(interpretable == is_post_selected(r, d, particles));
    }
}

TEST_CASE("omega_inverse reads post-selected terms into the tensor") {
    FockSuperposition state;
    state.n_modes = 6;
    state.particles = 2;
    state.terms.push_back({ModeOccupation{{1, 0, 0, 0, 1, 0}}, Complex(1.0, 0.0)});
    const CoefficientTensor g = omega_inverse(state, 3, 2);
    CHECK(g.at({1, 2}) == Complex(1.0, 0.0));
    CHECK(g.norm_squared() == doctest::Approx(1.0));

    FockSuperposition empty;
    empty.n_modes = 4;
    empty.particles = 2;
    CHECK(omega_inverse(empty, 2, 2).norm_squared() == 0.0);
}

TEST_CASE("omega_inverse builds superposition tensors linearly") {
    const double amp = 1.0 / std::sqrt(2.0);
    FockSuperposition state;
    state.n_modes = 4;
    state.particles = 2;
    state.terms.push_back({ModeOccupation{{1, 0, 0, 1}}, Complex(amp, 0.0)});
    state.terms.push_back({ModeOccupation{{0, 1, 1, 0}}, Complex(amp, 0.0)});
    const CoefficientTensor g = omega_inverse(state, 2, 2);
    CHECK(g.at({1, 2}) == Complex(amp, 0.0));
    CHECK(g.at({2, 1}) == Complex(amp, 0.0));
    CHECK(g.norm_squared() == doctest::Approx(1.0));
}

TEST_CASE("omega_inverse rejects unprojected components") {
    FockSuperposition state;
    state.n_modes = 4;
    state.particles = 2;
    state.terms.push_back({ModeOccupation{{2, 0, 0, 0}}, Complex(0.5, 0.0)});
    CHECK_THROWS_AS(omega_inverse(state, 2, 2), std::domain_error);

    // Numerically null leftovers are dropped silently.
    state.terms[0].amplitude = Complex(1e-15, 0.0);
    CHECK_NOTHROW(omega_inverse(state, 2, 2));
}

TEST_CASE("omega round trip preserves norm") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss;
    for (int t = 0; t < 50; ++t) {
        const int d = 2 + static_cast<int>(rng() % 3);
        const int particles = 1 + static_cast<int>(rng() % 3);
        CoefficientTensor g(d, particles);
        for (Eigen::Index k = 0; k < g.amplitudes.size(); ++k)
            g.amplitudes[k] = Complex(gauss(rng), gauss(rng));
        const FockSuperposition state = omega_apply(g);
        CHECK(state.norm_squared() == doctest::Approx(g.norm_squared()));
        CHECK(test::tensor_difference(omega_inverse(state, d, particles), g) < 1e-15);
    }
}

TEST_CASE("tensor flat index is row-major with j_1 most significant") {
    CoefficientTensor g(3, 2);
    CHECK(g.flat_index({1, 1}) == 0);
    CHECK(g.flat_index({1, 2}) == 1);
    CHECK(g.flat_index({2, 1}) == 3);
    CHECK(g.multi_index(5) == std::vector<int>{2, 3});
    CHECK_THROWS_AS(g.flat_index({0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(g.flat_index({1, 4}), std::invalid_argument);
}
