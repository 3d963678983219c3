// Acceptance suite: every release-gating check, one verdict line each.
// Exit status is the number of failed criteria.

#include <iforge/amplitude.hpp>
#include <iforge/commands.hpp>
#include <iforge/dimension.hpp>
#include <iforge/entanglement.hpp>
#include <iforge/fock.hpp>
#include <iforge/minors.hpp>
#include <iforge/oracles.hpp>
#include <iforge/scatter.hpp>
#include <iforge/serialize.hpp>

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

using namespace iforge;

namespace {

struct Gate {
    int failures = 0;
    int current_checks = 0;
    int current_failures = 0;
    std::string first_detail;

    void check(bool ok, const std::string& detail) {
        ++current_checks;
        if (ok) return;
        ++current_failures;
        if (first_detail.empty()) first_detail = detail;
    }

    void finish(int number, const std::string& title) {
        if (current_failures == 0) {
            std::printf("[PASS] criterion %d: %s (%d checks)\n", number, title.c_str(),
                        current_checks);
        } else {
            ++failures;
            std::printf("[FAIL] criterion %d: %s (%d/%d checks failed; first: %s)\n", number,
                        title.c_str(), current_failures, current_checks, first_detail.c_str());
        }
        current_checks = current_failures = 0;
        first_detail.clear();
    }
};

std::string cell_name(Species species, int d, int n) {
    std::ostringstream out;
    out << to_string(species) << " d=" << d << " N=" << n;
    return out.str();
}

int run_cli(const std::string& args) {
    const std::string command = std::string(IFORGE_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// --------------------------------------------------------------------------

void criterion_1_and_2(Gate& gate) {
    // Exact manifold dimensions for every required cell, each within budget,
    // plus the closed-form bound grid and the tightness identity.
    struct Block {
        Species species;
        int d;
        int n_first, n_last;
        std::vector<int> ranks;
    };
    const std::vector<Block> blocks = {
        {Species::Fermion, 2, 2, 7, {4, 8, 14, 22, 32, 44}},
        {Species::Fermion, 3, 2, 6, {8, 17, 30, 47, 68}},
        {Species::Fermion, 4, 2, 5, {12, 26, 46, 72}},
        {Species::Fermion, 5, 2, 5, {16, 35, 62, 97}},
        {Species::Boson, 2, 2, 6, {4, 8, 16, 32, 62}},
        {Species::Boson, 3, 3, 5, {23, 42, 67}},
        {Species::Boson, 4, 3, 3, {32}},
        {Species::Boson, 5, 3, 3, {41}},
    };

    for (const auto& block : blocks) {
        std::vector<Table2Cell> cells;
        for (int n = block.n_first; n <= block.n_last; ++n) cells.push_back({block.d, n});
        const auto rows = table2(cells, block.species, 5, 1);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& row = rows[i];
            gate.check(row.rank == block.ranks[i],
                       cell_name(block.species, row.d, row.N) + " rank " +
                           std::to_string(row.rank) + " != " + std::to_string(block.ranks[i]));
            gate.check(row.seconds <= 60.0,
                       cell_name(block.species, row.d, row.N) + " exceeded the 60 s budget");
        }
    }
    gate.check(run_cli("table2 --species fermion --d 2 --N 2..7") == 0,
               "table2 CLI run deviated from the vendored reference");
    gate.finish(1, "manifold dimensions reproduce the reference table");

    for (int d = 2; d <= 10; ++d) {
        for (int n = 2; n <= 10; ++n) {
            const std::int64_t dd = d, nn = n;
            gate.check(fermion_bound(d, n) == (dd - 1) * nn * nn - nn + 2, "fermion bound formula");
            gate.check(boson_bound(d, n) == dd * nn * nn - 2 * nn + 2, "boson bound formula");
        }
    }
    for (const auto& ref : commands::table2_reference()) {
        if (ref.red) continue;
        const Species species = species_from_string(ref.species);
        const std::int64_t bound =
            species == Species::Boson ? boson_bound(ref.d, ref.N) : fermion_bound(ref.d, ref.N);
        gate.check(ref.rank == std::min(bound, integer_power(ref.d, ref.N)),
                   cell_name(species, ref.d, ref.N) + " is not tight against min(bound, d^N)");
    }
    gate.finish(2, "closed-form bounds and tightness of the reference cells");
}

void criterion_3(Gate& gate) {
    const auto start = std::chrono::steady_clock::now();

    FockSuperposition input;
    input.n_modes = 4;
    input.particles = 4;
    const Complex weight(1.0 / std::sqrt(3.0), 0.0);
    input.terms.push_back({ModeOccupation{{2, 0, 0, 2}}, weight});
    input.terms.push_back({ModeOccupation{{0, 2, 2, 0}}, weight});
    input.terms.push_back({ModeOccupation{{1, 1, 1, 1}}, weight});

    for (int i = 0; i < 33; ++i) {
        const double gamma = (std::numbers::pi / 4.0) * i / 32.0;
        const ComplexMatrix w = compile(named_device("four_photon_family", {gamma}));
        const PostSelection selected =
            post_select(evolve_fock(input, w, Species::Boson), 2, 4);

        const double s2 = std::sin(2.0 * gamma);
        const double c4 = std::cos(4.0 * gamma);
        const double expected = (c4 * c4 + 2.0 * s2 * s2 * s2 * s2) / 12.0;
        gate.check(std::abs(selected.success_probability - expected) <= 1e-10,
                   "success probability off the closed form at gamma=" + std::to_string(gamma));

        CoefficientTensor analytic(2, 4);
        const double scale = 1.0 / (2.0 * std::sqrt(3.0));
        const double ghz = scale * std::numbers::sqrt2 * s2 * s2 / std::numbers::sqrt2;
        const double bell = scale * c4 * 0.5;
        analytic.at({1, 1, 2, 2}) = ghz;
        analytic.at({2, 2, 1, 1}) = ghz;
        analytic.at({1, 2, 1, 2}) = bell;
        analytic.at({1, 2, 2, 1}) = bell;
        analytic.at({2, 1, 1, 2}) = bell;
        analytic.at({2, 1, 2, 1}) = bell;
        gate.check(fidelity(selected.tensor, analytic) >= 1.0 - 1e-9,
                   "fidelity left the family at gamma=" + std::to_string(gamma));
    }

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    gate.check(seconds <= 10.0, "33-point sweep exceeded the 10 s budget");
    gate.check(run_cli("family") == 0, "family CLI sweep failed");
    gate.finish(3, "tunable four-photon family matches the closed form");
}

void criterion_4(Gate& gate) {
    const ComplexMatrix analyzer = compile(named_device("ghz_analyzer", {}));
    ComplexMatrix w = ComplexMatrix::Zero(12, 12);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) w.block(4 * a, 4 * b, 2, 2) = analyzer.block(2 * a, 2 * b, 2, 2);
    for (int p : {1, 3, 5}) w.block(2 * p, 2 * p, 2, 2) = ComplexMatrix::Identity(2, 2);

    FockSuperposition bells;
    bells.n_modes = 12;
    bells.particles = 6;
    const Complex amp(1.0 / (2.0 * std::numbers::sqrt2), 0.0);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int z = 0; z < 2; ++z) {
                std::vector<int> counts(12, 0);
                counts[static_cast<std::size_t>(0 + x)] = 1;
                counts[static_cast<std::size_t>(2 + x)] = 1;
                counts[static_cast<std::size_t>(4 + y)] = 1;
                counts[static_cast<std::size_t>(6 + y)] = 1;
                counts[static_cast<std::size_t>(8 + z)] = 1;
                counts[static_cast<std::size_t>(10 + z)] = 1;
                bells.terms.push_back({ModeOccupation{std::move(counts)}, amp});
            }

    const PostSelection selected = post_select(evolve_fock(bells, w, Species::Boson), 2, 6);
    const ConditionalState conditional =
        conditional_state(selected.tensor, {{1, 1}, {3, 1}, {5, 1}});

    CoefficientTensor ghz3(2, 3);
    ghz3.amplitudes[0] = 1.0 / std::numbers::sqrt2;
    ghz3.amplitudes[7] = 1.0 / std::numbers::sqrt2;
    gate.check(fidelity(conditional.tensor, ghz3) >= 1.0 - 1e-9,
               "partner photons are not in the GHZ state after conditioning");
    gate.check(run_cli("ghz-swap --min-fidelity 0.999999999") == 0, "ghz-swap CLI run failed");
    gate.finish(4, "GHZ projection leaves photons 2,4,6 in a GHZ state");
}

void criterion_5(Gate& gate) {
    const ComplexMatrix splitter = compile(named_device("beamsplitter", {2}));

    FockSuperposition hom;
    hom.n_modes = 4;
    hom.particles = 2;
    hom.terms.push_back({ModeOccupation{{1, 0, 1, 0}}, Complex(1.0, 0.0)});

    const PostSelection boson = post_select(evolve_fock(hom, splitter, Species::Boson), 2, 2);
    gate.check(boson.success_probability < 1e-12, "equal bosons passed post-selection");

    const PostSelection fermion = post_select(evolve_fock(hom, splitter, Species::Fermion), 2, 2);
    gate.check(std::abs(fermion.success_probability - 1.0) <= 1e-12,
               "fermion anti-bunching is not certain");

    std::mt19937_64 rng(2024);
    std::normal_distribution<double> gauss;
    const std::vector<std::pair<int, int>> shapes = {{2, 2}, {2, 3}, {2, 4}, {3, 2}, {4, 2}};
    for (int t = 0; t < 100; ++t) {
        const auto [d, n] = shapes[static_cast<std::size_t>(t % shapes.size())];
        const ComplexMatrix u = oracles::random_unitary(d * n, rng());
        for (Species species : {Species::Boson, Species::Fermion}) {
            CoefficientTensor input(d, n);
            for (Eigen::Index k = 0; k < input.amplitudes.size(); ++k)
                input.amplitudes[k] = Complex(gauss(rng), gauss(rng));
            input.amplitudes /= std::sqrt(input.norm_squared());
            const FockSuperposition out = evolve_fock(omega_apply(input), u, species);
            gate.check(std::abs(out.norm_squared() - 1.0) <= 1e-9,
                       "probability not conserved for " + cell_name(species, d, n));
            if (species == Species::Fermion) {
                for (const auto& term : out.terms) {
                    bool multi = false;
                    for (int count : term.occupation.counts)
                        if (count >= 2) multi = true;
                    if (multi)
                        gate.check(std::abs(term.amplitude) < 1e-12,
                                   "fermion amplitude on a doubly occupied mode");
                }
            }
        }
    }
    for (int t = 0; t < 50; ++t) {
        ComplexMatrix a = oracles::random_ginibre(4, 4, rng());
        a.col(3) = a.col(1);
        gate.check(std::abs(determinant(a)) < 1e-12, "determinant with equal columns");
    }
    gate.finish(5, "interference physics: suppression, exclusion, conservation");
}

void criterion_6(Gate& gate) {
    std::mt19937_64 rng(6021);
    for (int t = 0; t < 500; ++t) {
        const int d = 2 + static_cast<int>(rng() % 2);
        const int n = 2 + static_cast<int>(rng() % 4);
        const Species species = (t & 1) ? Species::Fermion : Species::Boson;
        const ComplexMatrix w = oracles::random_ginibre(d * n, d * n, rng());
        const CoefficientTensor fast = coefficient_tensor(w, species, d, n);
        const CoefficientTensor slow = oracles::permutation_sum_tensor(w, species, d, n);
        const double scale = std::max(1e-300, slow.amplitudes.cwiseAbs().maxCoeff());
        const double err = (fast.amplitudes - slow.amplitudes).cwiseAbs().maxCoeff() / scale;
        gate.check(err < 1e-10, "coefficient tensor off the permutation sum, " +
                                    cell_name(species, d, n));
    }
    for (int n = 1; n <= 8; ++n) {
        for (int t = 0; t < 25; ++t) {
            const ComplexMatrix a = oracles::random_ginibre(n, n, rng());
            const Complex reference = oracles::naive_permanent(a);
            const double scale = std::max(1.0, std::abs(reference));
            gate.check(std::abs(permanent(a) - reference) / scale < 1e-10,
                       "Ryser vs naive permanent at n=" + std::to_string(n));
            gate.check(std::abs(oracles::glynn_permanent(a) - reference) / scale < 1e-10,
                       "Glynn vs naive permanent at n=" + std::to_string(n));
        }
    }
    gate.finish(6, "kernels agree with the independent oracles");
}

void criterion_7(Gate& gate) {
    std::mt19937_64 rng(7013);
    for (int t = 0; t < 500; ++t) {
        const int d = 2 + static_cast<int>(rng() % 3);
        const int n = 2 + static_cast<int>(rng() % 3);
        const ComplexMatrix w = oracles::random_ginibre(d * n, d * n, rng());
        const CoefficientTensor g = coefficient_tensor(w, Species::Boson, d, n);
        if (g.norm_squared() < 1e-12) continue;
        ModeOccupation ones;
        ones.counts.assign(static_cast<std::size_t>(n), 1);
        gate.check(max_bipartite_rank(g).rank <= combinatorial_bound(n, ones, 1),
                   "bipartite rank above N! for " + cell_name(Species::Boson, d, n));
    }
    for (int t = 0; t < 100; ++t) {
        const int d = 2 + static_cast<int>(rng() % 3);
        const int n = 2 + static_cast<int>(rng() % 3);
        const ComplexMatrix w = oracles::random_ginibre(d * n, d * n, rng());
        std::vector<int> rows(static_cast<std::size_t>(n), 1);
        const CoefficientTensor g = coefficient_tensor(w, Species::Boson, d, n, rows);
        if (g.norm_squared() < 1e-12) continue;
        gate.check(max_bipartite_rank(g).rank == 1, "condensate output is not separable");
    }
    for (int t = 0; t < 100; ++t) {
        const int d = 2 + static_cast<int>(rng() % 3);
        const ComplexMatrix w = oracles::random_ginibre(4 * d, 4 * d, rng());
        const CoefficientTensor g =
            coefficient_tensor(w, Species::Boson, d, 4, {1, 1, d + 1, d + 1});
        if (g.norm_squared() < 1e-12) continue;
        gate.check(max_bipartite_rank(g).rank <= 6,
                   "pairwise-occupied sources exceed the reduced bound 4!/4");
    }
    gate.finish(7, "bipartite ranks never exceed the path-counting bounds");
}

void criterion_8(Gate& gate) {
    std::mt19937_64 rng(8017);
    for (int t = 0; t < 200; ++t) {
        const int n = 2 + static_cast<int>(rng() % 4);
        const ComplexMatrix w = oracles::random_ginibre(n, 2 * n, rng());
        const MinorDecomposition dec = decompose(w, 2);
        std::vector<int> rows;
        for (int m = 1; m <= n; ++m) rows.push_back(m);
        const CoefficientTensor g = coefficient_tensor(w, Species::Fermion, 2, n, rows);
        const double scale = std::max(1e-300, g.amplitudes.cwiseAbs().maxCoeff());
        double worst = 0.0;
        for (std::size_t flat = 0; flat < g.size(); ++flat)
            worst = std::max(worst, std::abs(reconstruct(dec, 2, g.multi_index(flat)) -
                                             g.amplitudes[static_cast<Eigen::Index>(flat)]) /
                                        scale);
        gate.check(worst < 1e-9, "reconstruction error at N=" + std::to_string(n));
    }
    for (int n = 2; n <= 5; ++n) {
        const int expected = n * n - n + 1;
        gate.check(minor_map_rank(n, 5, 1) == expected,
                   "minor-map rank at N=" + std::to_string(n));
        gate.check(spanning_minor_rank(n, 5, 1) == expected,
                   "spanning-minor rank at N=" + std::to_string(n));
    }
    gate.finish(8, "determinant factorization and principal-minor ranks");
}

void criterion_9(Gate& gate) {
    const ComplexMatrix a = oracles::random_ginibre(20, 20, 90001);
    const auto start = std::chrono::steady_clock::now();
    const Complex value = permanent(a);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    gate.check(std::isfinite(value.real()) && std::isfinite(value.imag()),
               "20x20 permanent is not finite");
    gate.check(seconds <= 1.0,
               "20x20 permanent took " + std::to_string(seconds) + " s (budget 1 s)");
    gate.finish(9, "single-threaded 20x20 permanent within one second");
}

}  // namespace

int main() {
    Gate gate;
    criterion_1_and_2(gate);
    criterion_3(gate);
    criterion_4(gate);
    criterion_5(gate);
    criterion_6(gate);
    criterion_7(gate);
    criterion_8(gate);
    criterion_9(gate);
    if (gate.failures == 0)
        std::printf("acceptance: all criteria passed\n");
    else
        std::printf("acceptance: %d criteria FAILED\n", gate.failures);
    return gate.failures;
}
