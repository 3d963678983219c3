#include <iforge/commands.hpp>

#include <iforge/amplitude.hpp>
#include <iforge/dimension.hpp>
#include <iforge/entanglement.hpp>
#include <iforge/fock.hpp>
#include <iforge/minors.hpp>
#include <iforge/oracles.hpp>
#include <iforge/scatter.hpp>

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

namespace iforge::commands {

namespace {

Json load_config(const CommonOptions& options) {
    if (!options.config_path) return Json::object();
    std::ifstream in(*options.config_path);
    if (!in) throw std::invalid_argument("cannot open config file: " + *options.config_path);
    Json config;
    in >> config;
    return config;
}

Species resolve_species(const CommonOptions& options, const Json& config,
                        Species fallback = Species::Boson) {
    if (options.species) return species_from_string(*options.species);
    if (config.contains("species")) return species_from_string(config.at("species").get<std::string>());
    return fallback;
}

std::uint64_t resolve_seed(const CommonOptions& options, const Json& config) {
    if (options.seed) return *options.seed;
    if (config.contains("seed")) return config.at("seed").get<std::uint64_t>();
    return 1;
}

std::optional<std::string> resolve_out(const CommonOptions& options, const Json& config) {
    if (options.out_path) return options.out_path;
    if (config.contains("output_path")) return config.at("output_path").get<std::string>();
    return std::nullopt;
}

void write_text(const std::optional<std::string>& path, const std::string& text) {
    if (path) {
        std::ofstream out(*path);
        if (!out) throw std::invalid_argument("cannot open output file: " + *path);
        out << text;
    } else {
        std::cout << text;
    }
}

struct PipelineInput {
    FockSuperposition state;
    std::int64_t combinatorial_upper = 0;
    std::int64_t input_rank_factor = 0;
    bool normalized_on_load = false;
};

PipelineInput make_pipeline_input(FockSuperposition state, int output_N) {
    PipelineInput input;
    const double norm2 = state.norm_squared();
    if (norm2 <= 0.0) throw std::invalid_argument("input state has zero norm");
    if (std::abs(norm2 - 1.0) > 1e-9) {
        for (auto& term : state.terms) term.amplitude /= std::sqrt(norm2);
        input.normalized_on_load = true;
    }
    std::int64_t fact = 1;
    for (int k = 2; k <= output_N; ++k) fact *= k;
    for (const auto& term : state.terms) {
        if (std::abs(term.amplitude) <= kAmplitudeZero) continue;
        std::int64_t paths = fact;
        for (int count : term.occupation.counts) {
            std::int64_t cf = 1;
            for (int k = 2; k <= count; ++k) cf *= k;
            paths /= cf;
        }
        input.combinatorial_upper += paths;
        ++input.input_rank_factor;
    }
    input.state = std::move(state);
    return input;
}

PipelineInput load_input_state(const Json& config, const SetupSpec& spec,
                               const ComplexMatrix& w) {
    FockSuperposition state;
    if (config.contains("input_state")) {
        const Json& js = config.at("input_state");
        const std::string type = js.value("type", "tensor");
        if (type == "tensor") {
            const CoefficientTensor tensor = tensor_from_json(js);
            if (tensor.d != spec.d)
                throw std::invalid_argument("input tensor d does not match the setup");
            if (static_cast<Eigen::Index>(tensor.d) * tensor.N != w.rows())
                throw std::invalid_argument("input tensor does not span the setup's input modes");
            state = omega_apply(tensor);
        } else if (type == "fock") {
            state = fock_from_json(js);
            if (state.n_modes != w.rows())
                throw std::invalid_argument("input Fock state does not match the setup's input modes");
        } else {
            throw std::invalid_argument("input_state.type must be 'tensor' or 'fock'");
        }
    } else {
        // Everything absorbed into W: all particles enter in internal state 1.
        if (w.rows() % spec.d != 0)
            throw std::invalid_argument("setup rows are not grouped by d; provide input_state");
        const int groups = static_cast<int>(w.rows()) / spec.d;
        CoefficientTensor tensor(spec.d, groups);
        tensor.amplitudes[0] = Complex(1.0, 0.0);
        state = omega_apply(tensor);
    }
    if (state.particles != spec.N)
        throw std::invalid_argument("input particle number does not match the setup's N");
    return make_pipeline_input(std::move(state), spec.N);
}

Json run_pipeline(const SetupSpec& spec, const ComplexMatrix& w, const PipelineInput& input,
                  Species species) {
    const FockSuperposition output = evolve_fock(input.state, w, species);
    const PostSelection selected = post_select(output, spec.d, spec.N);

    Json report;
    report["d"] = spec.d;
    report["N"] = spec.N;
    report["species"] = to_string(species);
    report["input_normalized_on_load"] = input.normalized_on_load;
    report["success_probability"] = selected.success_probability;
    if (selected.success_probability > 1.0 + 1e-9)
        std::cerr << "warning: success probability " << selected.success_probability
                  << " exceeds 1; the setup matrix is not sub-unitary\n";

    if (selected.success_probability > 0.0) {
        CoefficientTensor normalized = selected.tensor;
        normalized.amplitudes /= std::sqrt(selected.success_probability);
        normalized = canonical_phase(normalized);
        report["tensor"] = to_json(normalized);
        report["rank_report"] =
            to_json(rank_report(normalized, input.combinatorial_upper, input.input_rank_factor));
    } else {
        report["tensor"] = to_json(selected.tensor);
        report["rank_report"] = nullptr;
    }
    return report;
}

// ---------------------------------------------------------------------------
// Bundled experiment pieces
// ---------------------------------------------------------------------------

FockSuperposition spdc_four_photon_input() {
    // Two horizontally and two vertically polarized photons across two
    // spatial modes: |2002> + |0220> + |1111>, equal weights.
    FockSuperposition state;
    state.n_modes = 4;
    state.particles = 4;
    const Complex amp(1.0 / std::sqrt(3.0), 0.0);
    state.terms.push_back({ModeOccupation{{2, 0, 0, 2}}, amp});
    state.terms.push_back({ModeOccupation{{0, 2, 2, 0}}, amp});
    state.terms.push_back({ModeOccupation{{1, 1, 1, 1}}, amp});
    return state;
}

CoefficientTensor family_analytic_tensor(double gamma) {
    CoefficientTensor g(2, 4);
    const double s2 = std::sin(2.0 * gamma);
    const double scale = 1.0 / (2.0 * std::sqrt(3.0));
    const double ghz_weight = scale * std::numbers::sqrt2 * s2 * s2;
    const double bell_weight = scale * std::cos(4.0 * gamma);
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    g.at({1, 1, 2, 2}) += ghz_weight * inv_sqrt2;
    g.at({2, 2, 1, 1}) += ghz_weight * inv_sqrt2;
    g.at({1, 2, 1, 2}) += bell_weight * 0.5;
    g.at({1, 2, 2, 1}) += bell_weight * 0.5;
    g.at({2, 1, 1, 2}) += bell_weight * 0.5;
    g.at({2, 1, 2, 1}) += bell_weight * 0.5;
    return g;
}

double family_success_probability(double gamma) {
    const double c4 = std::cos(4.0 * gamma);
    const double s2 = std::sin(2.0 * gamma);
    return (c4 * c4 + 2.0 * s2 * s2 * s2 * s2) / 12.0;
}

// Analyzer on photons 1,3,5 (detector groups), identity on photons 2,4,6.
ComplexMatrix ghz_swap_matrix() {
    const ComplexMatrix analyzer = compile(named_device("ghz_analyzer", {}));
    ComplexMatrix w = ComplexMatrix::Zero(12, 12);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            w.block(4 * a, 4 * b, 2, 2) = analyzer.block(2 * a, 2 * b, 2, 2);
    for (int p : {1, 3, 5})
        w.block(2 * p, 2 * p, 2, 2) = ComplexMatrix::Identity(2, 2);
    return w;
}

FockSuperposition bell_pairs_input() {
    FockSuperposition state;
    state.n_modes = 12;
    state.particles = 6;
    const Complex amp(1.0 / (2.0 * std::numbers::sqrt2), 0.0);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int z = 0; z < 2; ++z) {
                std::vector<int> counts(12, 0);
                counts[static_cast<std::size_t>(0 + x)] = 1;   // photon 1
                counts[static_cast<std::size_t>(2 + x)] = 1;   // photon 2
                counts[static_cast<std::size_t>(4 + y)] = 1;   // photon 3
                counts[static_cast<std::size_t>(6 + y)] = 1;   // photon 4
                counts[static_cast<std::size_t>(8 + z)] = 1;   // photon 5
                counts[static_cast<std::size_t>(10 + z)] = 1;  // photon 6
                state.terms.push_back({ModeOccupation{std::move(counts)}, amp});
            }
    return state;
}

CoefficientTensor ghz_tensor(int parties) {
    CoefficientTensor g(2, parties);
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    g.amplitudes[0] = inv_sqrt2;
    g.amplitudes[g.amplitudes.size() - 1] = inv_sqrt2;
    return g;
}

std::vector<int> parse_n_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) return {std::stoi(text)};
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    if (hi < lo) throw std::invalid_argument("bad N range: " + text);
    std::vector<int> values;
    for (int n = lo; n <= hi; ++n) values.push_back(n);
    return values;
}

}  // namespace

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

int cmd_simulate(const CommonOptions& options) {
    const Json config = load_config(options);
    if (!config.contains("setup"))
        throw std::invalid_argument("simulate needs a config with a 'setup' entry");
    const SetupSpec spec = setup_from_json(config.at("setup"));
    const ComplexMatrix w = compile(spec);
    const Species species = resolve_species(options, config);
    const PipelineInput input = load_input_state(config, spec, w);

    Json report = run_pipeline(spec, w, input, species);
    report["setup"] = to_json(spec);
    write_text(resolve_out(options, config), report.dump(2) + "\n");
    return kExitOk;
}

// ---------------------------------------------------------------------------
// family
// ---------------------------------------------------------------------------

int cmd_family(const FamilyOptions& options) {
    const Json config = load_config(options);
    int steps = 33;
    double start = 0.0;
    double stop = std::numbers::pi / 4.0;
    if (config.contains("sweep")) {
        const Json& sweep = config.at("sweep");
        if (sweep.value("name", "gamma") != std::string("gamma"))
            throw std::invalid_argument("family sweeps the parameter 'gamma'");
        start = sweep.value("start", start);
        stop = sweep.value("stop", stop);
        steps = sweep.value("steps", steps);
    }
    if (options.steps) steps = *options.steps;
    if (steps < 1) throw std::invalid_argument("family: need at least one sweep point");

    const PipelineInput input = make_pipeline_input(spdc_four_photon_input(), 4);

    std::ostringstream csv;
    csv << "gamma,success_probability,success_expected,fidelity";
    {
        const CoefficientTensor probe(2, 4);
        for (std::size_t flat = 0; flat < probe.size(); ++flat) {
            const auto idx = probe.multi_index(flat);
            std::string label;
            for (int j : idx) label += static_cast<char>('0' + j);
            csv << ",c_" << label << "_re,c_" << label << "_im";
        }
    }
    csv << "\n";

    bool physics_ok = true;
    for (int i = 0; i < steps; ++i) {
        const double gamma = steps == 1 ? start : start + (stop - start) * i / (steps - 1);
        const SetupSpec spec = named_device("four_photon_family", {gamma});
        const ComplexMatrix w = compile(spec);
        const FockSuperposition output = evolve_fock(input.state, w, Species::Boson);
        const PostSelection selected = post_select(output, 2, 4);

        const double expected = family_success_probability(gamma);
        const CoefficientTensor analytic = family_analytic_tensor(gamma);
        const double fid = fidelity(selected.tensor, analytic);
        if (std::abs(selected.success_probability - expected) > 1e-10 || fid < 1.0 - 1e-9)
            physics_ok = false;

        const CoefficientTensor canonical = canonical_phase(selected.tensor);
        csv << format_double(gamma) << ',' << format_double(selected.success_probability) << ','
            << format_double(expected) << ',' << format_double(fid);
        for (Eigen::Index k = 0; k < canonical.amplitudes.size(); ++k)
            csv << ',' << format_double(canonical.amplitudes[k].real()) << ','
                << format_double(canonical.amplitudes[k].imag());
        csv << "\n";
    }

    write_text(resolve_out(options, config), csv.str());
    if (!physics_ok) {
        std::cerr << "family: simulated state left the analytic family beyond tolerance\n";
        return kExitPhysicsFailure;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// ghz-swap
// ---------------------------------------------------------------------------

int cmd_ghz_swap(const GhzSwapOptions& options) {
    const Json config = load_config(options);
    const Species species = resolve_species(options, config);
    const ComplexMatrix w = ghz_swap_matrix();

    FockSuperposition state;
    if (config.contains("input_state")) {
        const Json& js = config.at("input_state");
        if (js.value("type", "fock") != std::string("fock"))
            throw std::invalid_argument("ghz-swap expects a Fock input_state");
        state = fock_from_json(js);
        if (state.n_modes != 12 || state.particles != 6)
            throw std::invalid_argument("ghz-swap input must have 12 modes and 6 particles");
    } else {
        state = bell_pairs_input();
    }
    const PipelineInput input = make_pipeline_input(std::move(state), 6);

    const FockSuperposition output = evolve_fock(input.state, w, species);
    const PostSelection selected = post_select(output, 2, 6);

    Json report;
    report["species"] = to_string(species);
    report["post_selection_probability"] = selected.success_probability;

    double fid = 0.0;
    if (selected.success_probability > 0.0) {
        const ConditionalState conditional =
            conditional_state(selected.tensor, {{1, 1}, {3, 1}, {5, 1}});
        fid = fidelity(conditional.tensor, ghz_tensor(3));
        report["detector_conditional_probability"] = conditional.probability;
        report["heralding_probability"] = selected.success_probability * conditional.probability;
        report["fidelity_ghz3"] = fid;
        const CoefficientTensor canonical = canonical_phase(conditional.tensor);
        report["conditional_state"] = to_json(canonical);
        report["rank_report"] =
            to_json(rank_report(canonical, input.combinatorial_upper, input.input_rank_factor));
    } else {
        report["detector_conditional_probability"] = 0.0;
        report["heralding_probability"] = 0.0;
        report["fidelity_ghz3"] = nullptr;
        report["conditional_state"] = nullptr;
        report["rank_report"] = nullptr;
    }

    write_text(resolve_out(options, config), report.dump(2) + "\n");
    if (options.min_fidelity && fid < *options.min_fidelity) {
        std::cerr << "ghz-swap: conditional fidelity " << fid << " below required "
                  << *options.min_fidelity << "\n";
        return kExitPhysicsFailure;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// table2
// ---------------------------------------------------------------------------

const std::vector<ReferenceCell>& table2_reference() {
    // Expected manifold dimensions per (species, d, N); mirrored in
    // data/table2_reference.csv. Red cells are the N = 2 boson entries where
    // the two-path bound caps the dimension below both closed-form limits.
    static const std::vector<ReferenceCell> cells = {
        {"boson", 2, 2, 4, false},   {"boson", 2, 3, 8, false},   {"boson", 2, 4, 16, false},
        {"boson", 2, 5, 32, false},  {"boson", 2, 6, 62, false},  {"boson", 2, 7, 86, false},
        {"boson", 2, 8, 114, false}, {"boson", 3, 2, 8, true},    {"boson", 3, 3, 23, false},
        {"boson", 3, 4, 42, false},  {"boson", 3, 5, 67, false},  {"boson", 3, 6, 98, false},
        {"boson", 4, 2, 12, true},   {"boson", 4, 3, 32, false},  {"boson", 4, 4, 58, false},
        {"boson", 4, 5, 92, false},  {"boson", 4, 6, 134, false}, {"boson", 5, 2, 16, true},
        {"boson", 5, 3, 41, false},  {"boson", 5, 4, 74, false},  {"boson", 5, 5, 117, false},
        {"fermion", 2, 2, 4, false}, {"fermion", 2, 3, 8, false}, {"fermion", 2, 4, 14, false},
        {"fermion", 2, 5, 22, false},{"fermion", 2, 6, 32, false},{"fermion", 2, 7, 44, false},
        {"fermion", 3, 2, 8, false}, {"fermion", 3, 3, 17, false},{"fermion", 3, 4, 30, false},
        {"fermion", 3, 5, 47, false},{"fermion", 3, 6, 68, false},{"fermion", 4, 2, 12, false},
        {"fermion", 4, 3, 26, false},{"fermion", 4, 4, 46, false},{"fermion", 4, 5, 72, false},
        {"fermion", 5, 2, 16, false},{"fermion", 5, 3, 35, false},{"fermion", 5, 4, 62, false},
        {"fermion", 5, 5, 97, false},
    };
    return cells;
}

namespace {

const ReferenceCell* find_reference(Species species, int d, int N) {
    for (const auto& cell : table2_reference())
        if (cell.d == d && cell.N == N && species_from_string(cell.species) == species)
            return &cell;
    return nullptr;
}

}  // namespace

int cmd_table2(const Table2Options& options) {
    const Json config = load_config(options);
    const std::uint64_t seed = resolve_seed(options, config);

    std::vector<Species> species_list;
    if (options.species || config.contains("species"))
        species_list = {resolve_species(options, config)};
    else
        species_list = {Species::Boson, Species::Fermion};

    bool mismatch = false;
    std::ostringstream csv;
    csv << "d,N,species,rank,bound,dN_power,tight,seconds\n";
    Json json_rows = Json::array();

    for (Species species : species_list) {
        std::vector<Table2Cell> cells;
        if (options.d || options.n_range) {
            if (!options.d || !options.n_range)
                throw std::invalid_argument("table2: pass both --d and --N, or neither");
            for (int n : parse_n_range(*options.n_range)) cells.push_back({*options.d, n});
        } else {
            for (const auto& ref : table2_reference())
                if (species_from_string(ref.species) == species) cells.push_back({ref.d, ref.N});
        }

        auto rows = table2(cells, species, options.trials, seed);
        for (auto& row : rows) {
            if (!options.timings) row.seconds = 0.0;
            csv << row.d << ',' << row.N << ',' << to_string(row.species) << ',' << row.rank << ','
                << row.bound << ',' << row.dn_power << ',' << (row.tight ? "true" : "false") << ','
                << format_double(row.seconds) << "\n";
            json_rows.push_back(to_json(row));

            if (const ReferenceCell* ref = find_reference(species, row.d, row.N)) {
                if (row.skipped || row.rank != ref->rank) {
                    mismatch = true;
                    std::cerr << "table2: " << to_string(species) << " d=" << row.d
                              << " N=" << row.N << " computed rank " << row.rank
                              << " but the vendored reference says " << ref->rank << "\n";
                }
                if (!ref->red && !row.skipped &&
                    row.rank != std::min(row.bound, row.dn_power)) {
                    mismatch = true;
                    std::cerr << "table2: " << to_string(species) << " d=" << row.d
                              << " N=" << row.N << " rank " << row.rank
                              << " != min(bound, d^N) = " << std::min(row.bound, row.dn_power)
                              << "\n";
                }
            }
        }
    }

    write_text(resolve_out(options, config), csv.str());
    if (options.json_path) {
        std::ofstream out(*options.json_path);
        if (!out) throw std::invalid_argument("cannot open output file: " + *options.json_path);
        out << json_rows.dump(2) << "\n";
    }
    return mismatch ? kExitPhysicsFailure : kExitOk;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

namespace {

struct VerifyContext {
    std::uint64_t seed = 1;
    int scale = 1;  // 0 = small, 1 = default, 2 = large
    bool all_ok = true;

    int count(int small, int normal, int large) const {
        return scale == 0 ? small : scale == 2 ? large : normal;
    }
};

class SuiteRun {
public:
    SuiteRun(VerifyContext& context, std::string name)
        : context_(context), name_(std::move(name)) {}

    void check(bool ok, const std::string& detail, const Json& counterexample = {}) {
        ++checks_;
        if (ok) return;
        ++failures_;
        if (first_failure_.empty()) {
            first_failure_ = detail;
            counterexample_ = counterexample;
        }
    }

    ~SuiteRun() {
        if (failures_ == 0) {
            std::cout << "[ ok ] " << name_ << " (" << checks_ << " checks)\n";
        } else {
            context_.all_ok = false;
            std::cout << "[FAIL] " << name_ << " (" << failures_ << "/" << checks_
                      << " checks failed): " << first_failure_ << "\n";
            if (!counterexample_.is_null())
                std::cerr << "counterexample for " << name_ << ":\n"
                          << counterexample_.dump(2) << "\n";
        }
    }

private:
    VerifyContext& context_;
    std::string name_;
    int checks_ = 0;
    int failures_ = 0;
    std::string first_failure_;
    Json counterexample_;
};

double tensor_distance(const CoefficientTensor& a, const CoefficientTensor& b) {
    const double scale = std::max(1e-300, b.amplitudes.cwiseAbs().maxCoeff());
    return (a.amplitudes - b.amplitudes).cwiseAbs().maxCoeff() / scale;
}

void suite_permanent_kernels(VerifyContext& context) {
    SuiteRun suite(context, "permanent and determinant kernels");
    const int per_size = context.count(2, 8, 24);
    for (int n = 1; n <= 8; ++n) {
        for (int t = 0; t < per_size; ++t) {
            const ComplexMatrix a = oracles::random_ginibre(
                n, n, context.seed + static_cast<std::uint64_t>(n) * 131 + static_cast<std::uint64_t>(t));
            const Complex naive = oracles::naive_permanent(a);
            const Complex ryser = permanent(a);
            const Complex glynn = oracles::glynn_permanent(a);
            const double scale = std::max(1.0, std::abs(naive));
            suite.check(std::abs(ryser - naive) / scale < 1e-10, "ryser vs naive permanent",
                        to_json(a));
            suite.check(std::abs(glynn - naive) / scale < 1e-10, "glynn vs naive permanent",
                        to_json(a));
            if (n <= 6) {
                const Complex det = determinant(a);
                const Complex det_naive = oracles::naive_determinant(a);
                suite.check(std::abs(det - det_naive) / std::max(1.0, std::abs(det_naive)) < 1e-10,
                            "lu vs signed permutation sum", to_json(a));
            }
        }
    }
    ComplexMatrix ones = ComplexMatrix::Constant(3, 3, Complex(1.0, 0.0));
    suite.check(std::abs(permanent(ones) - Complex(6.0, 0.0)) < 1e-12, "perm(J_3) == 3!");
    suite.check(std::abs(permanent(ComplexMatrix::Identity(3, 3)) - Complex(1.0, 0.0)) < 1e-12,
                "perm(I_3) == 1");
}

void suite_coefficient_oracle(VerifyContext& context) {
    SuiteRun suite(context, "coefficient tensor vs permutation-sum oracle");
    const int instances = context.count(60, 500, 1500);
    std::mt19937_64 rng(context.seed ^ 0x5eedULL);
    for (int t = 0; t < instances; ++t) {
        const int d = 2 + static_cast<int>(rng() % 2);
        const int n_particles = 2 + static_cast<int>(rng() % 4);
        const Species species = (rng() & 1) ? Species::Fermion : Species::Boson;
        const ComplexMatrix w = oracles::random_ginibre(d * n_particles, d * n_particles, rng());
        const CoefficientTensor fast = coefficient_tensor(w, species, d, n_particles);
        const CoefficientTensor slow = oracles::permutation_sum_tensor(w, species, d, n_particles);
        suite.check(tensor_distance(fast, slow) < 1e-10, "kernel route deviates from path sum",
                    Json{{"d", d}, {"N", n_particles}, {"species", to_string(species)},
                         {"matrix", to_json(w)}});
    }
}

void suite_hom_physics(VerifyContext& context) {
    SuiteRun suite(context, "two-particle interference (balanced splitter)");
    const ComplexMatrix w = compile(named_device("beamsplitter", {2}));

    const CoefficientTensor boson_same = coefficient_tensor(w, Species::Boson, 2, 2, {1, 3});
    suite.check(boson_same.amplitudes.cwiseAbs().maxCoeff() < 1e-12,
                "bosons in equal internal states must never coincide");

    const CoefficientTensor fermion_same = coefficient_tensor(w, Species::Fermion, 2, 2, {1, 3});
    suite.check(std::abs(fermion_same.at({1, 1}) - Complex(-1.0, 0.0)) < 1e-12,
                "fermion coincidence amplitude");
    suite.check(std::abs(fermion_same.norm_squared() - 1.0) < 1e-12,
                "fermion anti-bunching success probability");

    const CoefficientTensor boson_hv = coefficient_tensor(w, Species::Boson, 2, 2, {1, 4});
    suite.check(std::abs(boson_hv.at({1, 2}) - Complex(-0.5, 0.0)) < 1e-12, "boson HV amplitude");
    suite.check(std::abs(boson_hv.at({2, 1}) - Complex(0.5, 0.0)) < 1e-12, "boson VH amplitude");
}

void suite_unitarity(VerifyContext& context) {
    SuiteRun suite(context, "probability conservation and Pauli exclusion");
    const int setups = context.count(20, 100, 300);
    std::mt19937_64 rng(context.seed ^ 0xc0ffeeULL);
    const std::vector<std::pair<int, int>> shapes = {{2, 2}, {2, 3}, {2, 4}, {3, 2}, {4, 2}};
    for (int t = 0; t < setups; ++t) {
        const auto [d, n_particles] = shapes[static_cast<std::size_t>(rng() % shapes.size())];
        const ComplexMatrix u = oracles::random_unitary(d * n_particles, rng());
        for (Species species : {Species::Boson, Species::Fermion}) {
            CoefficientTensor input(d, n_particles);
            for (Eigen::Index i = 0; i < input.amplitudes.size(); ++i)
                input.amplitudes[i] = Complex(std::normal_distribution<double>()(rng),
                                              std::normal_distribution<double>()(rng));
            input.amplitudes /= std::sqrt(input.norm_squared());
            const FockSuperposition output = evolve_fock(omega_apply(input), u, species);
            suite.check(std::abs(output.norm_squared() - 1.0) < 1e-9,
                        "unitary evolution must conserve total probability",
                        Json{{"d", d}, {"N", n_particles}, {"species", to_string(species)}});
            if (species == Species::Fermion) {
                bool pauli_ok = true;
                for (const auto& term : output.terms) {
                    bool multi = false;
                    for (int count : term.occupation.counts)
                        if (count >= 2) multi = true;
                    if (multi && std::abs(term.amplitude) > 1e-12) pauli_ok = false;
                }
                suite.check(pauli_ok, "fermion amplitude on multiply occupied output");
            }
        }
    }
    // The exclusion rule is the determinant vanishing on repeated columns;
    // check the kernel itself, not just the pipeline's short-circuit.
    for (int t = 0; t < context.count(5, 25, 100); ++t) {
        ComplexMatrix a = oracles::random_ginibre(4, 4, rng());
        a.col(2) = a.col(0);
        suite.check(std::abs(determinant(a)) < 1e-12, "determinant with repeated columns");
    }
}

void suite_rank_bounds(VerifyContext& context) {
    SuiteRun suite(context, "bipartite ranks against path-counting bounds");
    const int pipelines = context.count(60, 500, 1200);
    std::mt19937_64 rng(context.seed ^ 0xbeefULL);
    for (int t = 0; t < pipelines; ++t) {
        const int d = 2 + static_cast<int>(rng() % 3);
        const int n_particles = 2 + static_cast<int>(rng() % 3);
        const ComplexMatrix w = oracles::random_ginibre(d * n_particles, d * n_particles, rng());
        const CoefficientTensor g = coefficient_tensor(w, Species::Boson, d, n_particles);
        if (g.norm_squared() < 1e-12) continue;
        ModeOccupation ones;
        ones.counts.assign(static_cast<std::size_t>(n_particles), 1);
        const std::int64_t bound = combinatorial_bound(n_particles, ones, 1);
        const auto max_rank = max_bipartite_rank(g);
        suite.check(max_rank.rank <= bound, "bipartite rank exceeded N!",
                    Json{{"d", d}, {"N", n_particles}, {"matrix", to_json(w)}});
    }
    for (int t = 0; t < context.count(20, 80, 200); ++t) {
        const int d = 2 + static_cast<int>(rng() % 3);
        const int n_particles = 2 + static_cast<int>(rng() % 3);
        const ComplexMatrix w = oracles::random_ginibre(d * n_particles, d * n_particles, rng());
        std::vector<int> bec_rows(static_cast<std::size_t>(n_particles), 1);
        const CoefficientTensor g = coefficient_tensor(w, Species::Boson, d, n_particles, bec_rows);
        if (g.norm_squared() < 1e-12) continue;
        suite.check(max_bipartite_rank(g).rank == 1,
                    "single-source (condensate) output must be separable",
                    Json{{"d", d}, {"N", n_particles}});
    }
}

void suite_minors(VerifyContext& context) {
    SuiteRun suite(context, "determinant factorization and minor ranks");
    std::mt19937_64 rng(context.seed ^ 0x31a70ULL);
    const int instances = context.count(40, 200, 500);
    for (int t = 0; t < instances; ++t) {
        const int n_particles = 2 + static_cast<int>(rng() % 4);
        const ComplexMatrix wp = oracles::random_ginibre(n_particles, 2 * n_particles, rng());
        const MinorDecomposition dec = decompose(wp, 2);
        const CoefficientTensor g = coefficient_tensor(wp, Species::Fermion, 2, n_particles,
                                                       [&] {
                                                           std::vector<int> rows;
                                                           for (int m = 1; m <= n_particles; ++m)
                                                               rows.push_back(m);
                                                           return rows;
                                                       }());
        double worst = 0.0;
        const double scale = std::max(1e-300, g.amplitudes.cwiseAbs().maxCoeff());
        for (std::size_t flat = 0; flat < g.size(); ++flat) {
            const Complex rec = reconstruct(dec, 2, g.multi_index(flat));
            worst = std::max(worst,
                             std::abs(rec - g.amplitudes[static_cast<Eigen::Index>(flat)]) / scale);
        }
        suite.check(worst < 1e-9, "qubit reconstruction identity", to_json(wp));
    }
    for (int n = 2; n <= 5; ++n) {
        const int expected = n * n - n + 1;
        suite.check(minor_map_rank(n, 3, context.seed) == expected, "principal-minor map rank");
        suite.check(spanning_minor_rank(n, 3, context.seed) == expected,
                    "spanning family spans the minor map");
    }
}

void suite_embedding(VerifyContext& context) {
    SuiteRun suite(context, "unitary embedding of lossy matrices");
    std::mt19937_64 rng(context.seed ^ 0xe3bedULL);
    const int instances = context.count(40, 200, 400);
    for (int t = 0; t < instances; ++t) {
        const int n = 2 + static_cast<int>(rng() % 7);
        const ComplexMatrix w = oracles::random_subunitary(n, rng());
        const ComplexMatrix u = embed_unitary(w, 1e-9);
        const double unitarity =
            (u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
        const double block = (u.topLeftCorner(n, n) - w).cwiseAbs().maxCoeff();
        suite.check(unitarity < 1e-10, "embedding is not unitary", to_json(w));
        suite.check(block < 1e-10, "embedding does not reproduce W", to_json(w));
    }
}

void suite_permutation_representation(VerifyContext& context) {
    SuiteRun suite(context, "permutation representation of non-polarizing setups");
    std::mt19937_64 rng(context.seed ^ 0x9e99ULL);
    const int instances = context.count(20, 120, 300);
    for (int t = 0; t < instances; ++t) {
        const int d = 2 + static_cast<int>(rng() % 2);
        const int n_particles = 2 + static_cast<int>(rng() % 4);
        const Species species = (rng() & 1) ? Species::Fermion : Species::Boson;
        const ComplexMatrix v = oracles::random_ginibre(n_particles, n_particles, rng());
        std::vector<ComplexVector> states;
        std::vector<ComplexMatrix> locals;
        for (int k = 0; k < n_particles; ++k) {
            ComplexVector eps = oracles::random_ginibre(d, 1, rng()).col(0);
            eps /= eps.norm();
            states.push_back(eps);
            locals.push_back(oracles::unitary_with_first_row(eps));
        }
        SetupSpec spec;
        spec.kind = SetupSpec::Kind::NonPolarizing;
        spec.d = d;
        spec.N = n_particles;
        spec.matrix = v;
        spec.input_locals = locals;
        const CoefficientTensor via_kernel =
            coefficient_tensor(compile(spec), species, d, n_particles);
        const auto rep = permutation_representation(v, states, species);
        suite.check(tensor_distance(via_kernel, rep.materialized) < 1e-10,
                    "materialized path sum deviates from the pipeline",
                    Json{{"d", d}, {"N", n_particles}, {"species", to_string(species)}});
    }
}

void suite_duality(VerifyContext& context) {
    SuiteRun suite(context, "creation/detection duality");
    std::mt19937_64 rng(context.seed ^ 0xd0a1ULL);
    const int instances = context.count(20, 100, 250);
    for (int t = 0; t < instances; ++t) {
        const int d = 2;
        const int n_particles = 2 + static_cast<int>(rng() % 2);
        const Species species = (rng() & 1) ? Species::Fermion : Species::Boson;
        const ComplexMatrix u = oracles::random_unitary(d * n_particles, rng());
        CoefficientTensor signal(d, n_particles), target(d, n_particles);
        for (Eigen::Index i = 0; i < signal.amplitudes.size(); ++i) {
            signal.amplitudes[i] = Complex(std::normal_distribution<double>()(rng),
                                           std::normal_distribution<double>()(rng));
            target.amplitudes[i] = Complex(std::normal_distribution<double>()(rng),
                                           std::normal_distribution<double>()(rng));
        }
        const Complex via_reverse = detection_overlap(signal, u, target, species);
        const PostSelection created =
            post_select(evolve_fock(omega_apply(signal), u, species), d, n_particles);
        const Complex via_forward = std::conj(target.amplitudes.dot(created.tensor.amplitudes));
        suite.check(std::abs(via_reverse - via_forward) < 1e-10,
                    "overlap through W-dagger vs conjugated forward overlap",
                    Json{{"species", to_string(species)}, {"N", n_particles}});
    }
}

void suite_fock_algebra(VerifyContext& context) {
    SuiteRun suite(context, "occupation/assignment index algebra");
    std::mt19937_64 rng(context.seed ^ 0xf0c4ULL);
    const int instances = context.count(50, 300, 800);
    for (int t = 0; t < instances; ++t) {
        const int n = 2 + static_cast<int>(rng() % 15);
        const int n_particles = 1 + static_cast<int>(rng() % 6);
        ModeOccupation r;
        r.counts.assign(static_cast<std::size_t>(n), 0);
        for (int p = 0; p < n_particles; ++p) ++r.counts[static_cast<std::size_t>(rng() % n)];
        const ModeAssignment a = occupation_to_assignment(r);
        const ModeOccupation back = assignment_to_occupation(a, n);
        suite.check(back.counts == r.counts, "assignment round trip",
                    Json{{"occupation", r.counts}});
    }
    for (int t = 0; t < instances; ++t) {
        const int d = 1 + static_cast<int>(rng() % 4);
        const int n_particles = 1 + static_cast<int>(rng() % 4);
        ModeOccupation r;
        r.counts.assign(static_cast<std::size_t>(d * n_particles), 0);
        for (int p = 0; p < n_particles; ++p) ++r.counts[static_cast<std::size_t>(rng() % (d * n_particles))];
        bool index_ok = true;
        try {
            assignment_to_qudit_index(occupation_to_assignment(r), d);
        } catch (const std::domain_error&) {
            index_ok = false;
        }
        suite.check(index_ok == is_post_selected(r, d, n_particles),
                    "post-selection predicate vs index interpretability",
                    Json{{"occupation", r.counts}, {"d", d}});
    }
}

}  // namespace

int cmd_verify(const VerifyOptions& options) {
    const Json config = load_config(options);
    VerifyContext context;
    context.seed = resolve_seed(options, config);
    if (options.sizes == "small")
        context.scale = 0;
    else if (options.sizes == "default")
        context.scale = 1;
    else if (options.sizes == "large")
        context.scale = 2;
    else
        throw std::invalid_argument("verify: --sizes must be small, default or large");

    const auto start = std::chrono::steady_clock::now();
    suite_permanent_kernels(context);
    suite_coefficient_oracle(context);
    suite_hom_physics(context);
    suite_unitarity(context);
    suite_rank_bounds(context);
    suite_minors(context);
    suite_embedding(context);
    suite_permutation_representation(context);
    suite_duality(context);
    suite_fock_algebra(context);
    const auto stop = std::chrono::steady_clock::now();

    std::cout << (context.all_ok ? "all suites passed" : "FAILURES detected") << " in "
              << std::chrono::duration<double>(stop - start).count() << " s\n";
    return context.all_ok ? kExitOk : kExitPhysicsFailure;
}

}  // namespace iforge::commands
