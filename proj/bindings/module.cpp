#include <iforge/amplitude.hpp>
#include <iforge/dimension.hpp>
#include <iforge/entanglement.hpp>
#include <iforge/fock.hpp>
#include <iforge/minors.hpp>
#include <iforge/scatter.hpp>
#include <iforge/serialize.hpp>

#include <nlohmann/json.hpp>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace iforge;

namespace {

CoefficientTensor tensor_from_flat(const ComplexVector& amplitudes, int d, int N) {
    CoefficientTensor g(d, N);
    if (amplitudes.size() != g.amplitudes.size())
        throw std::invalid_argument("amplitude vector length is not d^N");
    g.amplitudes = amplitudes;
    return g;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "post-selected multi-qudit states from scattered bosons and fermions";

    py::enum_<Species>(m, "Species")
        .value("BOSON", Species::Boson)
        .value("FERMION", Species::Fermion);

    py::register_exception<SizeLimitError>(m, "SizeLimitError", PyExc_ValueError);

    // --- kernels -----------------------------------------------------------
    m.def("permanent", &permanent, py::arg("matrix"),
          "Permanent via Ryser's formula with Gray-code iteration (n <= 24).");
    m.def("determinant", &determinant, py::arg("matrix"));

    // --- setups ------------------------------------------------------------
    py::class_<SetupSpec>(m, "SetupSpec")
        .def_readonly("d", &SetupSpec::d)
        .def_readonly("N", &SetupSpec::N)
        .def("compile", [](const SetupSpec& spec) { return compile(spec); })
        .def("to_json", [](const SetupSpec& spec) { return to_json(spec).dump(); })
        .def("__repr__", [](const SetupSpec& spec) {
            return "<SetupSpec d=" + std::to_string(spec.d) + " N=" + std::to_string(spec.N) + ">";
        });

    m.def("named_device", &named_device, py::arg("name"),
          py::arg("params") = std::vector<double>{});
    m.def("setup_from_json",
          [](const std::string& text) { return setup_from_json(Json::parse(text)); });
    m.def("compile_setup", [](const SetupSpec& spec) { return compile(spec); });
    m.def("embed_unitary", &embed_unitary, py::arg("matrix"), py::arg("tolerance") = 1e-9);
    m.def("reverse", &reverse);
    m.def("kronecker", &kronecker);

    // --- Fock states ---------------------------------------------------------
    py::class_<FockSuperposition>(m, "FockState")
        .def(py::init([](int n_modes, int particles,
                         const std::vector<std::pair<std::vector<int>, Complex>>& terms) {
                 FockSuperposition s;
                 s.n_modes = n_modes;
                 s.particles = particles;
                 for (const auto& [occupation, amplitude] : terms) {
                     if (static_cast<int>(occupation.size()) != n_modes)
                         throw std::invalid_argument("occupation length != n_modes");
                     s.terms.push_back({ModeOccupation{occupation}, amplitude});
                 }
                 return s;
             }),
             py::arg("n_modes"), py::arg("particles"), py::arg("terms"))
        .def_readonly("n_modes", &FockSuperposition::n_modes)
        .def_readonly("particles", &FockSuperposition::particles)
        .def_property_readonly("terms",
                               [](const FockSuperposition& s) {
                                   std::vector<std::pair<std::vector<int>, Complex>> out;
                                   for (const auto& term : s.terms)
                                       out.emplace_back(term.occupation.counts, term.amplitude);
                                   return out;
                               })
        .def("norm_squared", &FockSuperposition::norm_squared);

    m.def("tensor_to_fock", [](const ComplexVector& amplitudes, int d, int N) {
        return omega_apply(tensor_from_flat(amplitudes, d, N));
    });
    m.def("fock_to_tensor", [](const FockSuperposition& state, int d, int N) {
        return omega_inverse(state, d, N).amplitudes;
    });
    m.def("is_post_selected", [](const std::vector<int>& counts, int d, int N) {
        return is_post_selected(ModeOccupation{counts}, d, N);
    });

    // --- evolution and post-selection ---------------------------------------
    m.def("evolve", &evolve_fock, py::arg("state"), py::arg("matrix"), py::arg("species"));
    m.def("post_select", [](const FockSuperposition& state, int d, int N) {
        const PostSelection selected = post_select(state, d, N);
        return py::make_tuple(selected.tensor.amplitudes, selected.success_probability);
    });
    m.def(
        "coefficient_tensor",
        [](const ComplexMatrix& w, Species species, int d, int N, std::vector<int> source_rows) {
            return coefficient_tensor(w, species, d, N, std::move(source_rows)).amplitudes;
        },
        py::arg("matrix"), py::arg("species"), py::arg("d"), py::arg("N"),
        py::arg("source_rows") = std::vector<int>{});
    m.def("detection_overlap",
          [](const ComplexVector& signal, const ComplexMatrix& w, const ComplexVector& target,
             Species species, int d, int N) {
              return detection_overlap(tensor_from_flat(signal, d, N), w,
                                       tensor_from_flat(target, d, N), species);
          });
    m.def("conditional_state",
          [](const ComplexVector& amplitudes, int d, int N, const std::map<int, int>& fixed) {
              const ConditionalState c = conditional_state(tensor_from_flat(amplitudes, d, N), fixed);
              return py::make_tuple(c.tensor.amplitudes, c.probability);
          });
    m.def("canonical_phase", [](const ComplexVector& amplitudes, int d, int N) {
        return canonical_phase(tensor_from_flat(amplitudes, d, N)).amplitudes;
    });
    m.def("fidelity", [](const ComplexVector& a, const ComplexVector& b, int d, int N) {
        return fidelity(tensor_from_flat(a, d, N), tensor_from_flat(b, d, N));
    });

    // --- entanglement diagnostics --------------------------------------------
    m.def(
        "combinatorial_bound",
        [](int N, const std::vector<int>& occupation, std::int64_t input_rank) {
            return combinatorial_bound(N, ModeOccupation{occupation}, input_rank);
        },
        py::arg("N"), py::arg("occupation"), py::arg("input_rank") = 1);
    m.def(
        "bipartite_rank",
        [](const ComplexVector& amplitudes, int d, int N, const std::vector<int>& partition,
           double tolerance) {
            return bipartite_rank(tensor_from_flat(amplitudes, d, N), partition, tolerance);
        },
        py::arg("amplitudes"), py::arg("d"), py::arg("N"), py::arg("partition"),
        py::arg("tolerance") = kRankTolerance);
    m.def(
        "max_bipartite_rank",
        [](const ComplexVector& amplitudes, int d, int N, double tolerance) {
            const auto best = max_bipartite_rank(tensor_from_flat(amplitudes, d, N), tolerance);
            return py::make_tuple(best.rank, best.partition);
        },
        py::arg("amplitudes"), py::arg("d"), py::arg("N"), py::arg("tolerance") = kRankTolerance);
    m.def("permutation_representation",
          [](const ComplexMatrix& v, const std::vector<ComplexVector>& states, Species species) {
              const auto rep = permutation_representation(v, states, species);
              return py::make_tuple(rep.permutations, rep.coefficients,
                                    rep.materialized.amplitudes);
          });

    // --- manifold dimensionality ----------------------------------------------
    py::class_<JacobianReport>(m, "JacobianReport")
        .def_readonly("d", &JacobianReport::d)
        .def_readonly("N", &JacobianReport::N)
        .def_readonly("species", &JacobianReport::species)
        .def_readonly("rank", &JacobianReport::rank)
        .def_readonly("singular_values", &JacobianReport::singular_values)
        .def_readonly("bound", &JacobianReport::bound)
        .def_readonly("trials", &JacobianReport::trials)
        .def_readonly("rank_disagreement", &JacobianReport::rank_disagreement)
        .def("__repr__", [](const JacobianReport& r) {
            return "<JacobianReport " + std::string(to_string(r.species)) +
                   " d=" + std::to_string(r.d) + " N=" + std::to_string(r.N) +
                   " rank=" + std::to_string(r.rank) + " bound=" + std::to_string(r.bound) + ">";
        });

    m.def("analytic_jacobian", &analytic_jacobian, py::arg("w_prime"), py::arg("species"),
          py::arg("d"), py::arg("N"));
    m.def("manifold_rank", &manifold_rank, py::arg("d"), py::arg("N"), py::arg("species"),
          py::arg("trials") = 5, py::arg("seed") = 1);
    m.def("fermion_bound", &fermion_bound);
    m.def("boson_bound", &boson_bound);
    m.def("lossless_parameter_count", [](int d, int N) {
        const auto k = lossless_parameter_count(d, N);
        return py::make_tuple(k.k(), k.boson_excess);
    });

    // --- principal-minor machinery ---------------------------------------------
    py::class_<MinorDecomposition>(m, "MinorDecomposition")
        .def_readonly("d_factor", &MinorDecomposition::d_factor)
        .def_readonly("c", &MinorDecomposition::c)
        .def_readonly("pivot_columns", &MinorDecomposition::pivot_columns)
        .def_readonly("rank_deficient", &MinorDecomposition::rank_deficient)
        .def_readonly("pivot_fallback", &MinorDecomposition::pivot_fallback);

    m.def("decompose", &decompose, py::arg("w_prime"), py::arg("d"));
    m.def("reconstruct", &reconstruct, py::arg("decomposition"), py::arg("d"),
          py::arg("multi_index"));
    m.def("principal_minors", &principal_minors);
    m.def("minor_map_rank", &minor_map_rank, py::arg("N"), py::arg("trials") = 3,
          py::arg("seed") = 1);
    m.def("spanning_minors", [](const ComplexMatrix& c) {
        std::vector<std::pair<std::vector<int>, Complex>> out;
        for (const auto& minor : spanning_minors(c)) out.emplace_back(minor.subset, minor.value);
        return out;
    });

    m.attr("__version__") = "0.1.0";
}
