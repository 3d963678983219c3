#include <iforge/serialize.hpp>

#include <nlohmann/json.hpp>

#include <cstdio>

namespace iforge {

Json to_json(const Complex& z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Complex complex_from_json(const Json& j) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    return Complex(j.at("re").get<double>(), j.at("im").get<double>());
}

Json to_json(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix: expected non-empty array");
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(j.at(0).size());
    ComplexMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = j.at(static_cast<std::size_t>(r));
        if (static_cast<Eigen::Index>(row.size()) != cols)
            throw std::invalid_argument("matrix: ragged rows");
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = complex_from_json(row.at(static_cast<std::size_t>(c)));
    }
    return m;
}

Json to_json(const CoefficientTensor& t) {
    Json amps = Json::array();
    for (Eigen::Index i = 0; i < t.amplitudes.size(); ++i) amps.push_back(to_json(t.amplitudes[i]));
    return Json{{"type", "tensor"}, {"d", t.d}, {"N", t.N}, {"amplitudes", std::move(amps)}};
}

CoefficientTensor tensor_from_json(const Json& j) {
    CoefficientTensor t(j.at("d").get<int>(), j.at("N").get<int>());
    const auto& amps = j.at("amplitudes");
    if (amps.size() != t.size())
        throw std::invalid_argument("tensor: amplitude count is not d^N");
    for (std::size_t i = 0; i < t.size(); ++i)
        t.amplitudes[static_cast<Eigen::Index>(i)] = complex_from_json(amps.at(i));
    return t;
}

Json to_json(const FockSuperposition& s) {
    Json terms = Json::array();
    for (const auto& term : s.terms)
        terms.push_back(Json{{"occupation", term.occupation.counts},
                             {"amplitude", to_json(term.amplitude)}});
    return Json{{"type", "fock"},
                {"n_modes", s.n_modes},
                {"particles", s.particles},
                {"terms", std::move(terms)}};
}

FockSuperposition fock_from_json(const Json& j) {
    FockSuperposition s;
    s.n_modes = j.at("n_modes").get<int>();
    s.particles = j.at("particles").get<int>();
    for (const auto& term : j.at("terms")) {
        FockTerm t;
        t.occupation.counts = term.at("occupation").get<std::vector<int>>();
        t.amplitude = complex_from_json(term.at("amplitude"));
        if (t.occupation.modes() != s.n_modes)
            throw std::invalid_argument("fock: occupation length != n_modes");
        if (t.occupation.particles() != s.particles)
            throw std::invalid_argument("fock: term particle number mismatch");
        s.terms.push_back(std::move(t));
    }
    return s;
}

Json to_json(const SetupSpec& spec) {
    Json j;
    switch (spec.kind) {
        case SetupSpec::Kind::NonPolarizing: j["kind"] = "non_polarizing"; break;
        case SetupSpec::Kind::Polarizing: j["kind"] = "polarizing"; break;
        case SetupSpec::Kind::General: j["kind"] = "general"; break;
    }
    j["d"] = spec.d;
    j["N"] = spec.N;
    if (spec.kind == SetupSpec::Kind::Polarizing) {
        Json ms = Json::array();
        for (const auto& m : spec.matrices) ms.push_back(to_json(m));
        j["matrices"] = std::move(ms);
    } else {
        j["matrix"] = to_json(spec.matrix);
    }
    if (!spec.input_locals.empty()) {
        Json ls = Json::array();
        for (const auto& l : spec.input_locals) ls.push_back(to_json(l));
        j["input_locals"] = std::move(ls);
    }
    if (!spec.output_locals.empty()) {
        Json ls = Json::array();
        for (const auto& l : spec.output_locals) ls.push_back(to_json(l));
        j["output_locals"] = std::move(ls);
    }
    if (spec.input_occupation) j["input_occupation"] = spec.input_occupation->counts;
    return j;
}

SetupSpec setup_from_json(const Json& j) {
    if (j.contains("device")) {
        std::vector<double> params;
        if (j.contains("params")) params = j.at("params").get<std::vector<double>>();
        return named_device(j.at("device").get<std::string>(), params);
    }
    SetupSpec spec;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "non_polarizing")
        spec.kind = SetupSpec::Kind::NonPolarizing;
    else if (kind == "polarizing")
        spec.kind = SetupSpec::Kind::Polarizing;
    else if (kind == "general")
        spec.kind = SetupSpec::Kind::General;
    else
        throw std::invalid_argument("setup: unknown kind '" + kind + "'");
    spec.d = j.at("d").get<int>();
    spec.N = j.at("N").get<int>();
    if (spec.kind == SetupSpec::Kind::Polarizing) {
        for (const auto& m : j.at("matrices")) spec.matrices.push_back(matrix_from_json(m));
    } else {
        spec.matrix = matrix_from_json(j.at("matrix"));
    }
    if (j.contains("input_locals"))
        for (const auto& l : j.at("input_locals")) spec.input_locals.push_back(matrix_from_json(l));
    if (j.contains("output_locals"))
        for (const auto& l : j.at("output_locals")) spec.output_locals.push_back(matrix_from_json(l));
    if (j.contains("input_occupation")) {
        ModeOccupation occ;
        occ.counts = j.at("input_occupation").get<std::vector<int>>();
        spec.input_occupation = std::move(occ);
    }
    return spec;
}

Json to_json(const RankReport& report) {
    Json spectra = Json::array();
    for (const auto& s : report.spectra)
        spectra.push_back(Json{{"partition", s.partition}, {"singular_values", s.singular_values}});
    return Json{{"combinatorial_upper", report.combinatorial_upper},
                {"bipartite_lower", report.bipartite_lower},
                {"bipartition_achieving_lower", report.bipartition_achieving_lower},
                {"input_rank_factor", report.input_rank_factor},
                {"spectra", std::move(spectra)}};
}

Json to_json(const Table2Row& row) {
    return Json{{"d", row.d},
                {"N", row.N},
                {"species", to_string(row.species)},
                {"rank", row.rank},
                {"bound", row.bound},
                {"dN_power", row.dn_power},
                {"tight", row.tight},
                {"skipped", row.skipped},
                {"seconds", row.seconds},
                {"singular_values", row.singular_values}};
}

Species species_from_string(const std::string& name) {
    if (name == "boson") return Species::Boson;
    if (name == "fermion") return Species::Fermion;
    throw std::invalid_argument("species must be 'boson' or 'fermion', got '" + name + "'");
}

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

}  // namespace iforge
