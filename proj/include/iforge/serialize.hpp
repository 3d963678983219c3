#pragma once

#include <iforge/dimension.hpp>
#include <iforge/entanglement.hpp>
#include <iforge/fock.hpp>
#include <iforge/scatter.hpp>
#include <iforge/types.hpp>

#include <nlohmann/json_fwd.hpp>

#include <string>

namespace iforge {

using Json = nlohmann::ordered_json;

// Complex values serialize as {"re": ..., "im": ...}; matrices as arrays
// of rows. Round trips are lossless at double precision.

Json to_json(const Complex& z);
Complex complex_from_json(const Json& j);

Json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

Json to_json(const CoefficientTensor& t);
CoefficientTensor tensor_from_json(const Json& j);

Json to_json(const FockSuperposition& s);
FockSuperposition fock_from_json(const Json& j);

Json to_json(const SetupSpec& spec);
SetupSpec setup_from_json(const Json& j);

Json to_json(const RankReport& report);

Json to_json(const Table2Row& row);

Species species_from_string(const std::string& name);

/// Doubles in CSV output: 17 significant digits, round-trip exact.
std::string format_double(double value);

}  // namespace iforge
