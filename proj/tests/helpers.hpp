#pragma once

#include <iforge/amplitude.hpp>
#include <iforge/fock.hpp>
#include <iforge/types.hpp>

#include <doctest.h>

namespace iforge::test {

inline ComplexMatrix matrix2(Complex a, Complex b, Complex c, Complex d) {
    ComplexMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

inline double max_abs_difference(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

inline double tensor_difference(const CoefficientTensor& a, const CoefficientTensor& b) {
    REQUIRE(a.d == b.d);
    REQUIRE(a.N == b.N);
    return (a.amplitudes - b.amplitudes).cwiseAbs().maxCoeff();
}

/// Relative infinity-norm distance used by the oracle-equivalence checks.
inline double tensor_relative_error(const CoefficientTensor& got, const CoefficientTensor& expected) {
    const double scale = std::max(1e-300, expected.amplitudes.cwiseAbs().maxCoeff());
    return (got.amplitudes - expected.amplitudes).cwiseAbs().maxCoeff() / scale;
}

}  // namespace iforge::test
