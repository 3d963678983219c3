#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace iforge {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Particle statistics: selects permanent vs determinant and the
/// permutation sign rule (+1 for bosons, sgn(sigma) for fermions).
enum class Species { Boson, Fermion };

inline const char* to_string(Species s) {
    return s == Species::Boson ? "boson" : "fermion";
}

/// Thrown when an operation exceeds its hard combinatorial size limit
/// (distinct from a shape error: the request is well-formed, just too big).
class SizeLimitError : public std::runtime_error {
public:
    explicit SizeLimitError(const std::string& what) : std::runtime_error(what) {}
};

/// Amplitudes below this magnitude are treated as absent when deciding
/// whether a Fock component was projected out.
inline constexpr double kAmplitudeZero = 1e-14;

/// Relative singular-value cutoff for numerical rank decisions.
inline constexpr double kRankTolerance = 1e-8;

}  // namespace iforge
