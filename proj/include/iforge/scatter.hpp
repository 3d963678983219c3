#pragma once

#include <iforge/fock.hpp>
#include <iforge/types.hpp>

#include <optional>
#include <string>
#include <vector>

namespace iforge {

/// Declarative description of a scattering network over N spatial groups
/// of d internal modes each, compiled to a single-particle matrix.
///
/// NonPolarizing: one elementary N x N matrix V acting on the spatial
///   modes only, W = V (x) 1_d.
/// Polarizing:    one N x N matrix per internal state, no coupling between
///   internal states, W = sum_k V(k) (x) diag(e_k).
/// General:       unrestricted matrix, rows = input modes (a multiple of d),
///   columns = output modes. Lossy devices may have zero columns or fewer
///   rows than d*N.
struct SetupSpec {
    enum class Kind { NonPolarizing, Polarizing, General };

    Kind kind = Kind::General;
    int d = 0;
    int N = 0;
    ComplexMatrix matrix;                  // NonPolarizing V or General W
    std::vector<ComplexMatrix> matrices;   // Polarizing V(1)..V(d)
    std::vector<ComplexMatrix> input_locals;   // optional d x d unitaries per input group
    std::vector<ComplexMatrix> output_locals;  // optional d x d unitaries per output group
    std::optional<ModeOccupation> input_occupation;  // particles per source spatial mode
};

/// Builds the full single-particle matrix: the kind-specific structure,
/// then local unitaries as block-diagonal factors on either side, then
/// per-particle row-group replication for multiply occupied sources.
ComplexMatrix compile(const SetupSpec& spec);

/// Completes a sub-unitary W (all singular values <= 1 + tolerance) to a
/// unitary whose top-left block is W, adding one auxiliary mode per lossy
/// direction. The result is padded with identity ancillas up to size
/// (2n-1) x (2n-1); it is larger only when every direction of W is lossy,
/// which requires n auxiliary modes. Throws std::domain_error when a
/// singular value exceeds 1 + tolerance.
ComplexMatrix embed_unitary(const ComplexMatrix& w, double tolerance);

/// Conjugate transpose: the scattering process with input and output
/// modes exchanged is always described by W^dagger.
ComplexMatrix reverse(const ComplexMatrix& w);

/// Devices used by the bundled experiments. Names and parameters:
///   fourier(N, d)             discrete-Fourier multiport, unitary normalization
///   freespace(N, d, p)        constant matrix V_jk = sqrt(p)
///   ghz_analyzer              6x6 padded three-detector GHZ analyzer (d=2, N=3)
///   four_photon_family(gamma) 4x8 tunable four-photon setup (d=2, N=4)
///   beamsplitter(d)           balanced two-port splitter, W = BS (x) 1_d
///   pbs                       polarizing beam splitter (d=2, N=2)
SetupSpec named_device(const std::string& name, const std::vector<double>& params);

/// Kronecker product, row-major blocks: (A (x) B)(i*p+k, j*q+l) = A(i,j) B(k,l).
ComplexMatrix kronecker(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace iforge
