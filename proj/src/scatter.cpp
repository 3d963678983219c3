#include <iforge/scatter.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace iforge {

namespace {

void require_unitary(const ComplexMatrix& u, const char* who, double tol) {
    if (u.rows() != u.cols()) throw std::invalid_argument(std::string(who) + ": not square");
    const double dev = (u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
    if (dev > tol) {
        std::ostringstream msg;
        msg << who << ": operator deviates from unitarity by " << dev;
        throw std::invalid_argument(msg.str());
    }
}

ComplexMatrix block_diagonal(const std::vector<ComplexMatrix>& blocks) {
    Eigen::Index rows = 0, cols = 0;
    for (const auto& b : blocks) { rows += b.rows(); cols += b.cols(); }
    ComplexMatrix out = ComplexMatrix::Zero(rows, cols);
    Eigen::Index r = 0, c = 0;
    for (const auto& b : blocks) {
        out.block(r, c, b.rows(), b.cols()) = b;
        r += b.rows();
        c += b.cols();
    }
    return out;
}

ComplexMatrix apply_locals(ComplexMatrix w, const SetupSpec& spec) {
    const int d = spec.d;
    if (!spec.input_locals.empty()) {
        if (w.rows() % d != 0 || static_cast<Eigen::Index>(spec.input_locals.size()) != w.rows() / d)
            throw std::invalid_argument("compile: input_locals count does not match input groups");
        for (const auto& l : spec.input_locals) {
            if (l.rows() != d || l.cols() != d)
                throw std::invalid_argument("compile: input local is not d x d");
            require_unitary(l, "compile: input local", 1e-9);
        }
        w = block_diagonal(spec.input_locals) * w;
    }
    if (!spec.output_locals.empty()) {
        if (w.cols() % d != 0 || static_cast<Eigen::Index>(spec.output_locals.size()) != w.cols() / d)
            throw std::invalid_argument("compile: output_locals count does not match output groups");
        for (const auto& l : spec.output_locals) {
            if (l.rows() != d || l.cols() != d)
                throw std::invalid_argument("compile: output local is not d x d");
            require_unitary(l, "compile: output local", 1e-9);
        }
        w = w * block_diagonal(spec.output_locals);
    }
    return w;
}

// One row group of d rows per source particle, in source-mode order.
ComplexMatrix replicate_rows(const ComplexMatrix& w, const ModeOccupation& occupation, int d) {
    if (w.rows() % d != 0)
        throw std::invalid_argument("compile: row count is not a multiple of d");
    const int sources = static_cast<int>(w.rows()) / d;
    if (occupation.modes() != sources)
        throw std::invalid_argument("compile: input_occupation length does not match source groups");
    const int particles = occupation.particles();
    ComplexMatrix out(static_cast<Eigen::Index>(d) * particles, w.cols());
    Eigen::Index r = 0;
    for (int s = 0; s < sources; ++s) {
        const int count = occupation.counts[static_cast<std::size_t>(s)];
        if (count < 0) throw std::invalid_argument("compile: negative occupation");
        for (int c = 0; c < count; ++c) {
            out.block(r, 0, d, w.cols()) = w.block(static_cast<Eigen::Index>(s) * d, 0, d, w.cols());
            r += d;
        }
    }
    return out;
}

}  // namespace

ComplexMatrix kronecker(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

ComplexMatrix compile(const SetupSpec& spec) {
    if (spec.d <= 0 || spec.N <= 0) throw std::invalid_argument("compile: d and N must be positive");
    ComplexMatrix w;
    switch (spec.kind) {
        case SetupSpec::Kind::NonPolarizing: {
            if (spec.matrix.rows() != spec.N || spec.matrix.cols() != spec.N)
                throw std::invalid_argument("compile: non-polarizing V must be N x N");
            w = kronecker(spec.matrix, ComplexMatrix::Identity(spec.d, spec.d));
            break;
        }
        case SetupSpec::Kind::Polarizing: {
            if (static_cast<int>(spec.matrices.size()) != spec.d)
                throw std::invalid_argument("compile: polarizing setup needs d matrices");
            w = ComplexMatrix::Zero(static_cast<Eigen::Index>(spec.N) * spec.d,
                                    static_cast<Eigen::Index>(spec.N) * spec.d);
            for (int k = 0; k < spec.d; ++k) {
                const auto& v = spec.matrices[static_cast<std::size_t>(k)];
                if (v.rows() != spec.N || v.cols() != spec.N)
                    throw std::invalid_argument("compile: polarizing V(k) must be N x N");
                for (int i = 0; i < spec.N; ++i)
                    for (int j = 0; j < spec.N; ++j)
                        w(static_cast<Eigen::Index>(i) * spec.d + k,
                          static_cast<Eigen::Index>(j) * spec.d + k) = v(i, j);
            }
            break;
        }
        case SetupSpec::Kind::General: {
            if (spec.matrix.size() == 0) throw std::invalid_argument("compile: general setup has no matrix");
            if (spec.matrix.rows() % spec.d != 0)
                throw std::invalid_argument("compile: general W rows must be a multiple of d");
            w = spec.matrix;
            break;
        }
    }
    w = apply_locals(std::move(w), spec);
    if (spec.input_occupation) w = replicate_rows(w, *spec.input_occupation, spec.d);
    return w;
}

ComplexMatrix embed_unitary(const ComplexMatrix& w, double tolerance) {
    if (w.rows() != w.cols()) throw std::invalid_argument("embed_unitary: W must be square");
    const Eigen::Index n = w.rows();
    Eigen::JacobiSVD<ComplexMatrix> svd(w, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RealVector sigma = svd.singularValues();
    if (sigma.size() > 0 && sigma(0) > 1.0 + tolerance) {
        std::ostringstream msg;
        msg << "embed_unitary: largest singular value " << sigma(0)
            << " exceeds 1 (unphysical matrix)";
        throw std::domain_error(msg.str());
    }

    // Defect per singular direction; directions already on the unit sphere
    // (gap below 1e-12, invisible at the 1e-10 unitarity target) need no
    // ancilla.
    RealVector defect(n);
    Eigen::Index lossy = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double s = std::min(sigma(i), 1.0);
        const double gap = std::max(0.0, 1.0 - s * s);
        defect(i) = gap > 1e-12 ? std::sqrt(gap) : 0.0;
        if (defect(i) > 0.0) ++lossy;
    }

    const Eigen::Index aux = std::max(lossy, n - 1);
    const Eigen::Index size = n + aux;
    ComplexMatrix u = ComplexMatrix::Identity(size, size);
    u.topLeftCorner(n, n) = w;

    // Rotate each lossy singular direction against its own ancilla:
    //   [ P S Q*   P D P* ]
    //   [ Q D Q*  -Q S P* ]  restricted to the lossy columns/rows.
    const ComplexMatrix p = svd.matrixU();
    const ComplexMatrix q = svd.matrixV();
    ComplexMatrix x = ComplexMatrix::Zero(n, lossy);
    ComplexMatrix y = ComplexMatrix::Zero(lossy, n);
    ComplexMatrix z = ComplexMatrix::Zero(lossy, lossy);
    Eigen::Index slot = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (defect(i) <= 0.0) continue;
        x.col(slot) = defect(i) * p.col(i);
        y.row(slot) = defect(i) * q.col(i).adjoint();
        z(slot, slot) = -std::min(sigma(i), 1.0);
        ++slot;
    }
    u.block(0, n, n, lossy) = x;
    u.block(n, 0, lossy, n) = y;
    u.block(n, n, lossy, lossy) = z;
    return u;
}

ComplexMatrix reverse(const ComplexMatrix& w) { return w.adjoint(); }

SetupSpec named_device(const std::string& name, const std::vector<double>& params) {
    auto need = [&](std::size_t count) {
        if (params.size() != count) {
            std::ostringstream msg;
            msg << "named_device: " << name << " expects " << count << " parameter(s), got "
                << params.size();
            throw std::invalid_argument(msg.str());
        }
    };
    SetupSpec spec;
    if (name == "fourier") {
        need(2);
        const int n = static_cast<int>(params[0]);
        const int d = static_cast<int>(params[1]);
        if (n < 1 || d < 1) throw std::invalid_argument("named_device: fourier needs N, d >= 1");
        ComplexMatrix v(n, n);
        const double scale = 1.0 / std::sqrt(static_cast<double>(n));
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                v(j, k) = scale * std::polar(1.0, 2.0 * std::numbers::pi * j * k / n);
        spec.kind = SetupSpec::Kind::NonPolarizing;
        spec.d = d;
        spec.N = n;
        spec.matrix = std::move(v);
    } else if (name == "freespace") {
        need(3);
        const int n = static_cast<int>(params[0]);
        const int d = static_cast<int>(params[1]);
        const double p = params[2];
        if (n < 1 || d < 1) throw std::invalid_argument("named_device: freespace needs N, d >= 1");
        if (p < 0.0) throw std::invalid_argument("named_device: freespace needs p >= 0");
        spec.kind = SetupSpec::Kind::NonPolarizing;
        spec.d = d;
        spec.N = n;
        spec.matrix = ComplexMatrix::Constant(n, n, Complex(std::sqrt(p), 0.0));
    } else if (name == "ghz_analyzer") {
        need(0);
        // Three polarizing beam splitters plus polarizers: inputs
        // (1H,1V,3H,3V,5H,5V) feed detectors D1,D3,D5. Each detector owns
        // an output group of two modes; the absorbed polarization column
        // is zero, so those amplitudes are lost.
        const double s = 1.0 / std::sqrt(2.0);
        ComplexMatrix w = ComplexMatrix::Zero(6, 6);
        w(0, 4) = s;  // 1H -> D5
        w(1, 0) = s;  // 1V -> D1
        w(2, 0) = s;  // 3H -> D1
        w(3, 2) = s;  // 3V -> D3
        w(4, 2) = s;  // 5H -> D3
        w(5, 4) = s;  // 5V -> D5
        spec.kind = SetupSpec::Kind::General;
        spec.d = 2;
        spec.N = 3;
        spec.matrix = std::move(w);
    } else if (name == "four_photon_family") {
        need(1);
        const double gamma = params[0];
        const double s = std::sin(2.0 * gamma);
        const double c = std::cos(2.0 * gamma);
        const Complex i(0.0, 1.0);
        ComplexMatrix w = ComplexMatrix::Zero(4, 8);
        w(0, 0) = i * s; w(0, 2) = i * s; w(0, 4) = c;  w(0, 6) = c;
        w(1, 0) = i * c; w(1, 2) = i * c; w(1, 4) = -s; w(1, 6) = -s;
        w(2, 1) = -1.0;  w(2, 3) = -1.0;
        w(3, 5) = i;     w(3, 7) = i;
        w *= 1.0 / std::sqrt(2.0);
        spec.kind = SetupSpec::Kind::General;
        spec.d = 2;
        spec.N = 4;
        spec.matrix = std::move(w);
    } else if (name == "beamsplitter") {
        need(1);
        const int d = static_cast<int>(params[0]);
        if (d < 1) throw std::invalid_argument("named_device: beamsplitter needs d >= 1");
        ComplexMatrix v(2, 2);
        v << 1, 1, 1, -1;
        v *= 1.0 / std::sqrt(2.0);
        spec.kind = SetupSpec::Kind::NonPolarizing;
        spec.d = d;
        spec.N = 2;
        spec.matrix = std::move(v);
    } else if (name == "pbs") {
        need(0);
        ComplexMatrix vh(2, 2), vv(2, 2);
        vh << 1, 1, 1, -1;
        vh *= 1.0 / std::sqrt(2.0);
        vv << 0, 1, 1, 0;
        spec.kind = SetupSpec::Kind::Polarizing;
        spec.d = 2;
        spec.N = 2;
        spec.matrices = {vh, vv};
    } else {
        throw std::invalid_argument("named_device: unknown device '" + name + "'");
    }
    return spec;
}

}  // namespace iforge
