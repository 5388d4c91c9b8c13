#include "dmverify/spaces.hpp"

#include <cmath>
#include <numbers>

namespace dmv {

std::string to_string(Family family) {
    switch (family) {
        case Family::AIII: return "AIII";
        case Family::CI: return "CI";
        case Family::DIII: return "DIII";
    }
    return "?";
}

std::string to_string(Sign sign) {
    return sign == Sign::Compact ? "compact" : "noncompact";
}

Family family_from_string(const std::string& s) {
    if (s == "AIII" || s == "aiii") return Family::AIII;
    if (s == "CI" || s == "ci") return Family::CI;
    if (s == "DIII" || s == "diii") return Family::DIII;
    throw ConfigError("unknown family: " + s);
}

Sign sign_from_string(const std::string& s) {
    if (s == "compact") return Sign::Compact;
    if (s == "noncompact") return Sign::Noncompact;
    throw ConfigError("unknown sign: " + s + " (expected compact|noncompact)");
}

SpaceSpec SpaceSpec::aiii(int p, int q, Sign sign) {
    SpaceSpec s{Family::AIII, p, q, sign};
    s.validate();
    return s;
}

SpaceSpec SpaceSpec::ci(int n, Sign sign) {
    SpaceSpec s{Family::CI, n, n, sign};
    s.validate();
    return s;
}

SpaceSpec SpaceSpec::diii(int n, Sign sign) {
    SpaceSpec s{Family::DIII, n, n, sign};
    s.validate();
    return s;
}

int SpaceSpec::w_dim() const {
    switch (family) {
        case Family::AIII: return p * q;
        case Family::CI: return q * (q + 1) / 2;
        case Family::DIII: return q * (q - 1) / 2;
    }
    return 0;
}

void SpaceSpec::validate() const {
    switch (family) {
        case Family::AIII:
            if (q < 1 || p < q) throw ConfigError("AIII requires p >= q >= 1");
            break;
        case Family::CI:
            if (q < 1 || p != q) throw ConfigError("CI requires p = q = N >= 1");
            break;
        case Family::DIII:
            if (q < 1 || p != q) throw ConfigError("DIII requires p = q = N >= 1");
            if (w_dim() < 1) throw ConfigError("DIII requires N >= 2 for a nonempty W");
            break;
    }
}

std::string SpaceSpec::name() const {
    if (family == Family::AIII)
        return "AIII(" + std::to_string(p) + "," + std::to_string(q) + ")";
    return to_string(family) + "(N=" + std::to_string(q) + ")";
}

CMatrix s_matrix(const SpaceSpec& spec) {
    CMatrix s = CMatrix::Identity(spec.n(), spec.n());
    for (int i = spec.p; i < spec.n(); ++i) s(i, i) = -1.0;
    return s;
}

CMatrix sigma_y_big(int N) {
    CMatrix m = CMatrix::Zero(2 * N, 2 * N);
    for (int i = 0; i < N; ++i) {
        m(i, N + i) = Complex(0.0, -1.0);
        m(N + i, i) = Complex(0.0, 1.0);
    }
    return m;
}

CMatrix sigma_x_big(int N) {
    CMatrix m = CMatrix::Zero(2 * N, 2 * N);
    for (int i = 0; i < N; ++i) {
        m(i, N + i) = 1.0;
        m(N + i, i) = 1.0;
    }
    return m;
}

std::vector<CMatrix> w_complex_basis(const SpaceSpec& spec) {
    std::vector<CMatrix> basis;
    basis.reserve(spec.w_dim());
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    switch (spec.family) {
        case Family::AIII:
            for (int i = 0; i < spec.p; ++i)
                for (int j = 0; j < spec.q; ++j) {
                    CMatrix e = CMatrix::Zero(spec.p, spec.q);
                    e(i, j) = 1.0;
                    basis.push_back(e);
                }
            break;
        case Family::CI:
            for (int i = 0; i < spec.q; ++i)
                for (int j = i; j < spec.q; ++j) {
                    CMatrix e = CMatrix::Zero(spec.q, spec.q);
                    if (i == j) {
                        e(i, i) = 1.0;
                    } else {
                        e(i, j) = inv_sqrt2;
                        e(j, i) = inv_sqrt2;
                    }
                    basis.push_back(e);
                }
            break;
        case Family::DIII:
            for (int i = 0; i < spec.q; ++i)
                for (int j = i + 1; j < spec.q; ++j) {
                    CMatrix e = CMatrix::Zero(spec.q, spec.q);
                    e(i, j) = inv_sqrt2;
                    e(j, i) = -inv_sqrt2;
                    basis.push_back(e);
                }
            break;
    }
    return basis;
}

std::vector<CMatrix> w_basis(const SpaceSpec& spec) {
    std::vector<CMatrix> basis;
    basis.reserve(2 * spec.w_dim());
    for (const CMatrix& o : w_complex_basis(spec)) {
        basis.push_back(o);
        basis.push_back(Complex(0.0, 1.0) * o);
    }
    return basis;
}

CMatrix w_from_coords(const SpaceSpec& spec, const Eigen::VectorXcd& x) {
    const auto basis = w_complex_basis(spec);
    if (x.size() != static_cast<Eigen::Index>(basis.size()))
        throw ShapeMismatch("w_from_coords: wrong coordinate count");
    CMatrix b = CMatrix::Zero(spec.p, spec.q);
    for (size_t k = 0; k < basis.size(); ++k) b += x(static_cast<Eigen::Index>(k)) * basis[k];
    return b;
}

Eigen::VectorXcd w_coords(const SpaceSpec& spec, const CMatrix& b) {
    const auto basis = w_complex_basis(spec);
    Eigen::VectorXcd x(static_cast<Eigen::Index>(basis.size()));
    for (size_t k = 0; k < basis.size(); ++k)
        x(static_cast<Eigen::Index>(k)) = (basis[k].adjoint() * b).trace();
    return x;
}

Eigen::VectorXcd v_coords(const SpaceSpec& spec, const CMatrix& btilde) {
    const auto basis = w_complex_basis(spec);
    Eigen::VectorXcd x(static_cast<Eigen::Index>(basis.size()));
    for (size_t k = 0; k < basis.size(); ++k)
        x(static_cast<Eigen::Index>(k)) = (basis[k] * btilde).trace();
    return x;
}

std::vector<double> coordinate_ball_radii(const SpaceSpec& spec) {
    std::vector<double> radii;
    radii.reserve(spec.w_dim());
    const double sqrt2 = std::sqrt(2.0);
    switch (spec.family) {
        case Family::AIII:
            radii.assign(static_cast<size_t>(spec.w_dim()), 1.0);
            break;
        case Family::CI:
            for (int i = 0; i < spec.q; ++i)
                for (int j = i; j < spec.q; ++j) radii.push_back(i == j ? 1.0 : sqrt2);
            break;
        case Family::DIII:
            radii.assign(static_cast<size_t>(spec.w_dim()), sqrt2);
            break;
    }
    return radii;
}

namespace {

Complex uniform_disc(double radius, SeedStream& stream) {
    const double r = radius * std::sqrt(stream.uniform());
    const double phi = 2.0 * std::numbers::pi * stream.uniform();
    return Complex(r * std::cos(phi), r * std::sin(phi));
}

} // namespace

WElement sample_ball_proposal(const SpaceSpec& spec, double radius, SeedStream& stream,
                              bool& accepted) {
    if (!(radius > 0.0 && radius <= 1.0))
        throw OutOfRange("sample_ball: radius must lie in (0, 1]");
    const auto bounds = coordinate_ball_radii(spec);
    const double scale = std::sqrt(radius);
    Eigen::VectorXcd x(static_cast<Eigen::Index>(bounds.size()));
    for (size_t k = 0; k < bounds.size(); ++k)
        x(static_cast<Eigen::Index>(k)) = uniform_disc(bounds[k] * scale, stream);
    WElement w{spec, w_from_coords(spec, x)};
    const double sn = spectral_norm(w.b);
    accepted = sn * sn < radius;
    return w;
}

WElement sample_ball(const SpaceSpec& spec, double radius, SeedStream& stream) {
    bool accepted = false;
    while (true) {
        WElement w = sample_ball_proposal(spec, radius, stream, accepted);
        if (accepted) return w;
    }
}

double ball_proposal_volume(const SpaceSpec& spec, double radius) {
    double vol = 1.0;
    for (double r : coordinate_ball_radii(spec)) vol *= std::numbers::pi * r * r * radius;
    return vol;
}

WElement sample_gaussian(const SpaceSpec& spec, double sigma, SeedStream& stream) {
    if (!(sigma > 0.0)) throw OutOfRange("sample_gaussian: sigma must be > 0");
    Eigen::VectorXcd x(spec.w_dim());
    for (Eigen::Index k = 0; k < x.size(); ++k)
        x(k) = Complex(sigma * stream.normal(), sigma * stream.normal());
    return {spec, w_from_coords(spec, x)};
}

double gaussian_density(const SpaceSpec& spec, double sigma, const CMatrix& b) {
    const Eigen::VectorXcd x = w_coords(spec, b);
    const double two_sigma_sq = 2.0 * sigma * sigma;
    double log_density = -static_cast<double>(x.size()) *
                         std::log(std::numbers::pi * two_sigma_sq);
    log_density -= x.squaredNorm() / two_sigma_sq;
    return std::exp(log_density);
}

CMatrix haar_unitary(int n, SeedStream& stream) {
    if (n < 1) throw OutOfRange("haar_unitary: n must be >= 1");
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CMatrix g(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            g(i, j) = Complex(stream.normal() * inv_sqrt2, stream.normal() * inv_sqrt2);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
        const Complex rii = r(i, i);
        const double mag = std::abs(rii);
        q.col(i) *= (mag > 0.0) ? rii / mag : Complex(1.0, 0.0);
    }
    return q;
}

double KernelDiagnostics::max_residual() const {
    return std::max({involution_residual, trace_residual, hermiticity_residual,
                     transpose_residual});
}

KernelDiagnostics check_kernel(const CMatrix& m, const SpaceSpec& spec, double /*tol*/) {
    if (m.rows() != spec.n() || m.cols() != spec.n())
        throw ShapeMismatch("check_kernel: matrix does not match spec dimension");
    const double scale1 = std::max(1.0, inf_norm(m));
    const double scale2 = std::max(1.0, scale1 * scale1);

    KernelDiagnostics d;
    d.involution_residual =
        inf_norm(m * m - CMatrix::Identity(spec.n(), spec.n())) / scale2;
    d.trace_residual = std::abs(m.trace() - Complex(spec.p - spec.q, 0.0)) / scale1;

    const CMatrix s = s_matrix(spec);
    if (spec.sign == Sign::Compact)
        d.hermiticity_residual = inf_norm(m - m.adjoint()) / scale1;
    else
        d.hermiticity_residual = inf_norm(m.adjoint() - s * m * s) / scale1;

    if (spec.family == Family::CI) {
        const CMatrix sy = sigma_y_big(spec.q);
        d.transpose_residual = inf_norm(m.transpose() + sy * m * sy) / scale1;
    } else if (spec.family == Family::DIII) {
        const CMatrix sx = sigma_x_big(spec.q);
        d.transpose_residual = inf_norm(m.transpose() + sx * m * sx) / scale1;
    }
    return d;
}

} // namespace dmv
