#include "dmverify/geometry.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace dmv {

namespace {

constexpr double kCondLimit = 1e12;

CMatrix guarded_inverse(const CMatrix& a, const char* where) {
    Eigen::JacobiSVD<CMatrix> s(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = s.singularValues();
    if (sv.size() == 0 || sv(sv.size() - 1) == 0.0 || sv(sv.size() - 1) * kCondLimit < sv(0))
        throw NearSingular(std::string(where) + ": chart factor is numerically singular");
    return s.solve(CMatrix::Identity(a.rows(), a.cols()));
}

} // namespace

TwoFormMatrix omega_in_q_coords(const SpaceSpec& spec, const CMatrix& z,
                                const CMatrix& ztilde,
                                const std::vector<TangentPair>& tangents) {
    const Eigen::Index p = spec.p, q = spec.q;
    if (z.rows() != p || z.cols() != q || ztilde.rows() != q || ztilde.cols() != p)
        throw ShapeMismatch("omega_in_q_coords: coordinates have wrong shape");
    const CMatrix w1 = guarded_inverse(CMatrix::Identity(p, p) - z * ztilde, "omega_in_q_coords");
    const CMatrix w2 = guarded_inverse(CMatrix::Identity(q, q) - ztilde * z, "omega_in_q_coords");

    const Eigen::Index k = static_cast<Eigen::Index>(tangents.size());
    std::vector<CMatrix> f(tangents.size());
    for (Eigen::Index i = 0; i < k; ++i) {
        if (tangents[i].db.rows() != p || tangents[i].db.cols() != q ||
            tangents[i].dbtilde.rows() != q || tangents[i].dbtilde.cols() != p)
            throw ShapeMismatch("omega_in_q_coords: tangent has wrong shape");
        f[static_cast<size_t>(i)] = w1 * tangents[static_cast<size_t>(i)].db * w2;
    }

    TwoFormMatrix out;
    out.a = Eigen::MatrixXcd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = i + 1; j < k; ++j) {
            const Complex val = (f[static_cast<size_t>(i)] * tangents[static_cast<size_t>(j)].dbtilde).trace() -
                                (f[static_cast<size_t>(j)] * tangents[static_cast<size_t>(i)].dbtilde).trace();
            out.a(i, j) = val;
            out.a(j, i) = -val;
        }
    return out;
}

namespace {

// Slice tangents (E_k, -+ E_k^dag) over the real orthonormal basis of W.
std::vector<TangentPair> slice_tangents(const SpaceSpec& spec, Sign sign) {
    const double slice_sign = (sign == Sign::Compact) ? -1.0 : 1.0;
    std::vector<TangentPair> tangents;
    for (const CMatrix& e : w_basis(spec))
        tangents.push_back({e, slice_sign * e.adjoint()});
    return tangents;
}

double slice_pfaffian_magnitude(const SpaceSpec& spec, Sign sign, const CMatrix& z) {
    const double slice_sign = (sign == Sign::Compact) ? -1.0 : 1.0;
    const CMatrix ztilde = slice_sign * z.adjoint();
    const TwoFormMatrix form = omega_in_q_coords(spec, z, ztilde, slice_tangents(spec, sign));
    return std::abs(pfaffian(form.a));
}

} // namespace

VolumeSample invariant_density(const SpaceSpec& spec, Sign sign, const CMatrix& z) {
    if (sign == Sign::Noncompact && spectral_norm(z) >= 1.0)
        throw NearSingular("invariant_density: noncompact slice requires spectral_norm(Z) < 1");
    const CMatrix z0 = CMatrix::Zero(spec.p, spec.q);
    const double origin = slice_pfaffian_magnitude(spec, sign, z0);
    return {slice_pfaffian_magnitude(spec, sign, z) / origin};
}

double flat_form_residual(const SpaceSpec& spec, Sign sign, const CMatrix& b,
                          double fd_step) {
    const auto basis = w_basis(spec);
    const Eigen::Index dim = static_cast<Eigen::Index>(basis.size());
    const double h = fd_step;

    // Differential of R along the slice directions (E_k, E_k^dag); the slice
    // keeps every matrix-power argument Hermitian.
    std::vector<TangentPair> dr;
    dr.reserve(basis.size());
    for (const CMatrix& e : basis) {
        const CMatrix bp = b + h * e;
        const CMatrix bm = b - h * e;
        const CoordinatePair rp = r_map(spec, sign, bp, bp.adjoint());
        const CoordinatePair rm = r_map(spec, sign, bm, bm.adjoint());
        dr.push_back({(rp.z - rm.z) / (2.0 * h), (rp.ztilde - rm.ztilde) / (2.0 * h)});
    }

    const CoordinatePair base = r_map(spec, sign, b, b.adjoint());
    const TwoFormMatrix pulled = omega_in_q_coords(spec, base.z, base.ztilde, dr);

    // Flat form on the same slice directions. R_- substitutes b~ -> -b~ and
    // therefore pulls back -Tr(db ^ db~) on the compact sign.
    const double flat_sign = (sign == Sign::Compact) ? -1.0 : 1.0;
    double residual = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = i + 1; j < dim; ++j) {
            const Complex flat =
                (basis[static_cast<size_t>(i)] * basis[static_cast<size_t>(j)].adjoint()).trace() -
                (basis[static_cast<size_t>(j)] * basis[static_cast<size_t>(i)].adjoint()).trace();
            residual = std::max(residual, std::abs(pulled.a(i, j) - flat_sign * flat));
        }
    return residual;
}

Complex volume_pullback(const SpaceSpec& spec, const std::vector<TangentPair>& tangents) {
    const Eigen::Index m = spec.w_dim();
    if (static_cast<Eigen::Index>(tangents.size()) != 2 * m)
        throw ShapeMismatch("volume_pullback: expected 2m tangent vectors");
    Eigen::MatrixXcd c(2 * m, 2 * m);
    const auto basis = w_complex_basis(spec);
    for (Eigen::Index j = 0; j < 2 * m; ++j) {
        const TangentPair& tp = tangents[static_cast<size_t>(j)];
        if (tp.db.rows() != spec.p || tp.db.cols() != spec.q || tp.dbtilde.rows() != spec.q ||
            tp.dbtilde.cols() != spec.p)
            throw ShapeMismatch("volume_pullback: tangent has wrong shape");
        for (Eigen::Index k = 0; k < m; ++k) {
            c(k, j) = (basis[static_cast<size_t>(k)].transpose() * tp.db).trace();
            c(m + k, j) = (basis[static_cast<size_t>(k)] * tp.dbtilde).trace();
        }
    }
    return c.determinant();
}

namespace {

RVector random_radial_params(Eigen::Index count, double top, SeedStream& stream) {
    // Distinct descending values below `top`, kept inside the open Weyl
    // chamber with a minimum spacing.
    RVector d(count);
    d(0) = top;
    if (count > 1) {
        while (true) {
            std::vector<double> vals;
            for (Eigen::Index i = 1; i < count; ++i)
                vals.push_back(stream.uniform(0.10, 0.90) * top);
            std::sort(vals.rbegin(), vals.rend());
            bool ok = true;
            double prev = top;
            for (double v : vals) {
                if (prev - v < 2e-2 * top) ok = false;
                prev = v;
            }
            if (ok) {
                for (Eigen::Index i = 1; i < count; ++i)
                    d(i) = vals[static_cast<size_t>(i - 1)];
                break;
            }
        }
    }
    return d;
}

Eigen::Index radial_count(const SpaceSpec& spec) {
    switch (spec.family) {
        case Family::AIII: return spec.q;
        case Family::CI: return spec.q;
        case Family::DIII: return spec.q / 2;
    }
    return 0;
}

// Canonical radial factor: rect diag for AIII/CI, J-blocks for DIII.
CMatrix radial_matrix(const SpaceSpec& spec, const RVector& d) {
    CMatrix dm = CMatrix::Zero(spec.p, spec.q);
    if (spec.family == Family::DIII) {
        for (Eigen::Index k = 0; k < d.size(); ++k) {
            dm(2 * k, 2 * k + 1) = d(k);
            dm(2 * k + 1, 2 * k) = -d(k);
        }
    } else {
        for (Eigen::Index k = 0; k < d.size(); ++k) dm(k, k) = d(k);
    }
    return dm;
}

// Unit direction of the i-th radial parameter.
CMatrix radial_direction(const SpaceSpec& spec, Eigen::Index i) {
    RVector e = RVector::Zero(radial_count(spec));
    e(i) = 1.0;
    return radial_matrix(spec, e);
}

std::vector<CMatrix> antihermitian_basis(Eigen::Index n) {
    std::vector<CMatrix> basis;
    for (Eigen::Index k = 0; k < n; ++k) {
        CMatrix m = CMatrix::Zero(n, n);
        m(k, k) = Complex(0.0, 1.0);
        basis.push_back(m);
    }
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = k + 1; l < n; ++l) {
            CMatrix m = CMatrix::Zero(n, n);
            m(k, l) = 1.0;
            m(l, k) = -1.0;
            basis.push_back(m);
            CMatrix mi = CMatrix::Zero(n, n);
            mi(k, l) = Complex(0.0, 1.0);
            mi(l, k) = Complex(0.0, 1.0);
            basis.push_back(mi);
        }
    return basis;
}

Eigen::VectorXd real_coords(const SpaceSpec& spec, const CMatrix& b) {
    const Eigen::VectorXcd x = w_coords(spec, b);
    Eigen::VectorXd r(2 * x.size());
    r.head(x.size()) = x.real();
    r.tail(x.size()) = x.imag();
    return r;
}

CMatrix from_real_coords(const SpaceSpec& spec, const Eigen::VectorXd& r) {
    const Eigen::Index m = r.size() / 2;
    Eigen::VectorXcd x(m);
    for (Eigen::Index k = 0; k < m; ++k) x(k) = Complex(r(k), r(m + k));
    return w_from_coords(spec, x);
}

// Ambient directions spanning the sphere tangent space at the frame point:
// the unconstrained radial directions plus the K-orbit directions, reduced to
// an orthonormal set of size 2m-1 (the frozen top radial direction is
// orthogonal to all of them by construction).
std::vector<CMatrix> sphere_directions(const SpaceSpec& spec, const BoundaryFrame& frame) {
    std::vector<CMatrix> cand;
    const CMatrix dmat = radial_matrix(spec, frame.d);
    for (Eigen::Index i = 1; i < radial_count(spec); ++i)
        cand.push_back(frame.u * radial_direction(spec, i) * frame.v.adjoint());
    if (spec.family == Family::AIII) {
        for (const CMatrix& xi : antihermitian_basis(spec.p))
            cand.push_back(frame.u * (xi * dmat) * frame.v.adjoint());
        for (const CMatrix& eta : antihermitian_basis(spec.q))
            cand.push_back(frame.u * (dmat * eta) * frame.v.adjoint());
    } else {
        for (const CMatrix& xi : antihermitian_basis(spec.q))
            cand.push_back(frame.u * (xi * dmat + dmat * xi.transpose()) * frame.u.transpose());
    }

    // Orthonormal basis of the span, via SVD in real coordinates.
    const Eigen::Index dim = 2 * spec.w_dim();
    Eigen::MatrixXd c(dim, static_cast<Eigen::Index>(cand.size()));
    for (size_t j = 0; j < cand.size(); ++j)
        c.col(static_cast<Eigen::Index>(j)) = real_coords(spec, cand[j]);
    Eigen::JacobiSVD<Eigen::MatrixXd> s(c, Eigen::ComputeThinU);
    const double smax = s.singularValues()(0);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < s.singularValues().size(); ++i)
        if (s.singularValues()(i) > 1e-9 * smax) ++rank;
    if (rank != dim - 1)
        throw ConvergenceFailure("sphere_directions: boundary tangent rank " +
                                 std::to_string(rank) + ", expected " + std::to_string(dim - 1));
    std::vector<CMatrix> out;
    for (Eigen::Index j = 0; j < rank; ++j)
        out.push_back(from_real_coords(spec, s.matrixU().col(j)));
    return out;
}

// Homotopy image of an ambient direction by central differences.
TangentPair map_direction(const SpaceSpec& spec, Sign sign, double t, const CMatrix& b,
                          const CMatrix& dir, double h) {
    auto [bp_plus, bt_plus] = homotopy_images(spec, sign, t, b + h * dir);
    auto [bp_minus, bt_minus] = homotopy_images(spec, sign, t, b - h * dir);
    return {(bp_plus - bp_minus) / (2.0 * h), (bt_plus - bt_minus) / (2.0 * h)};
}

// Exact t-derivative of the homotopy: d/dt (b G^{t/2}, b^dag H^{-t/2})
// = (1/2) (b G^{t/2} ln G, -b^dag H^{-t/2} ln H).
TangentPair t_direction(const SpaceSpec& spec, Sign sign, double t, const CMatrix& b) {
    const double s = (sign == Sign::Compact) ? -1.0 : 1.0;
    const CMatrix hq = CMatrix::Identity(spec.q, spec.q) + s * (b.adjoint() * b);
    const CMatrix hp = CMatrix::Identity(spec.p, spec.p) + s * (b * b.adjoint());
    const HermEig eq = herm_eig(hq);
    const HermEig ep = herm_eig(hp);
    RVector gq(eq.values.size()), gp(ep.values.size());
    for (Eigen::Index i = 0; i < gq.size(); ++i)
        gq(i) = 0.5 * std::pow(eq.values(i), 0.5 * t) * std::log(eq.values(i));
    for (Eigen::Index i = 0; i < gp.size(); ++i)
        gp(i) = -0.5 * std::pow(ep.values(i), -0.5 * t) * std::log(ep.values(i));
    TangentPair out;
    out.db = b * (eq.vectors * gq.asDiagonal() * eq.vectors.adjoint());
    out.dbtilde = b.adjoint() * (ep.vectors * gp.asDiagonal() * ep.vectors.adjoint());
    return out;
}

struct BoundaryEval {
    double boundary_abs;
    double interior_abs;
};

BoundaryEval evaluate_boundary_frame(const SpaceSpec& spec, Sign sign, const BoundaryFrame& frame,
                                     double t, bool reinstate_top) {
    constexpr double h = 1e-6;
    const CMatrix b = frame_point(spec, frame);
    const auto sphere = sphere_directions(spec, frame);
    const CMatrix top_dir = frame.u * radial_direction(spec, 0) * frame.v.adjoint();

    std::vector<TangentPair> mapped_sphere;
    for (const CMatrix& dir : sphere)
        mapped_sphere.push_back(map_direction(spec, sign, t, b, dir, h));
    const TangentPair mapped_top = map_direction(spec, sign, t, b, top_dir, h);
    const TangentPair dt = t_direction(spec, sign, t, b);

    std::vector<TangentPair> interior = mapped_sphere;
    interior.push_back(mapped_top);
    const double interior_abs = std::abs(volume_pullback(spec, interior));

    std::vector<TangentPair> probe;
    probe.push_back(dt);
    if (reinstate_top) {
        // Swap the frozen radial direction in for the last sphere direction.
        probe.push_back(mapped_top);
        for (size_t j = 0; j + 1 < mapped_sphere.size(); ++j) probe.push_back(mapped_sphere[j]);
    } else {
        for (const TangentPair& tp : mapped_sphere) probe.push_back(tp);
    }
    const double boundary_abs = std::abs(volume_pullback(spec, probe));
    return {boundary_abs, interior_abs};
}

} // namespace

BoundaryFrame random_boundary_frame(const SpaceSpec& spec, double r, SeedStream& stream) {
    if (!(r > 0.0)) throw OutOfRange("random_boundary_frame: r must be positive");
    BoundaryFrame frame;
    frame.u = haar_unitary(spec.p, stream);
    if (spec.family == Family::AIII)
        frame.v = haar_unitary(spec.q, stream);
    else
        frame.v = frame.u.conjugate();
    frame.d = random_radial_params(radial_count(spec), std::sqrt(r), stream);
    return frame;
}

CMatrix frame_point(const SpaceSpec& spec, const BoundaryFrame& frame) {
    return frame.u * radial_matrix(spec, frame.d) * frame.v.adjoint();
}

double boundary_vanishing_check(const SpaceSpec& spec, Sign sign, double r,
                                const BoundaryFrame& frame, double t) {
    if (sign == Sign::Compact && !(r > 0.0 && r < 1.0))
        throw OutOfRange("boundary_vanishing_check: compact sign requires r in (0,1)");
    const BoundaryEval ev = evaluate_boundary_frame(spec, sign, frame, t, false);
    return ev.boundary_abs / ev.interior_abs;
}

double boundary_power_probe(const SpaceSpec& spec, Sign sign, double r,
                            const BoundaryFrame& frame, double t) {
    if (sign == Sign::Compact && !(r > 0.0 && r < 1.0))
        throw OutOfRange("boundary_power_probe: compact sign requires r in (0,1)");
    BoundaryFrame displaced = frame;
    displaced.d(0) *= 0.99;
    const BoundaryEval ev = evaluate_boundary_frame(spec, sign, displaced, t, true);
    return ev.boundary_abs / ev.interior_abs;
}

} // namespace dmv
