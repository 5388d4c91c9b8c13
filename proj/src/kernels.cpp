#include "dmverify/kernels.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace dmv {

namespace {

constexpr double kCondLimit = 1e12;

// Inverse through full-pivot LU with a condition guard.
CMatrix guarded_inverse(const CMatrix& a, const char* where) {
    Eigen::JacobiSVD<CMatrix> svd_a(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd_a.singularValues();
    if (sv.size() == 0 || sv(sv.size() - 1) * kCondLimit < sv(0) || sv(sv.size() - 1) == 0.0)
        throw NearSingular(std::string(where) + ": 1 - Z Z~ is numerically singular");
    return svd_a.solve(CMatrix::Identity(a.rows(), a.cols()));
}

double sign_factor(Sign sign) { return sign == Sign::Compact ? -1.0 : 1.0; }

} // namespace

KernelMatrix q_map(const CoordinatePair& pair) {
    const SpaceSpec& spec = pair.spec;
    const Eigen::Index q = spec.q;
    if (pair.z.rows() != p || pair.z.cols() != q || pair.ztilde.rows() != q ||
        pair.ztilde.cols() != p)
        throw ShapeMismatch("q_map: coordinate pair has wrong shape");

    const CMatrix zzt = pair.z * pair.ztilde;        // p x p
    const CMatrix ztz = pair.ztilde * pair.z;        // q x q
    const CMatrix ip = CMatrix::Identity(p, p);
    const CMatrix iq = CMatrix::Identity(q, q);
    const CMatrix w1 = guarded_inverse(ip - zzt, "q_map");
    const CMatrix w2 = guarded_inverse(iq - ztz, "q_map");

    KernelMatrix out{spec, CMatrix(spec.n(), spec.n())};
    out.m.topLeftCorner(p, p) = (ip + zzt) * w1;
    out.m.topRightCorner(p, q) = -2.0 * pair.z * w2;
    out.m.bottomLeftCorner(q, p) = 2.0 * pair.ztilde * w1;
    out.m.bottomRightCorner(q, q) = -(iq + ztz) * w2;
    return out;
}

CoordinatePair r_map(const SpaceSpec& spec, Sign sign, const CMatrix& b,
                     const CMatrix& btilde) {
    const double s = sign_factor(sign);
    const Eigen::Index q = spec.q;
    if (b.rows() != p || b.cols() != q || btilde.rows() != q || btilde.cols() != p)
        throw ShapeMismatch("r_map: arguments have wrong shape");

    const CMatrix hq = CMatrix::Identity(q, q) + s * (btilde * b);
    const CMatrix hp = CMatrix::Identity(p, p) + s * (b * btilde);
    CoordinatePair out{spec, CMatrix(), CMatrix()};
    out.z = -b * principal_power(hq, -0.5);
    const CMatrix btilde_half = btilde * principal_power(hp, -0.5);
    out.ztilde = (sign == Sign::Compact) ? btilde_half : -btilde_half;
    return out;
}

std::pair<CMatrix, CMatrix> homotopy_images(const SpaceSpec& spec, Sign sign, double t,
                                            const CMatrix& b) {
    const double s = sign_factor(sign);
    const Eigen::Index q = spec.q;
    const CMatrix hq = CMatrix::Identity(q, q) + s * (b.adjoint() * b);
    const CMatrix hp = CMatrix::Identity(p, p) + s * (b * b.adjoint());
    return {b * principal_power(hq, 0.5 * t), b.adjoint() * principal_power(hp, -0.5 * t)};
}

HomotopyPoint homotopy(const SpaceSpec& spec, Sign sign, double t, const CMatrix& b) {
    if (t < 0.0 || t > 1.0) throw OutOfRange("homotopy: t must lie in [0,1]");
    auto [bprime, btilde] = homotopy_images(spec, sign, t, b);

    // Intertwining identity b (1 +- b^dag b)^{t/2} = (1 +- b b^dag)^{t/2} b.
    const double s = sign_factor(sign);
    const CMatrix hp = CMatrix::Identity(spec.p, spec.p) + s * (b * b.adjoint());
    const CMatrix other = principal_power(hp, 0.5 * t) * b;
    const double scale = std::max(1.0, inf_norm(bprime));
    if (inf_norm(bprime - other) > 1e-12 * scale)
        throw ConvergenceFailure("homotopy: intertwining identity violated");

    return {spec, sign, t, b, std::move(bprime), std::move(btilde)};
}

KernelMatrix dm_kernel(const SpaceSpec& spec, Sign sign, double t, const CMatrix& b) {
    if (t < 0.0 || t > 1.0) throw OutOfRange("dm_kernel: t must lie in [0,1]");
    const Eigen::Index q = spec.q;
    if (b.rows() != p || b.cols() != q)
        throw ShapeMismatch("dm_kernel: b has wrong shape");

    const double s = sign_factor(sign);
    const CMatrix bbdag = b * b.adjoint();
    const CMatrix bdagb = b.adjoint() * b;
    const CMatrix hq = CMatrix::Identity(q, q) + s * bdagb;
    const CMatrix hp = CMatrix::Identity(p, p) + s * bbdag;

    KernelMatrix out{spec, CMatrix(spec.n(), spec.n())};
    out.m.topLeftCorner(p, p) = CMatrix::Identity(p, p) + s * 2.0 * bbdag;
    out.m.bottomRightCorner(q, q) = -CMatrix::Identity(q, q) - s * 2.0 * bdagb;
    out.m.topRightCorner(p, q) = 2.0 * b * psd_power(hq, 0.5 * (1.0 + t));
    // Lower left carries + for the compact sign and - for the noncompact one.
    out.m.bottomLeftCorner(q, p) = -s * 2.0 * b.adjoint() * psd_power(hp, 0.5 * (1.0 - t));
    return out;
}

HomotopyPoint homotopy_svd_form(const SpaceSpec& spec, Sign sign, double t,
                                const CMatrix& u, const CMatrix& dmat, const CMatrix& v) {
    const Eigen::Index q = spec.q;
    if (u.rows() != p || u.cols() != p || v.rows() != q || v.cols() != q ||
        dmat.rows() != p || dmat.cols() != q)
        throw ShapeMismatch("homotopy_svd_form: factor shapes do not conform");

    const double s = sign_factor(sign);
    const CMatrix hq = CMatrix::Identity(q, q) + s * (dmat.adjoint() * dmat);
    const CMatrix hp = CMatrix::Identity(p, p) + s * (dmat * dmat.adjoint());

    HomotopyPoint out;
    out.spec = spec;
    out.sign = sign;
    out.t = t;
    out.b = u * dmat * v.adjoint();
    out.bprime = u * dmat * principal_power(hq, 0.5 * t) * v.adjoint();
    out.btilde = v * dmat.adjoint() * principal_power(hp, -0.5 * t) * u.adjoint();

    const HomotopyPoint direct = homotopy(spec, sign, t, out.b);
    const double scale = std::max(1.0, std::max(inf_norm(out.bprime), inf_norm(out.btilde)));
    if (inf_norm(out.bprime - direct.bprime) > 1e-10 * scale ||
        inf_norm(out.btilde - direct.btilde) > 1e-10 * scale)
        throw ConvergenceFailure("homotopy_svd_form: disagreement with direct homotopy");
    return out;
}

double dm_hermiticity_residual(const SpaceSpec& spec, Sign sign, double t,
                               const CMatrix& b, const CMatrix& m) {
    const Eigen::Index q = spec.q;
    const double s = sign_factor(sign);
    const CMatrix hq = CMatrix::Identity(q, q) + s * (b.adjoint() * b);
    CMatrix w = CMatrix::Identity(spec.n(), spec.n());
    w.bottomRightCorner(q, q) = psd_power(hq, t);
    CMatrix winv = CMatrix::Identity(spec.n(), spec.n());
    winv.bottomRightCorner(q, q) = principal_power(hq, -t);
    CMatrix rhs = w * m * winv;
    if (sign == Sign::Noncompact) {
        const CMatrix smat = s_matrix(spec);
        rhs = smat * rhs * smat;
    }
    const double scale = std::max(1.0, inf_norm(m));
    return inf_norm(m.adjoint() - rhs) / scale;
}

double trace_s_m(const SpaceSpec& spec, const CMatrix& m) {
    double tr = 0.0;
    for (int i = 0; i < spec.p; ++i) tr += m(i, i).real();
    for (int i = spec.p; i < spec.n(); ++i) tr -= m(i, i).real();
    return tr;
}

DmKernelEvaluator::DmKernelEvaluator(const SpaceSpec& spec, Sign sign)
    : spec_(spec), sign_(sign), m_(spec.n(), spec.n()) {}

void DmKernelEvaluator::set_point(const CMatrix& b) {
    const Eigen::Index p = spec_.p, q = spec_.q;
    const double s = sign_factor(sign_);
    const CMatrix bdag = b.adjoint();
    const CMatrix bdagb = bdag * b;
    const CMatrix bbdag = b * bdag;
    tr_bbdag_ = bbdag.trace().real();

    es_.compute(CMatrix::Identity(q, q) + s * bdagb);
    lamq_ = es_.eigenvalues().cwiseMax(0.0);
    vq_ = es_.eigenvectors();
    bvq_ = b * vq_;

    es_.compute(CMatrix::Identity(p, p) + s * bbdag);
    lamp_ = es_.eigenvalues().cwiseMax(0.0);
    vp_ = es_.eigenvectors();
    bdagvp_ = bdag * vp_;

    m_.topLeftCorner(p, p) = CMatrix::Identity(p, p) + s * 2.0 * bbdag;
    m_.bottomRightCorner(q, q) = -CMatrix::Identity(q, q) - s * 2.0 * bdagb;
}

const CMatrix& DmKernelEvaluator::kernel(double t) {
    const Eigen::Index p = spec_.p, q = spec_.q;
    powq_ = lamq_.array().pow(0.5 * (1.0 + t));
    powp_ = lamp_.array().pow(0.5 * (1.0 - t));
    m_.topRightCorner(p, q).noalias() = 2.0 * bvq_ * powq_.asDiagonal() * vq_.adjoint();
    const double ll = sign_ == Sign::Compact ? 2.0 : -2.0;
    m_.bottomLeftCorner(q, p).noalias() = ll * bdagvp_ * powp_.asDiagonal() * vp_.adjoint();
    return m_;
}

} // namespace dmv
