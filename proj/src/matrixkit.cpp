#include "dmverify/matrixkit.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <vector>

namespace dmv {

double inf_norm(const CMatrix& a) {
    return a.cwiseAbs().maxCoeff();
}

bool all_finite(const CMatrix& a) {
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag()))
                return false;
    return true;
}

double hermiticity_residual(const CMatrix& a) {
    return inf_norm(a - a.adjoint());
}

double symmetry_residual(const CMatrix& a) {
    return inf_norm(a - a.transpose());
}

double antisymmetry_residual(const CMatrix& a) {
    return inf_norm(a + a.transpose());
}

double spectral_norm(const CMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> s(a);
    return s.singularValues()(0);
}

HermEig herm_eig(const CMatrix& p, double tol) {
    if (p.rows() != p.cols())
        throw ShapeMismatch("herm_eig: matrix is not square");
    const double scale = inf_norm(p);
    if (hermiticity_residual(p) > tol * std::max(1.0, scale))
        throw NotHermitian("herm_eig: Hermiticity residual exceeds tolerance");
    CMatrix sym = 0.5 * (p + p.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
    if (es.info() != Eigen::Success)
        throw ConvergenceFailure("herm_eig: eigensolver did not converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

namespace {

CMatrix power_from_eig(const HermEig& eig, const RVector& powered) {
    CMatrix r = eig.vectors * powered.asDiagonal() * eig.vectors.adjoint();
    return 0.5 * (r + r.adjoint());
}

} // namespace

CMatrix principal_power(const CMatrix& p, double alpha, double tol) {
    HermEig eig = herm_eig(p, tol);
    if (eig.values.size() > 0 && eig.values.minCoeff() <= 0.0)
        throw NotPositiveDefinite("principal_power: eigenvalue <= 0");
    if (alpha == 1.0) return 0.5 * (p + p.adjoint());
    if (alpha == 0.0) return CMatrix::Identity(p.rows(), p.cols());
    RVector powered(eig.values.size());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i)
        powered(i) = std::pow(eig.values(i), alpha);
    return power_from_eig(eig, powered);
}

CMatrix psd_power(const CMatrix& p, double alpha, double tol) {
    if (alpha < 0.0)
        return principal_power(p, alpha, tol);
    HermEig eig = herm_eig(p, tol);
    const double clamp = kRankTol * std::max(1.0, eig.values.cwiseAbs().maxCoeff());
    RVector powered(eig.values.size());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        double lam = eig.values(i);
        if (lam < 0.0) {
            if (lam < -clamp)
                throw NotPositiveDefinite("psd_power: negative eigenvalue beyond rounding margin");
            lam = 0.0;
        }
        powered(i) = (alpha == 0.0) ? 1.0 : std::pow(lam, alpha);
    }
    return power_from_eig(eig, powered);
}

SvdResult svd(const CMatrix& b) {
    Eigen::JacobiSVD<CMatrix> s(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return {s.matrixU(), s.singularValues(), s.matrixV()};
}

CMatrix rect_diag(Eigen::Index rows, Eigen::Index cols, const RVector& sigma) {
    CMatrix d = CMatrix::Zero(rows, cols);
    const Eigen::Index k = std::min({rows, cols, sigma.size()});
    for (Eigen::Index i = 0; i < k; ++i) d(i, i) = sigma(i);
    return d;
}

namespace {

// Contiguous index ranges of (numerically) equal singular values; the
// trailing class collects values treated as zero.
std::vector<std::pair<Eigen::Index, Eigen::Index>> sigma_classes(const RVector& sigma) {
    std::vector<std::pair<Eigen::Index, Eigen::Index>> classes;
    const Eigen::Index n = sigma.size();
    if (n == 0) return classes;
    const double smax = sigma(0);
    const double zero_tol = kRankTol * std::max(1.0, smax);
    const double group_tol = std::max(1e-8 * std::max(1.0, smax), zero_tol);
    Eigen::Index start = 0;
    for (Eigen::Index i = 1; i <= n; ++i) {
        const bool boundary =
            (i == n) || (sigma(start) - sigma(i) > group_tol) ||
            (sigma(i) <= zero_tol && sigma(start) > zero_tol);
        if (boundary) {
            classes.emplace_back(start, i);
            start = i;
        }
    }
    return classes;
}

bool is_zero_class(const RVector& sigma, Eigen::Index start) {
    const double smax = sigma.size() ? sigma(0) : 0.0;
    return sigma(start) <= kRankTol * std::max(1.0, smax);
}

// Principal square root of a small symmetric unitary matrix (diagonalizable;
// spectrum on the unit circle).
CMatrix symmetric_unitary_sqrt(const CMatrix& s) {
    Eigen::ComplexEigenSolver<CMatrix> es(s);
    if (es.info() != Eigen::Success)
        throw ConvergenceFailure("takagi: eigensolver failed on unitary block");
    CMatrix p = es.eigenvectors();
    Eigen::VectorXcd lam = es.eigenvalues();
    for (Eigen::Index i = 0; i < lam.size(); ++i) lam(i) = std::sqrt(lam(i));
    CMatrix r = p * lam.asDiagonal() * p.inverse();
    return 0.5 * (r + r.transpose());
}

} // namespace

TakagiResult takagi(const CMatrix& b, double tol) {
    if (b.rows() != b.cols())
        throw ShapeMismatch("takagi: matrix is not square");
    const double scale = std::max(1.0, inf_norm(b));
    if (symmetry_residual(b) > tol * scale)
        throw NotSymmetric("takagi: symmetry residual exceeds tolerance");

    SvdResult s = svd(0.5 * (b + b.transpose()));
    const Eigen::Index n = b.rows();
    // b = U S V^dag and b symmetric force A = U^dag conj(V) to be block
    // diagonal over classes of equal singular values, with symmetric unitary
    // blocks on the positive classes. A symmetric square root of each block
    // aligns the left and right singular bases.
    CMatrix a = s.u.adjoint() * s.v.conjugate();
    CMatrix g = CMatrix::Identity(n, n);
    for (const auto& [lo, hi] : sigma_classes(s.sigma)) {
        if (is_zero_class(s.sigma, lo)) continue;
        const Eigen::Index len = hi - lo;
        CMatrix block = a.block(lo, lo, len, len);
        block = 0.5 * (block + block.transpose());
        g.block(lo, lo, len, len) = symmetric_unitary_sqrt(block);
    }
    TakagiResult out;
    out.u = s.u * g;
    out.d = s.sigma;
    const double resid = inf_norm(out.u * out.d.asDiagonal() * out.u.transpose() - b);
    if (resid > 1e-10 * scale)
        throw ConvergenceFailure("takagi: reconstruction residual too large");
    return out;
}

namespace {

// Decomposes a small antisymmetric unitary S (even dimension) as
// S = W J W^T with J = blkdiag([[0,1],[-1,0]], ...), by the pairing
// w2 = -S conj(w1) and deflation onto the orthogonal complement.
CMatrix antisymmetric_unitary_pairing(const CMatrix& s_in) {
    const Eigen::Index n = s_in.rows();
    if (n % 2 != 0)
        throw ShapeMismatch("hua: odd antisymmetric unitary block");
    CMatrix w(n, 0);
    CMatrix basis = CMatrix::Identity(n, n);  // orthonormal basis of the remaining complement
    CMatrix s = s_in;                         // S restricted to the complement, in `basis` coordinates
    while (s.rows() > 0) {
        const Eigen::Index m = s.rows();
        Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(m);
        e1(0) = 1.0;
        Eigen::VectorXcd e2 = -s * e1.conjugate();
        // Orthonormalize defensively against rounding.
        e2 -= (e1.adjoint() * e2)(0) * e1;
        e2.normalize();
        Eigen::VectorXcd w1 = basis * e1;
        Eigen::VectorXcd w2 = basis * e2;
        w.conservativeResize(n, w.cols() + 2);
        w.col(w.cols() - 2) = w1;
        w.col(w.cols() - 1) = w2;
        if (m == 2) break;
        // Orthonormal basis of the complement of {e1, e2} inside the block.
        CMatrix proj = CMatrix::Identity(m, m) - e1 * e1.adjoint() - e2 * e2.adjoint();
        Eigen::JacobiSVD<CMatrix> psvd(proj, Eigen::ComputeThinU);
        CMatrix sub = psvd.matrixU().leftCols(m - 2);
        s = (sub.adjoint() * s * sub.conjugate()).eval();
        s = 0.5 * (s - s.transpose());
        basis = (basis * sub).eval();
    }
    return w;
}

} // namespace

HuaResult hua(const CMatrix& b, double tol) {
    if (b.rows() != b.cols())
        throw ShapeMismatch("hua: matrix is not square");
    const double scale = std::max(1.0, inf_norm(b));
    if (antisymmetry_residual(b) > tol * scale)
        throw NotAntisymmetric("hua: antisymmetry residual exceeds tolerance");

    const Eigen::Index n = b.rows();
    SvdResult s = svd(0.5 * (b - b.transpose()));
    CMatrix a = s.u.adjoint() * s.v.conjugate();
    // b = U (S A^T) U^T with S A^T antisymmetric and block diagonal over
    // classes of equal singular values; positive classes carry antisymmetric
    // unitary blocks that the pairing below brings to canonical J form.
    CMatrix w = CMatrix::Identity(n, n);
    std::vector<double> dvals;
    for (const auto& [lo, hi] : sigma_classes(s.sigma)) {
        if (is_zero_class(s.sigma, lo)) continue;
        const Eigen::Index len = hi - lo;
        if (len % 2 != 0)
            throw ConvergenceFailure("hua: singular value multiplicity is not even");
        CMatrix block = a.block(lo, lo, len, len).transpose();
        block = 0.5 * (block - block.transpose());
        w.block(lo, lo, len, len) = antisymmetric_unitary_pairing(block);
        for (Eigen::Index k = 0; k < len / 2; ++k) dvals.push_back(s.sigma(lo));
    }
    HuaResult out;
    out.u = s.u * w;
    out.d = Eigen::Map<RVector>(dvals.data(), static_cast<Eigen::Index>(dvals.size()));
    out.dmat = CMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k < out.d.size(); ++k) {
        out.dmat(2 * k, 2 * k + 1) = out.d(k);
        out.dmat(2 * k + 1, 2 * k) = -out.d(k);
    }
    const double resid = inf_norm(out.u * out.dmat * out.u.transpose() - b);
    if (resid > 1e-10 * scale)
        throw ConvergenceFailure("hua: reconstruction residual too large");
    return out;
}

Complex pfaffian(const CMatrix& a_in, double tol) {
    if (a_in.rows() != a_in.cols())
        throw ShapeMismatch("pfaffian: matrix is not square");
    const Eigen::Index n = a_in.rows();
    const double scale = std::max(1.0, inf_norm(a_in));
    if (antisymmetry_residual(a_in) > tol * scale)
        throw NotAntisymmetric("pfaffian: antisymmetry residual exceeds tolerance");
    if (n == 0) return 1.0;
    if (n % 2 != 0) return 0.0;

    CMatrix a = 0.5 * (a_in - a_in.transpose());
    Complex result = 1.0;
    for (Eigen::Index k = 0; k + 1 < n; k += 2) {
        // Pivot: largest entry in column k below the diagonal.
        Eigen::Index kp = k + 1;
        for (Eigen::Index i = k + 2; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(kp, k))) kp = i;
        if (kp != k + 1) {
            a.row(k + 1).swap(a.row(kp));
            a.col(k + 1).swap(a.col(kp));
            result = -result;
        }
        const Complex piv = a(k, k + 1);
        if (piv == Complex(0.0, 0.0)) return 0.0;
        result *= piv;
        if (k + 2 < n) {
            Eigen::VectorXcd tau = a.col(k).segment(k + 2, n - k - 2) / piv;
            auto rest = a.block(k + 2, k + 2, n - k - 2, n - k - 2);
            rest += tau * a.row(k + 1).segment(k + 2, n - k - 2) +
                    a.col(k + 1).segment(k + 2, n - k - 2) * tau.transpose();
        }
    }
    return result;
}

} // namespace dmv
