#pragma once

#include <Eigen/Eigenvalues>

#include "dmverify/spaces.hpp"

namespace dmv {

/// A point of the complexified coordinate chart: Z is W-shaped, Z~ has the
/// transposed shape (q x p for AIII, N x N structured for CI/DIII).
struct CoordinatePair {
    SpaceSpec spec;
    CMatrix z;
    CMatrix ztilde;
};

struct HomotopyPoint {
    SpaceSpec spec;
    Sign sign = Sign::Compact;
    double t = 0.0;
    CMatrix b;       // base point
    CMatrix bprime;  // b (1 +- b^dag b)^{t/2}
    CMatrix btilde;  // b^dag (1 +- b b^dag)^{-t/2}
};

/// The chart realization
///   Q(Z, Z~) = [ (1+ZZ~)(1-ZZ~)^-1      -2 Z (1-Z~Z)^-1      ]
///              [ 2 Z~ (1-ZZ~)^-1        -(1+Z~Z)(1-Z~Z)^-1   ].
/// Throws NearSingular when 1 - ZZ~ is numerically singular (leaving the
/// chart patch).
KernelMatrix q_map(const CoordinatePair& pair);

/// Normal-coordinate map. Noncompact:
///   R(b, b~)  = (-b (1+b~b)^{-1/2}, -b~ (1+bb~)^{-1/2});
/// compact variant R_-(b, b~) = R(b, -b~):
///   R_-(b, b~) = (-b (1-b~b)^{-1/2}, +b~ (1-bb~)^{-1/2}).
/// The fractional powers are evaluated on Hermitian-PD slices only; throws
/// NotHermitian off-slice and NotPositiveDefinite outside the domain.
CoordinatePair r_map(const SpaceSpec& spec, Sign sign, const CMatrix& b,
                     const CMatrix& btilde);

/// Deformation images (b(1 +- b^dag b)^{t/2}, b^dag(1 +- bb^dag)^{-t/2})
/// without range validation; used by finite-difference probes that step
/// slightly outside [0,1].
std::pair<CMatrix, CMatrix> homotopy_images(const SpaceSpec& spec, Sign sign, double t,
                                            const CMatrix& b);

/// The homotopy point at parameter t in [0,1]; asserts the intertwining
/// identity b (1 +- b^dag b)^a = (1 +- b b^dag)^a b to 1e-12.
HomotopyPoint homotopy(const SpaceSpec& spec, Sign sign, double t, const CMatrix& b);

/// The deformed kernel of the integral identities. Compact:
///   [ 1 - 2bb^dag               2b (1-b^dag b)^{(1+t)/2} ]
///   [ 2 b^dag (1-bb^dag)^{(1-t)/2}   -1 + 2b^dag b       ]
/// Noncompact:
///   [ 1 + 2bb^dag               2b (1+b^dag b)^{(1+t)/2} ]
///   [ -2 b^dag (1+bb^dag)^{(1-t)/2}  -1 - 2b^dag b       ]
/// Regular on the closed matrix ball for t in [0,1] (compact sign).
KernelMatrix dm_kernel(const SpaceSpec& spec, Sign sign, double t, const CMatrix& b);

/// Homotopy evaluated through a singular-value parametrization b = u D v^dag:
/// returns (u D(1 +- D^dag D)^{t/2} v^dag, v D^dag(1 +- DD^dag)^{-t/2} u^dag)
/// and asserts equality with homotopy(spec, sign, t, u D v^dag) to 1e-10.
HomotopyPoint homotopy_svd_form(const SpaceSpec& spec, Sign sign, double t,
                                const CMatrix& u, const CMatrix& dmat, const CMatrix& v);

/// Residual of the t-deformed (pseudo-)Hermiticity relation
///   compact:    M^dag = W M W^-1,        W = diag(1_p, (1-b^dag b)^t)
///   noncompact: M^dag = s W M W^-1 s,    W = diag(1_p, (1+b^dag b)^t),
/// which reduces to M^dag = M resp. M^dag = sMs at t = 0.
double dm_hermiticity_residual(const SpaceSpec& spec, Sign sign, double t,
                               const CMatrix& b, const CMatrix& m);

/// trace(s M); for the deformed kernels this equals p - q -+ 4 tr(bb^dag)
/// (compact -, noncompact +) independently of t.
double trace_s_m(const SpaceSpec& spec, const CMatrix& m);

/// Reusable kernel assembler for sampling loops: one eigendecomposition per
/// point serves every t.
class DmKernelEvaluator {
public:
    DmKernelEvaluator(const SpaceSpec& spec, Sign sign);

    void set_point(const CMatrix& b);
    /// Kernel at deformation parameter t for the current point. The returned
    /// reference is invalidated by the next call.
    const CMatrix& kernel(double t);
    double trace_bbdag() const { return tr_bbdag_; }

private:
    SpaceSpec spec_;
    Sign sign_;
    CMatrix bvq_, bdagvp_;  // b Vq and b^dag Vp
    CMatrix vq_, vp_;
    RVector lamq_, lamp_;  // spectra of 1 +- b^dag b and 1 +- b b^dag
    CMatrix m_;
    RVector powq_, powp_;
    Eigen::SelfAdjointEigenSolver<CMatrix> es_;
    double tr_bbdag_ = 0.0;
};

} // namespace dmv
