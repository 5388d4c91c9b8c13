#pragma once

#include <vector>

#include "dmverify/kernels.hpp"

namespace dmv {

/// Tangent vector of the complexified coordinate space W x V.
struct TangentPair {
    CMatrix db;       // W-shaped component
    CMatrix dbtilde;  // V-shaped (transposed) component
};

/// Gram matrix of the invariant two-form on a list of tangent directions.
struct TwoFormMatrix {
    Eigen::MatrixXcd a;  // a(k,l) = omega(E_k, E_l); antisymmetric
};

/// omega in Q-coordinates,
///   omega(E, F) = Tr((1-ZZ~)^-1 E_Z (1-Z~Z)^-1 F_Z~)
///               - Tr((1-ZZ~)^-1 F_Z (1-Z~Z)^-1 E_Z~).
TwoFormMatrix omega_in_q_coords(const SpaceSpec& spec, const CMatrix& z,
                                const CMatrix& ztilde,
                                const std::vector<TangentPair>& tangents);

struct VolumeSample {
    double density;  // > 0, normalized so that density(0) = 1
};

/// Pfaffian magnitude of omega pulled back to the real slice Z~ = -Z^dag
/// (compact) or Z~ = +Z^dag (noncompact), on the orthonormal real basis of W,
/// normalized to 1 at the origin. The noncompact slice requires
/// spectral_norm(Z) < 1.
VolumeSample invariant_density(const SpaceSpec& spec, Sign sign, const CMatrix& z);

/// Max-entry residual between the pullback (Q o R+-)^* omega and the flat
/// form Tr(db ^ db~) on the slice b~ = b^dag, with the Jacobian of R taken by
/// central finite differences. The compact comparison carries the sign flip
/// picked up from b~ -> -b~ inside R_-.
double flat_form_residual(const SpaceSpec& spec, Sign sign, const CMatrix& b,
                          double fd_step = 1e-6);

/// Evaluation of the holomorphic volume form on 2m tangent vectors: the
/// determinant of the complex matrix whose columns are the holomorphic
/// (b, b~) coordinates of the tangents, up to a fixed combinatorial constant
/// (m! relative to the top wedge power of Tr(db ^ db~)).
Complex volume_pullback(const SpaceSpec& spec, const std::vector<TangentPair>& tangents);

/// Singular-value frame of a boundary point: b = u D v^dag with the top
/// radial parameter equal to sqrt(r). CI/DIII carry v = conj(u) so that
/// b = u D u^T.
struct BoundaryFrame {
    CMatrix u;
    CMatrix v;
    RVector d;  // radial parameters, descending, d(0) = sqrt(r)
};

/// Random boundary frame with distinct interior radial parameters
/// (Haar-random unitaries, top singular value pinned to sqrt(r)).
BoundaryFrame random_boundary_frame(const SpaceSpec& spec, double r, SeedStream& stream);

/// Assembles the W point of a frame (DIII uses d_i * (i sigma_y) blocks and a
/// trailing zero row for odd N).
CMatrix frame_point(const SpaceSpec& spec, const BoundaryFrame& frame);

/// |Omega| on the homotopy image of the boundary tangent frame (t-direction
/// plus 2m-1 sphere directions with the constrained radial parameter frozen),
/// relative to the interior reference frame in which the frozen radial
/// direction replaces the t-direction. Expected ~ 0 (the content of the
/// boundary-vanishing lemmas).
double boundary_vanishing_check(const SpaceSpec& spec, Sign sign, double r,
                                const BoundaryFrame& frame, double t);

/// Sensitivity probe: the same evaluation with the frozen radial direction
/// reinstated (in place of one sphere direction) at a point displaced to
/// 0.99 sqrt(r). A healthy pipeline reports an O(1) ratio here, demonstrating
/// that the vanishing above is not an artifact.
double boundary_power_probe(const SpaceSpec& spec, Sign sign, double r,
                            const BoundaryFrame& frame, double t);

} // namespace dmv
