#pragma once

#include <string>
#include <vector>

#include "dmverify/matrixkit.hpp"
#include "dmverify/rng.hpp"

namespace dmv {

enum class Family { AIII, CI, DIII };
enum class Sign { Compact, Noncompact };

std::string to_string(Family family);
std::string to_string(Sign sign);
Family family_from_string(const std::string& s);
Sign sign_from_string(const std::string& s);

/// Which symmetric-space family, its dimensions, and the compactness sign.
/// CI and DIII store p = q = N.
struct SpaceSpec {
    Family family = Family::AIII;
    int p = 1;
    int q = 1;
    Sign sign = Sign::Compact;

    static SpaceSpec aiii(int p, int q, Sign sign);
    static SpaceSpec ci(int n, Sign sign);
    static SpaceSpec diii(int n, Sign sign);

    int n() const { return p + q; }  // kernel matrices are n x n
    int N() const { return q; }      // CI/DIII block size
    /// Complex dimension of the coordinate space W.
    int w_dim() const;

    void validate() const;  // throws ConfigError on an inconsistent spec
    std::string name() const;
};

/// A point of W: p x q for AIII, N x N symmetric (CI) or antisymmetric (DIII).
struct WElement {
    SpaceSpec spec;
    CMatrix b;
};

struct KernelMatrix {
    SpaceSpec spec;
    CMatrix m;
};

/// Signature matrix s = Diag(1_p, -1_q).
CMatrix s_matrix(const SpaceSpec& spec);

/// sigma_y (x) 1_N and sigma_x (x) 1_N in the block convention of s.
CMatrix sigma_y_big(int N);
CMatrix sigma_x_big(int N);

/// Complex-orthonormal structure units O_k of W (m elements,
/// Tr(O_j^dag O_k) = delta_jk). The real orthonormal basis of W is
/// {O_k, i O_k}.
std::vector<CMatrix> w_complex_basis(const SpaceSpec& spec);

/// Real orthonormal basis of W over R (2m elements) under Re Tr(X^dag Y).
std::vector<CMatrix> w_basis(const SpaceSpec& spec);

/// b = sum_k x_k O_k and its inverse.
CMatrix w_from_coords(const SpaceSpec& spec, const Eigen::VectorXcd& x);
Eigen::VectorXcd w_coords(const SpaceSpec& spec, const CMatrix& b);
/// Coordinates of a V-side (transposed-shape) matrix in the dual basis
/// C_k = O_k^T; pairs with w_coords so that Tr(Y Z~) = sum_k y_k z~_k.
Eigen::VectorXcd v_coords(const SpaceSpec& spec, const CMatrix& btilde);

/// Per-coordinate radius bound of {spectral_norm(b) <= 1}: |x_k| <= coordinate
/// bound. 1 for AIII and CI/DIII diagonal slots, sqrt(2) for paired slots.
std::vector<double> coordinate_ball_radii(const SpaceSpec& spec);

/// One proposal draw for uniform ball sampling: entrywise uniform complex
/// discs scaled to radius, plus the spectral-norm acceptance flag.
WElement sample_ball_proposal(const SpaceSpec& spec, double radius, SeedStream& stream,
                              bool& accepted);

/// Uniform (flat Lebesgue on structure coordinates) on
/// {spectral_norm(b)^2 < radius}; rejection loop over sample_ball_proposal.
WElement sample_ball(const SpaceSpec& spec, double radius, SeedStream& stream);

/// Lebesgue volume of the proposal polydisc (product of disc areas in the
/// orthonormal coordinates); the Monte Carlo domain-volume factor.
double ball_proposal_volume(const SpaceSpec& spec, double radius);

/// Independent complex Gaussians on the orthonormal coordinates, Re and Im
/// each N(0, sigma^2); symmetrized per family by construction.
WElement sample_gaussian(const SpaceSpec& spec, double sigma, SeedStream& stream);

/// Proposal density of sample_gaussian w.r.t. orthonormal-coordinate Lebesgue
/// measure.
double gaussian_density(const SpaceSpec& spec, double sigma, const CMatrix& b);

/// Haar-distributed unitary via QR of a complex Ginibre matrix with the
/// diagonal of R normalized positive.
CMatrix haar_unitary(int n, SeedStream& stream);

/// Residuals of the kernel-matrix invariants, each relative to the matrix
/// scale. hermiticity checks M = M^dag (compact) or M^dag = s M s
/// (noncompact); these hold for realization points g s g^-1 and for the
/// deformed kernels only at t = 0.
struct KernelDiagnostics {
    double involution_residual = 0.0;
    double trace_residual = 0.0;
    double hermiticity_residual = 0.0;
    double transpose_residual = 0.0;

    double max_residual() const;
    bool pass(double tol) const { return max_residual() <= tol; }
};

KernelDiagnostics check_kernel(const CMatrix& m, const SpaceSpec& spec, double tol = 1e-10);

} // namespace dmv
