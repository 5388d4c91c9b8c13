#pragma once

#include <Eigen/Dense>
#include <complex>

#include "dmverify/errors.hpp"

namespace dmv {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kDefaultHermTol = 1e-12;
/// Singular values below this (relative to the largest) count as zero for
/// rank decisions.
inline constexpr double kRankTol = 1e-13;

/// Max-abs-entry norm; the norm used by all residual checks.
double inf_norm(const CMatrix& a);
bool all_finite(const CMatrix& a);

double hermiticity_residual(const CMatrix& a);   // ||A - A^dag||_inf
double symmetry_residual(const CMatrix& a);      // ||A - A^T||_inf
double antisymmetry_residual(const CMatrix& a);  // ||A + A^T||_inf

/// Largest singular value.
double spectral_norm(const CMatrix& a);

struct HermEig {
    RVector values;   // ascending
    CMatrix vectors;  // unitary, columns are eigenvectors
};

/// Eigendecomposition of a Hermitian matrix, P = U diag(values) U^dag.
/// Throws NotHermitian if ||P - P^dag||_inf > tol * ||P||_inf.
HermEig herm_eig(const CMatrix& p, double tol = kDefaultHermTol);

/// Principal fractional power of a Hermitian positive definite matrix,
/// computed by eigendecomposition (never by series expansion). Throws
/// NotPositiveDefinite if any eigenvalue is <= 0.
CMatrix principal_power(const CMatrix& p, double alpha, double tol = kDefaultHermTol);

/// Like principal_power but tolerates a positive *semi*-definite argument
/// for nonnegative exponents: eigenvalues within a rounding margin of zero
/// are clamped to zero. Used for kernels on the closed matrix ball.
CMatrix psd_power(const CMatrix& p, double alpha, double tol = kDefaultHermTol);

struct SvdResult {
    CMatrix u;      // p x p unitary
    RVector sigma;  // min(p,q) singular values, descending
    CMatrix v;      // q x q unitary; b = u * diag_rect(sigma) * v^dag
};

/// Full singular value decomposition of a complex rectangular matrix.
SvdResult svd(const CMatrix& b);

/// Rebuilds the p x q rectangular diagonal factor from singular values.
CMatrix rect_diag(Eigen::Index rows, Eigen::Index cols, const RVector& sigma);

struct TakagiResult {
    CMatrix u;  // unitary
    RVector d;  // nonnegative, descending; b = u diag(d) u^T
};

/// Takagi (Autonne) factorization of a complex symmetric matrix,
/// implemented via SVD plus unitary phase alignment.
TakagiResult takagi(const CMatrix& b, double tol = kDefaultHermTol);

struct HuaResult {
    CMatrix u;     // unitary
    RVector d;     // block values d_i >= 0, descending
    CMatrix dmat;  // block canonical antisymmetric: blkdiag(d_i * J), J = [[0,1],[-1,0]],
                   // plus a trailing zero row/column when the dimension is odd
};

/// Canonical form b = u D u^T of a complex antisymmetric matrix with
/// 2x2 blocks d_i * (i sigma_y), realized by pairing the doubly degenerate
/// singular subspaces.
HuaResult hua(const CMatrix& b, double tol = kDefaultHermTol);

/// Pfaffian of a complex antisymmetric matrix (Parlett-Reid with pivoting).
/// Returns 0 for odd dimension.
Complex pfaffian(const CMatrix& a, double tol = 1e-10);

} // namespace dmv
