#pragma once

#include "dmverify/rng.hpp"
#include "dmverify/spaces.hpp"

namespace dmv::testing {

inline CMatrix random_cmatrix(Eigen::Index rows, Eigen::Index cols, SeedStream& stream,
                              double scale = 1.0) {
    CMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            m(i, j) = Complex(scale * stream.normal(), scale * stream.normal());
    return m;
}

inline CMatrix random_hermitian_pd(Eigen::Index n, SeedStream& stream) {
    CMatrix g = random_cmatrix(n, n, stream);
    return g * g.adjoint() + 0.1 * CMatrix::Identity(n, n);
}

inline CMatrix random_symmetric(Eigen::Index n, SeedStream& stream) {
    CMatrix g = random_cmatrix(n, n, stream);
    return 0.5 * (g + g.transpose());
}

inline CMatrix random_antisymmetric(Eigen::Index n, SeedStream& stream) {
    CMatrix g = random_cmatrix(n, n, stream);
    return 0.5 * (g - g.transpose());
}

/// Admissible random W point for either sign: inside the ball for compact,
/// moderate Gaussian for noncompact.
inline CMatrix random_w_point(const SpaceSpec& spec, Sign sign, SeedStream& stream,
                              double ball_radius = 0.9, double sigma = 0.5) {
    if (sign == Sign::Compact) return sample_ball(spec, ball_radius, stream).b;
    return sample_gaussian(spec, sigma, stream).b;
}

} // namespace dmv::testing
