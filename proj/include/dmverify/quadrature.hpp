#pragma once

#include <Eigen/Core>

namespace dmv {

struct Rule1D {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

/// Gauss-Legendre rule on [-1, 1]; cached per order.
const Rule1D& gauss_legendre(int order);

/// Gauss-Legendre rule mapped to [a, b].
Rule1D gauss_legendre_on(int order, double a, double b);

/// Equal-weight rule on [0, 2*pi), exact for trigonometric polynomials of
/// degree < order.
Rule1D periodic_rule(int order);

} // namespace dmv
