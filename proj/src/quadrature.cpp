#include "dmverify/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace dmv {

namespace {

Rule1D compute_gauss_legendre(int order) {
    if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    Rule1D rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const int n = order;
    for (int k = 0; k < (n + 1) / 2; ++k) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
        double pn = 0.0, dpn = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pn = p1;
            dpn = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = pn / dpn;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        // Recompute derivative at the converged node.
        {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dpn = n * (x * p1 - p0) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dpn * dpn);
        rule.nodes(k) = -x;
        rule.weights(k) = w;
        rule.nodes(n - 1 - k) = x;
        rule.weights(n - 1 - k) = w;
    }
    if (n % 2 == 1) {
        rule.nodes(n / 2) = 0.0;
        // weight at x = 0 already set by the loop (k = n/2 handled above)
    }
    return rule;
}

} // namespace

const Rule1D& gauss_legendre(int order) {
    static std::map<int, Rule1D> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
    return it->second;
}

Rule1D gauss_legendre_on(int order, double a, double b) {
    const Rule1D& base = gauss_legendre(order);
    Rule1D rule;
    rule.nodes = 0.5 * (b - a) * base.nodes.array() + 0.5 * (a + b);
    rule.weights = 0.5 * (b - a) * base.weights;
    return rule;
}

Rule1D periodic_rule(int order) {
    if (order < 1) throw std::invalid_argument("periodic_rule: order must be >= 1");
    Rule1D rule;
    rule.nodes.resize(order);
    rule.weights.setConstant(order, 2.0 * std::numbers::pi / order);
    for (int k = 0; k < order; ++k)
        rule.nodes(k) = 2.0 * std::numbers::pi * k / order;
    return rule;
}

} // namespace dmv
