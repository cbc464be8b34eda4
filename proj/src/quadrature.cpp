#include "snsel/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

namespace snsel {

namespace {

// P_N(x) and P_N'(x) via the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
    double p_prev = 1.0;
    double p = x;
    for (int k = 2; k <= n; ++k) {
        const double p_next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
        p_prev = p;
        p = p_next;
    }
    const double dp = n * (x * p - p_prev) / (x * x - 1.0);
    return {p, dp};
}

} // namespace

AngularQuadrature gauss_legendre(int order) {
    if (order <= 0 || order % 2 != 0)
        throw std::invalid_argument("quadrature order must be a positive even integer, got " +
                                    std::to_string(order));

    AngularQuadrature quad;
    quad.order = order;
    quad.nodes.resize(order);
    quad.weights.resize(order);

    const int half = order / 2;
    constexpr double pi = 3.14159265358979323846;
    for (int i = 0; i < half; ++i) {
        // i-th root in the upper half, counted from the largest.
        double x = std::cos(pi * (i + 0.75) / (order + 0.5));
        double p = 0.0, dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            std::tie(p, dp) = legendre(order, x);
            const double step = p / dp;
            x -= step;
            if (std::abs(step) <= 1e-14) break;
        }
        std::tie(p, dp) = legendre(order, x);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Mirror so symmetry holds exactly; ascending order overall
        // (i walks the positive roots from the largest down).
        quad.nodes[i] = -x;
        quad.weights[i] = w;
        quad.nodes[order - 1 - i] = x;
        quad.weights[order - 1 - i] = w;
    }
    return quad;
}

} // namespace snsel
