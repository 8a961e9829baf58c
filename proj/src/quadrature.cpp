#include "oscillent/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace oscillent {

std::vector<double> chebyshev_gauss_nodes(std::size_t n) {
    std::vector<double> u(n);
    for (std::size_t k = 0; k < n; ++k) {
        u[k] = std::cos((2.0 * static_cast<double>(k) + 1.0) * std::numbers::pi /
                        (2.0 * static_cast<double>(n)));
    }
    return u;
}

std::vector<double> midpoint_nodes(double a, double b, std::size_t n) {
    std::vector<double> t(n);
    const double h = (b - a) / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) t[k] = a + (static_cast<double>(k) + 0.5) * h;
    return t;
}

QuadratureEstimate richardson_1_over_n(const std::function<double(std::size_t)>& rule,
                                       std::size_t n0, std::size_t cost_per_node) {
    const double i1 = rule(n0);
    const double i2 = rule(2 * n0);
    const double i4 = rule(4 * n0);
    const double r1 = 2.0 * i2 - i1;
    const double r2 = 2.0 * i4 - i2;
    return {r2, std::abs(r2 - r1), 7 * n0 * cost_per_node};
}

} // namespace oscillent
