#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace oscillent {

/// Nodes of the N-point Chebyshev-Gauss rule (first kind) on (-1, 1):
///   int_{-1}^{1} f(u) / sqrt(1-u^2) du  ~=  (pi/N) sum_k f(u_k),
///   u_k = cos((2k-1) pi / (2N)).
std::vector<double> chebyshev_gauss_nodes(std::size_t n);

/// Midpoint nodes on [a, b].
std::vector<double> midpoint_nodes(double a, double b, std::size_t n);

struct QuadratureEstimate {
    double value = 0.0;
    double error = 0.0;          // |difference between the last two extrapolants|
    std::size_t evaluations = 0; // total integrand evaluations across all levels
};

/// Richardson extrapolation for rules whose leading error term is c/N, which is
/// the case for midpoint and Chebyshev-Gauss rules on integrands with logarithmic
/// endpoint singularities. `rule(N)` must return the N-point estimate;
/// it is evaluated at N0, 2 N0 and 4 N0.
QuadratureEstimate richardson_1_over_n(const std::function<double(std::size_t)>& rule,
                                       std::size_t n0, std::size_t cost_per_node = 1);

} // namespace oscillent
