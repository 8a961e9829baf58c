#include "oscillent/classical_entropy.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace oscillent {

namespace {

constexpr double kPi = std::numbers::pi;

// One level of the (theta, y) product rule. `integrand(W)` maps the density value
// to the quantity integrated against dx dpx.
template <typename F>
double polar_rule(const MarginalDensity& density, std::size_t n, F integrand) {
    const auto& params = density.params();
    const auto thetas = midpoint_nodes(0.0, 2.0 * kPi, n);
    const auto ys = chebyshev_gauss_nodes(n);
    double total = 0.0;
    for (const double theta : thetas) {
        const SupportBand band = support_band(theta, density.state(), params);
        const double a = band.half_width();
        if (!(a > 0.0)) continue;
        const double jacobian = a / (2.0 * params.omega);  // dx dpx = (A / 2 omega) dy dtheta
        const double s = std::sin(theta);
        const double c = std::cos(theta);
        double row = 0.0;
        for (const double y : ys) {
            const double r = std::sqrt(band.midpoint() + a * y);
            const DensityValue w = density(r * s / params.omega, r * c);
            if (w.on_boundary || !(w.value > 0.0)) continue;
            row += integrand(w.value) * jacobian * std::sqrt(1.0 - y * y);
        }
        total += row;
    }
    return total * (2.0 * kPi / static_cast<double>(n)) * (kPi / static_cast<double>(n));
}

} // namespace

EntropyResult classical_entropy_closed_form(const StateSpec& state, const ModelParams& params) {
    params.validate();
    EntropyResult r;
    r.method = EntropyMethod::closed_form;
    const double arg = kPi * kPi * params.C * std::sqrt(state.E1 * state.E2) /
                       (params.delta_cell * params.omega * params.Omega * params.Omega);
    r.metadata = {{"argument", arg}, {"delta_cell", params.delta_cell}};
    if (!(arg > 0.0)) {
        r.value = -std::numeric_limits<double>::infinity();
        r.warnings.emplace_back("closed form undefined: requires C > 0 and E1 E2 > 0");
        return r;
    }
    r.value = std::log(arg);
    if (r.value < 0.0) {
        r.warnings.emplace_back("negative classical entropy: coupling too weak for the classical regime");
    }
    return r;
}

EntropyResult classical_entropy_quadrature(const StateSpec& state, const ModelParams& params,
                                           const PolarQuadratureOptions& options) {
    const MarginalDensity density(params, state, MarginalMode::small_coupling);
    const double cell = params.delta_cell;
    const auto est = richardson_1_over_n(
        [&](std::size_t n) {
            return polar_rule(density, n, [cell](double w) { return -w * std::log(w * cell); });
        },
        options.base_nodes);
    const std::size_t b = options.base_nodes;

    EntropyResult r;
    r.method = EntropyMethod::quadrature;
    r.value = est.value;
    r.uncertainty = est.error;
    r.metadata = {{"base_nodes", b},
                  {"evaluations", b * b + 4 * b * b + 16 * b * b},
                  {"delta_cell", cell}};
    if (!(est.error <= options.tolerance)) {
        r.warnings.emplace_back("quadrature did not reach tolerance; error estimate " +
                                std::to_string(est.error));
    }
    return r;
}

QuadratureEstimate marginal_normalization(const StateSpec& state, const ModelParams& params,
                                          const PolarQuadratureOptions& options) {
    const MarginalDensity density(params, state, MarginalMode::small_coupling);
    return richardson_1_over_n(
        [&](std::size_t n) { return polar_rule(density, n, [](double w) { return w; }); },
        options.base_nodes);
}

} // namespace oscillent
