#include "oscillent/trajectory.hpp"

#include "oscillent/errors.hpp"

#include <algorithm>
#include <cmath>

namespace oscillent {

Trajectory integrate_trajectory(const PhasePoint& p0, const ModelParams& params, double dt,
                                std::size_t n_steps, std::size_t stride) {
    const NormalModes nm = normal_modes(params);
    if (!(dt > 0.0)) throw DomainError("integrate_trajectory: dt must be positive");
    if (dt * std::max(nm.omega1, nm.omega2) > 0.1 + 1e-12) {
        throw DomainError("integrate_trajectory: dt * max(omega1, omega2) must be <= 0.1");
    }
    if (stride == 0) throw DomainError("integrate_trajectory: stride must be >= 1");

    const double w2 = params.omega * params.omega;
    const double W2 = params.Omega * params.Omega;
    const double C = params.C;

    Trajectory out;
    out.samples.reserve(n_steps / stride + 1);
    out.drift.steps = n_steps;
    out.drift.dt = dt;

    PhasePoint p = p0;
    const ConservedQuantities e0 = conserved_quantities(p, params, nm);
    const double scale_plus = std::abs(e0.E_plus);
    const double scale_minus = std::abs(e0.E_minus);

    const std::size_t window = std::max<std::size_t>(1, n_steps / 100);
    double head_plus = 0.0, head_minus = 0.0, tail_plus = 0.0, tail_minus = 0.0;

    double ax = -w2 * p.x - C * p.y;
    double ay = -W2 * p.y - C * p.x;
    out.samples.push_back(p.x, p.px);
    for (std::size_t step = 1; step <= n_steps; ++step) {
        p.px += 0.5 * dt * ax;
        p.py += 0.5 * dt * ay;
        p.x += dt * p.px;
        p.y += dt * p.py;
        ax = -w2 * p.x - C * p.y;
        ay = -W2 * p.y - C * p.x;
        p.px += 0.5 * dt * ax;
        p.py += 0.5 * dt * ay;

        const ConservedQuantities e = conserved_quantities(p, params, nm);
        if (scale_plus > 0.0) {
            out.drift.max_rel_dev_E_plus =
                std::max(out.drift.max_rel_dev_E_plus, std::abs(e.E_plus - e0.E_plus) / scale_plus);
        }
        if (scale_minus > 0.0) {
            out.drift.max_rel_dev_E_minus =
                std::max(out.drift.max_rel_dev_E_minus, std::abs(e.E_minus - e0.E_minus) / scale_minus);
        }
        if (step <= window) {
            head_plus += e.E_plus;
            head_minus += e.E_minus;
        }
        if (step + window > n_steps) {
            tail_plus += e.E_plus;
            tail_minus += e.E_minus;
        }
        if (step % stride == 0) out.samples.push_back(p.x, p.px);
    }
    if (n_steps > 0) {
        const double wn = static_cast<double>(std::min(window, n_steps));
        if (scale_plus > 0.0) out.drift.secular_drift_E_plus = std::abs(tail_plus - head_plus) / wn / scale_plus;
        if (scale_minus > 0.0) {
            out.drift.secular_drift_E_minus = std::abs(tail_minus - head_minus) / wn / scale_minus;
        }
    }
    out.final_point = p;
    return out;
}

} // namespace oscillent
