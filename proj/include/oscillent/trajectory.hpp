#pragma once

#include "oscillent/model.hpp"
#include "oscillent/sampling.hpp"

#include <cstddef>

namespace oscillent {

struct DriftReport {
    double max_rel_dev_E_plus = 0.0;   // max_t |E+(t) - E+(0)| / E+(0)
    double max_rel_dev_E_minus = 0.0;  // max_t |E-(t) - E-(0)| / |E-(0)|
    /// Relative change of E+ averaged over the first and last 1% of the run.
    /// Symplectic schemes keep this near zero even when the pointwise
    /// deviation above is set by the bounded O(dt^2) oscillation.
    double secular_drift_E_plus = 0.0;
    double secular_drift_E_minus = 0.0;
    std::size_t steps = 0;
    double dt = 0.0;
};

struct Trajectory {
    SampleSet samples;  // (x, px) every `stride` steps, starting with the initial point
    PhasePoint final_point;
    DriftReport drift;
};

/// Velocity-Verlet integration of Hamilton's equations. Requires
/// dt * max(omega1, omega2) <= 0.1; throws DomainError otherwise.
Trajectory integrate_trajectory(const PhasePoint& p0, const ModelParams& params, double dt,
                                std::size_t n_steps, std::size_t stride);

} // namespace oscillent
