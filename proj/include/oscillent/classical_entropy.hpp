#pragma once

#include "oscillent/entropy_result.hpp"
#include "oscillent/marginal.hpp"
#include "oscillent/model.hpp"
#include "oscillent/quadrature.hpp"

namespace oscillent {

/// S = ln[ pi^2 C sqrt(E1 E2) / (Delta omega Omega^2) ], which at Delta = h/2 reads
/// S = ln[ pi C sqrt(E1 E2) / (hbar omega Omega^2) ].
/// Zero coupling or a zero energy yields -inf with a warning attached.
EntropyResult classical_entropy_closed_form(const StateSpec& state, const ModelParams& params);

struct PolarQuadratureOptions {
    std::size_t base_nodes = 256;  // nodes per dimension at the coarsest Richardson level
    double tolerance = 1e-9;       // warn when the achieved error estimate exceeds this
};

/// -int W ln(W Delta) dx dpx over the small-coupling density, in the variables
/// (theta, y = (R^2 - (E+ - E-)) / A(theta)). The theta integral uses midpoint nodes,
/// the y integral Chebyshev-Gauss nodes (absorbing the band-edge 1/sqrt singularity);
/// the residual logarithmic error (~1/N) is removed by Richardson extrapolation.
EntropyResult classical_entropy_quadrature(const StateSpec& state, const ModelParams& params,
                                           const PolarQuadratureOptions& options = {});

/// int W dx dpx with the same rule (should be 1).
QuadratureEstimate marginal_normalization(const StateSpec& state, const ModelParams& params,
                                          const PolarQuadratureOptions& options = {});

} // namespace oscillent
