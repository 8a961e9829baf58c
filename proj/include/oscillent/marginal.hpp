#pragma once

// Reduced phase-space density W(x, px) of the slow oscillator for a state on a
// fixed invariant torus, in the two forms used by the classical calculation.

#include "oscillent/model.hpp"

namespace oscillent {

struct SupportBand {
    double theta = 0.0;  // polar angle: px = R cos(theta), omega x = R sin(theta)
    double X1 = 0.0;     // inner edge of R^2
    double X2 = 0.0;     // outer edge of R^2

    [[nodiscard]] double midpoint() const { return 0.5 * (X1 + X2); }
    [[nodiscard]] double half_width() const { return 0.5 * (X2 - X1); }
};

/// X_{1,2} = E+ - E- -/+ (2C/Omega^2) |cos theta| sqrt(E+^2 - E-^2), first order in C.
SupportBand support_band(double theta, const StateSpec& state, const ModelParams& params);

enum class MarginalMode {
    small_coupling,  // W = (2N/Omega) [(R^2-X1)(X2-R^2)]^{-1/2}, N = omega Omega / (2 pi^2)
    pre_polar,       // W = N Omega^2/(2C|px|) * 2/sqrt(C^2 x^2 + Omega^2 (2E+ - px^2 - pbar_y^2 - omega^2 x^2))
};

/// Point value of W. On a support edge the density has an integrable
/// inverse-square-root singularity; such points are tagged instead of returning inf.
struct DensityValue {
    double value = 0.0;
    bool on_boundary = false;
};

class MarginalDensity {
public:
    MarginalDensity(const ModelParams& params, const StateSpec& state,
                    MarginalMode mode = MarginalMode::small_coupling);

    [[nodiscard]] DensityValue operator()(double x, double px) const;

    /// Normalization constant N = omega Omega / (2 pi^2).
    [[nodiscard]] double normalization_constant() const;

    [[nodiscard]] const ModelParams& params() const { return params_; }
    [[nodiscard]] const StateSpec& state() const { return state_; }
    [[nodiscard]] MarginalMode mode() const { return mode_; }

private:
    DensityValue small_coupling(double x, double px) const;
    DensityValue pre_polar(double x, double px) const;

    ModelParams params_;
    StateSpec state_;
    MarginalMode mode_;
};

DensityValue marginal_density(double x, double px, const StateSpec& state,
                              const ModelParams& params,
                              MarginalMode mode = MarginalMode::small_coupling);

} // namespace oscillent
