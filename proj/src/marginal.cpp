#include "oscillent/marginal.hpp"

#include "oscillent/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace oscillent {

SupportBand support_band(double theta, const StateSpec& state, const ModelParams& params) {
    const double ep = state.E_plus();
    const double em = state.E_minus();
    if (std::abs(em) > ep) throw DomainError("support_band: |E-| > E+");
    const double mid = ep - em;
    const double half = 2.0 * std::abs(params.C) / (params.Omega * params.Omega) *
                        std::abs(std::cos(theta)) * std::sqrt(ep * ep - em * em);
    return {theta, mid - half, mid + half};
}

MarginalDensity::MarginalDensity(const ModelParams& params, const StateSpec& state,
                                 MarginalMode mode)
    : params_(params), state_(state), mode_(mode) {
    params_.validate();
}

double MarginalDensity::normalization_constant() const {
    return params_.omega * params_.Omega / (2.0 * std::numbers::pi * std::numbers::pi);
}

DensityValue MarginalDensity::operator()(double x, double px) const {
    return mode_ == MarginalMode::small_coupling ? small_coupling(x, px) : pre_polar(x, px);
}

DensityValue MarginalDensity::small_coupling(double x, double px) const {
    const double wx = params_.omega * x;
    const double r2 = px * px + wx * wx;
    const double theta = std::atan2(wx, px);
    const SupportBand band = support_band(theta, state_, params_);
    if (r2 < band.X1 || r2 > band.X2) return {0.0, false};
    if (r2 == band.X1 || r2 == band.X2) {
        return {std::numeric_limits<double>::infinity(), true};
    }
    const double prefactor = 2.0 * normalization_constant() / params_.Omega;
    return {prefactor / std::sqrt((r2 - band.X1) * (band.X2 - r2)), false};
}

DensityValue MarginalDensity::pre_polar(double x, double px) const {
    const double C = params_.C;
    if (C == 0.0 || px == 0.0) return {0.0, false};
    const double W2 = params_.Omega * params_.Omega;
    const double wx2 = params_.omega * params_.omega * x * x;
    const double ep = state_.E_plus();
    const double em = state_.E_minus();
    const double pbar_y = W2 / (2.0 * C * px) * (em - ep + px * px + wx2);
    const double radicand = C * C * x * x + W2 * (2.0 * ep - (px * px + pbar_y * pbar_y + wx2));
    if (radicand < 0.0) return {0.0, false};
    if (radicand == 0.0) return {std::numeric_limits<double>::infinity(), true};
    const double value =
        normalization_constant() * W2 / (2.0 * std::abs(C * px)) * 2.0 / std::sqrt(radicand);
    return {value, false};
}

DensityValue marginal_density(double x, double px, const StateSpec& state, const ModelParams& params,
                              MarginalMode mode) {
    return MarginalDensity(params, state, mode)(x, px);
}

} // namespace oscillent
