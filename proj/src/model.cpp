#include "oscillent/model.hpp"

#include "oscillent/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oscillent {

void ModelParams::validate() const {
    if (!(omega > 0.0) || !(Omega > 0.0)) {
        throw DomainError("oscillator frequencies must be positive");
    }
    if (!(hbar > 0.0)) {
        throw DomainError("hbar must be positive");
    }
    if (!(delta_cell > 0.0)) {
        throw DomainError("delta_cell must be positive");
    }
    if (!std::isfinite(C)) {
        throw DomainError("coupling must be finite");
    }
    if (C * C >= omega * omega * Omega * Omega) {
        throw DomainError("C^2 >= omega^2 Omega^2: Hamiltonian is not positive definite");
    }
}

ModelParams ModelParams::with_default_cell() const {
    ModelParams copy = *this;
    copy.delta_cell = std::numbers::pi * hbar;
    return copy;
}

StateSpec StateSpec::from_quanta(std::int64_t n, std::int64_t m, const ModelParams& params) {
    if (n < 0 || m < 0) {
        throw DomainError("occupation numbers must be non-negative");
    }
    const NormalModes nm = normal_modes(params);
    StateSpec s;
    s.n = n;
    s.m = m;
    s.E1 = static_cast<double>(n) * params.hbar * nm.omega1;
    s.E2 = static_cast<double>(m) * params.hbar * nm.omega2;
    return s;
}

StateSpec StateSpec::from_energies(double E1, double E2, const ModelParams& params) {
    if (!(E1 >= 0.0) || !(E2 >= 0.0)) {
        throw DomainError("normal-mode energies must be non-negative");
    }
    const NormalModes nm = normal_modes(params);
    StateSpec s;
    s.E1 = E1;
    s.E2 = E2;
    s.n = std::llround(E1 / (params.hbar * nm.omega1));
    s.m = std::llround(E2 / (params.hbar * nm.omega2));
    return s;
}

std::vector<std::string> RegimeReport::violations() const {
    std::vector<std::string> out;
    if (!weak_coupling_ok) out.emplace_back("weak coupling (C << omega^2 << Omega^2)");
    if (!classicality_ok) out.emplace_back("classicality (E1, E2, interaction >> hbar Omega)");
    if (!hierarchy_ok) out.emplace_back("interaction energy << min(E1, E2)");
    if (!entropy_positive) out.emplace_back("closed-form entropy argument > 1");
    return out;
}

NormalModes normal_modes(const ModelParams& params) {
    params.validate();
    const double w2 = params.omega * params.omega;
    const double W2 = params.Omega * params.Omega;
    const double C = params.C;
    const double s = W2 - w2;
    const double d = std::hypot(s, 2.0 * C);

    NormalModes nm;
    nm.delta_freq = d;
    if (d == 0.0) {
        // omega == Omega and C == 0: any rotation diagonalizes; keep the identity.
        nm.alpha = 1.0;
        nm.beta = 0.0;
        nm.omega1 = params.omega;
        nm.omega2 = params.Omega;
        return nm;
    }

    // alpha^2 = (1 + s/d)/2, beta^2 = (1 - s/d)/2, written without cancellation.
    double alpha2 = 0.0;
    double beta2 = 0.0;
    if (s >= 0.0) {
        beta2 = 2.0 * C * C / (d * (d + s));
        alpha2 = 1.0 - beta2;
    } else {
        alpha2 = 2.0 * C * C / (d * (d - s));
        beta2 = 1.0 - alpha2;
    }
    nm.alpha = std::sqrt(alpha2);
    nm.beta = std::copysign(std::sqrt(beta2), C);
    if (C == 0.0) nm.beta = 0.0;

    const double omega2_sq = 0.5 * (w2 + W2 + d);
    // Slow frequency from the determinant to avoid cancellation at weak coupling.
    const double omega1_sq = (w2 * W2 - C * C) / omega2_sq;
    nm.omega1 = std::sqrt(omega1_sq);
    nm.omega2 = std::sqrt(omega2_sq);
    return nm;
}

NormalPoint to_normal_coords(const PhasePoint& p, const NormalModes& nm) {
    return NormalPoint{
        nm.alpha * p.x - nm.beta * p.y,
        nm.alpha * p.px - nm.beta * p.py,
        nm.beta * p.x + nm.alpha * p.y,
        nm.beta * p.px + nm.alpha * p.py,
    };
}

PhasePoint from_normal_coords(const NormalPoint& q, const NormalModes& nm) {
    return PhasePoint{
        nm.alpha * q.x1 + nm.beta * q.x2,
        -nm.beta * q.x1 + nm.alpha * q.x2,
        nm.alpha * q.p1 + nm.beta * q.p2,
        -nm.beta * q.p1 + nm.alpha * q.p2,
    };
}

PhasePoint torus_point(const StateSpec& state, const NormalModes& nm, double phi1, double phi2) {
    const double a1 = std::sqrt(2.0 * state.E1);
    const double a2 = std::sqrt(2.0 * state.E2);
    NormalPoint q{a1 / nm.omega1 * std::sin(phi1), a1 * std::cos(phi1),
                  a2 / nm.omega2 * std::sin(phi2), a2 * std::cos(phi2)};
    return from_normal_coords(q, nm);
}

double hamiltonian(const PhasePoint& p, const ModelParams& params) {
    const double w2 = params.omega * params.omega;
    const double W2 = params.Omega * params.Omega;
    return 0.5 * (p.px * p.px + p.py * p.py + w2 * p.x * p.x + W2 * p.y * p.y +
                  2.0 * params.C * p.x * p.y);
}

ConservedQuantities conserved_quantities(const PhasePoint& p, const ModelParams& params,
                                         const NormalModes& nm) {
    const double a = nm.alpha;
    const double b = nm.beta;
    const double w1s = nm.omega1 * nm.omega1;
    const double w2s = nm.omega2 * nm.omega2;
    const double e_minus = 2.0 * a * b * p.px * p.py +
                           0.5 * ((b * b * w2s - a * a * w1s) * p.x * p.x +
                                  (a * a * w2s - b * b * w1s) * p.y * p.y) +
                           a * b * (w2s + w1s) * p.x * p.y +
                           0.5 * (a * a - b * b) * (p.py * p.py - p.px * p.px);
    return {hamiltonian(p, params), e_minus};
}

PhasePoint eom_rhs(const PhasePoint& p, const ModelParams& params) {
    const double w2 = params.omega * params.omega;
    const double W2 = params.Omega * params.Omega;
    return PhasePoint{p.px, p.py, -w2 * p.x - params.C * p.y, -W2 * p.y - params.C * p.x};
}

RegimeReport validate_regime(const ModelParams& params, const StateSpec& state,
                             const RegimeThresholds& th) {
    RegimeReport r;
    const double w = params.omega;
    const double W = params.Omega;
    const double hb = params.hbar;
    const double C = std::abs(params.C);
    const double e1 = state.E1;
    const double e2 = state.E2;
    const double interaction = C * std::sqrt(e1 * e2) / (w * W);

    RegimeRatios& q = r.ratios;
    q.coupling_over_omega2 = C / (w * w);
    q.omega2_over_Omega2 = (w * w) / (W * W);
    q.mixing_over_one = C / (W * W);
    q.E1_over_hbarOmega = e1 / (hb * W);
    q.E2_over_hbarOmega = e2 / (hb * W);
    q.interaction_over_hbarOmega = interaction / (hb * W);
    const double emin = std::min(e1, e2);
    q.interaction_over_min_energy =
        emin > 0.0 ? interaction / emin : std::numeric_limits<double>::infinity();
    q.entropy_argument = std::numbers::pi * C * std::sqrt(e1 * e2) / (hb * w * W * W);

    r.weak_coupling_ok =
        q.coupling_over_omega2 <= th.much_less && q.omega2_over_Omega2 <= th.much_less;
    r.classicality_ok = q.E1_over_hbarOmega >= th.much_greater &&
                        q.E2_over_hbarOmega >= th.much_greater &&
                        q.interaction_over_hbarOmega >= th.much_greater;
    r.hierarchy_ok = q.interaction_over_min_energy <= th.much_less;
    r.entropy_positive = q.entropy_argument > 1.0;
    return r;
}

} // namespace oscillent
