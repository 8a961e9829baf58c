#pragma once

// Two bilinearly coupled harmonic oscillators (unit masses):
//
//   H = 1/2 [ px^2 + py^2 + omega^2 x^2 + Omega^2 y^2 + 2 C x y ]
//
// Everything here uses exact formulas; small-coupling expansions live in the
// engines that need them.

#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

namespace oscillent {

struct ModelParams {
    double omega = 1.0;  // slow oscillator frequency
    double Omega = 2.0;  // fast oscillator frequency
    double C = 0.0;      // bilinear coupling (frequency^2)
    double hbar = 1.0;
    /// Minimal phase-space cell used to make the Boltzmann entropy dimensionless.
    /// Defaults to h/2 = pi*hbar.
    double delta_cell = std::numbers::pi;

    /// Throws DomainError unless all invariants hold (positivity, C^2 < omega^2 Omega^2).
    void validate() const;

    /// Same parameters with delta_cell reset to pi*hbar.
    [[nodiscard]] ModelParams with_default_cell() const;
};

struct NormalModes {
    double alpha = 1.0;
    double beta = 0.0;
    double omega1 = 1.0;      // slow eigenfrequency
    double omega2 = 1.0;      // fast eigenfrequency
    double delta_freq = 0.0;  // sqrt((Omega^2-omega^2)^2 + 4C^2)
};

/// Occupation numbers and normal-mode energies of a stationary state.
struct StateSpec {
    std::int64_t n = 0;
    std::int64_t m = 0;
    double E1 = 0.0;
    double E2 = 0.0;

    [[nodiscard]] double E_plus() const { return E1 + E2; }
    [[nodiscard]] double E_minus() const { return E2 - E1; }

    /// E1 = n hbar omega1, E2 = m hbar omega2 (zero-point energy excluded).
    static StateSpec from_quanta(std::int64_t n, std::int64_t m, const ModelParams& params);
    /// Energies taken as given; n, m are the nearest integers to E_i / (hbar omega_i).
    static StateSpec from_energies(double E1, double E2, const ModelParams& params);
};

struct PhasePoint {
    double x = 0.0;
    double y = 0.0;
    double px = 0.0;
    double py = 0.0;
};

struct NormalPoint {
    double x1 = 0.0;
    double p1 = 0.0;
    double x2 = 0.0;
    double p2 = 0.0;
};

struct ConservedQuantities {
    double E_plus = 0.0;
    double E_minus = 0.0;
};

struct RegimeThresholds {
    double much_less = 0.2;    // a << b  <=>  a/b <= much_less
    double much_greater = 5.0; // a >> b  <=>  a/b >= much_greater
};

struct RegimeRatios {
    double coupling_over_omega2 = 0.0;     // C / omega^2
    double omega2_over_Omega2 = 0.0;       // omega^2 / Omega^2
    double mixing_over_one = 0.0;          // C / Omega^2
    double E1_over_hbarOmega = 0.0;
    double E2_over_hbarOmega = 0.0;
    double interaction_over_hbarOmega = 0.0;  // C sqrt(E1 E2) / (omega Omega) / (hbar Omega)
    double interaction_over_min_energy = 0.0; // C sqrt(E1 E2) / (omega Omega) / min(E1, E2)
    double entropy_argument = 0.0;            // pi C sqrt(E1 E2) / (hbar omega Omega^2)
};

struct RegimeReport {
    bool weak_coupling_ok = false;
    bool classicality_ok = false;
    bool hierarchy_ok = false;
    bool entropy_positive = false;
    RegimeRatios ratios;

    [[nodiscard]] bool all_ok() const {
        return weak_coupling_ok && classicality_ok && hierarchy_ok && entropy_positive;
    }
    [[nodiscard]] std::vector<std::string> violations() const;
};

/// Exact diagonalization of the stiffness matrix [[omega^2, C], [C, Omega^2]].
/// Convention: x1 = alpha x - beta y, x2 = beta x + alpha y, alpha >= 0, sign(beta) = sign(C).
NormalModes normal_modes(const ModelParams& params);

NormalPoint to_normal_coords(const PhasePoint& p, const NormalModes& nm);
PhasePoint from_normal_coords(const NormalPoint& q, const NormalModes& nm);

/// Phase point on the invariant torus of `state` at normal-mode angles (phi1, phi2):
/// x_i = sqrt(2 E_i)/omega_i sin(phi_i), p_i = sqrt(2 E_i) cos(phi_i).
PhasePoint torus_point(const StateSpec& state, const NormalModes& nm, double phi1, double phi2);

double hamiltonian(const PhasePoint& p, const ModelParams& params);

/// E_plus is the Hamiltonian; E_minus uses the exact quadratic form (not the small-C one).
ConservedQuantities conserved_quantities(const PhasePoint& p, const ModelParams& params,
                                         const NormalModes& nm);

/// Time derivative of the phase point under Hamilton's equations.
PhasePoint eom_rhs(const PhasePoint& p, const ModelParams& params);

RegimeReport validate_regime(const ModelParams& params, const StateSpec& state,
                             const RegimeThresholds& thresholds = {});

} // namespace oscillent
