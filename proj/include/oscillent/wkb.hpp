#pragma once

// Semiclassical side: single-oscillator WKB states, the arcsine Schmidt
// spectrum in the shift variable dn, its entropy, and the Schmidt modes.

#include "oscillent/entropy_result.hpp"
#include "oscillent/model.hpp"
#include "oscillent/quantum.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace oscillent {

enum class EnergyConvention {
    zero_point,  // E = (n + 1/2) hbar omega
    bare,        // E = n hbar omega
};

enum class Parity { even, odd };

struct WkbState {
    std::int64_t n = 0;
    double E = 0.0;
    double omega = 1.0;
    double hbar = 1.0;
    Parity parity = Parity::even;
    double T = 0.0;  // 2 pi / omega

    static WkbState make(std::int64_t n, double omega, double hbar = 1.0,
                         EnergyConvention convention = EnergyConvention::zero_point);

    [[nodiscard]] double turning_point() const;  // sqrt(2E)/omega
    [[nodiscard]] double momentum(double x) const;  // sqrt(2(E - omega^2 x^2/2)), 0 outside
};

/// int_0^x p dz at energy E: (E/omega)(theta + sin(2 theta)/2), sin(theta) = omega x / sqrt(2E).
/// Throws DomainError for |x| beyond the turning point (beyond a 1e-12 relative slack).
double action_at_energy(double E, double x, double omega);

/// Action at E = n hbar omega: n hbar (theta + sin(2 theta)/2), sin(theta) = sqrt(hbar omega / 2n) x.
double wkb_action(std::int64_t n, double x, double omega, double hbar);

/// Small-x form x sqrt(2 n hbar omega).
double expanded_action(std::int64_t n, double x, double omega, double hbar);

/// sqrt(4/(T p(x))) sin(S/hbar) for odd n, cos(S/hbar) for even n.
/// Throws DomainError for |x| >= x_turn (1 - 1e-3).
std::function<double(double)> wkb_wavefunction(const WkbState& ws);

struct LambdaSpectrum {
    double dn_max = 0.0;  // 2 |C| sqrt(E1 E2) / (hbar omega Omega^2)
    std::vector<std::string> warnings;

    /// 1 / (pi dn_max sqrt(1 - (dn/dn_max)^2)) on [0, dn_max); 0 beyond.
    [[nodiscard]] double density(double dn) const;
    /// ln(pi dn_max / 2).
    [[nodiscard]] double entropy() const;
    /// 2 int_0^dn_max lambda, evaluated as 2 asin(1)/pi.
    [[nodiscard]] double normalization() const;
};

LambdaSpectrum lambda_spectrum(const StateSpec& state, const ModelParams& params);

/// ln[pi |C| sqrt(E1 E2) / (hbar omega Omega^2)].
EntropyResult wkb_entropy(const StateSpec& state, const ModelParams& params);

/// -2 int lambda ln lambda by Chebyshev-Gauss quadrature with Richardson extrapolation.
EntropyResult wkb_entropy_quadrature(const StateSpec& state, const ModelParams& params,
                                     std::size_t base_nodes = 1024);

enum class SchmidtBranch { first = 1, second = 2 };

/// Orthonormal modes at shifted quantum numbers n +- dn, each normalized to one:
///   odd n:  phi1 = sqrt(2/(T p)) [sin S+ + sin S-],  phi2 = sqrt(2/(T p)) [cos S+ - cos S-]
///   even n: phi1 = sqrt(2/(T p)) [cos S+ + cos S-],  phi2 = sqrt(2/(T p)) [sin S+ - sin S-]
/// with S+- the action at quantum number n +- dn under ws's energy convention,
/// frozen at its turning-point value beyond that point. Zero for |x| >= x_turn(n).
/// Throws DomainError unless 0 <= dn < n.
std::function<double(double)> schmidt_modes(double dn, SchmidtBranch branch, const WkbState& ws);

/// Arcsine grid on the slow oscillator's classically allowed interval, dense
/// enough to resolve the shortest wavelength there.
Grid wkb_kernel_grid(const StateSpec& state, const ModelParams& params, std::size_t count = 0);

struct WkbKernelOptions {
    std::size_t dn_nodes = 256;  // Chebyshev-Gauss nodes in dn / dn_max over (0, 1)
    /// Rescale the assembled kernel to unit trace on the reference arcsine grid.
    /// The modes keep their relative amplitudes, so phi2 still fades as dn -> 0.
    /// Without this the dropped turning-point phase leaves the trace off by O(n^-1/2).
    bool normalize_trace = true;
    unsigned jobs = 0;
    double trace_tolerance = 1e-3;
};

/// rho(x, x') = int_0^dn_max d(dn) lambda(dn) sum_i phi^i_dn(x) phi^i_dn(x'), evaluated on `grid`.
ReducedDensityMatrix wkb_reduced_density(const StateSpec& state, const ModelParams& params, const Grid& grid,
                                         const WkbKernelOptions& options = {});

/// CSV with header `dn,lambda`, `points` rows on [0, dn_max) at Chebyshev abscissae.
void write_spectrum_csv(std::ostream& out, const LambdaSpectrum& spec, std::size_t points = 200);

} // namespace oscillent
