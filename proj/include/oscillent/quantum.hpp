#pragma once

// Exact quantum side: normal-mode eigenstates, the reduced density kernel of
// the slow oscillator on a grid, and its spectrum.

#include "oscillent/entropy_result.hpp"
#include "oscillent/model.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace oscillent {

inline constexpr std::int64_t kMaxExactN = 200;
inline constexpr std::int64_t kMaxExactM = 2000;

struct Grid {
    std::vector<double> nodes;
    std::vector<double> weights;  // all positive
    double half_width = 0.0;      // nodes lie in [-half_width, half_width]

    [[nodiscard]] std::size_t size() const { return nodes.size(); }

    /// Uniform nodes on [-L, L] with trapezoid weights.
    static Grid uniform(double half_width, std::size_t count);
    /// Nodes x = L sin(t) at midpoint t in (-pi/2, pi/2), weights L cos(t) dt.
    /// Integrates functions with 1/sqrt(L^2 - x^2) endpoint behaviour well.
    static Grid arcsine(double half_width, std::size_t count);
};

struct KernelGridSpec {
    double Lx = 0.0;
    double Ly = 0.0;
    std::size_t Nx = 0;
    std::size_t Ny = 0;

    /// Same extents, (N-1) * factor + 1 points per axis (nested refinement).
    [[nodiscard]] KernelGridSpec refined(std::size_t factor) const;
};

struct GridRule {
    double margin = 0.25;             // fractional margin beyond the turning point
    double tail_lengths = 5.0;        // extra oscillator lengths beyond the margin
    double points_per_wavelength = 8.0;
};

/// Extents and point counts that cover both normal-mode turning points (with
/// margin and tails) and resolve the shortest de Broglie wavelength.
KernelGridSpec default_grid_spec(const StateSpec& state, const ModelParams& params,
                                 const GridRule& rule = {});

/// psi_{n,m}(x, y) = h_n(sqrt(omega1/hbar) x1) h_m(sqrt(omega2/hbar) x2) (omega1 omega2 / hbar^2)^{1/4}.
std::function<double(double, double)> eigenstate_wavefunction(const StateSpec& state,
                                                              const ModelParams& params);

struct ReducedDensityMatrix {
    Eigen::MatrixXd kernel;  // rho(x_i, x_j), density per length
    Grid grid;
    StateSpec state;

    [[nodiscard]] double trace() const;
    [[nodiscard]] double max_asymmetry() const;
};

struct KernelOptions {
    unsigned jobs = 0;             // 0: hardware concurrency
    double trace_tolerance = 1e-4; // GridError beyond this
};

/// rho(x, x') = int dy psi(x, y) psi(x', y), trapezoid rule in y.
/// Throws DomainError beyond the supported (n, m) range and GridError when the
/// quadrature trace misses 1 by more than the tolerance.
ReducedDensityMatrix reduced_density_kernel(const StateSpec& state, const ModelParams& params,
                                            const KernelGridSpec& spec, const KernelOptions& options = {});

struct SchmidtSpectrum {
    std::vector<double> eigenvalues;  // descending, clipped at 0
    double entropy = 0.0;             // nats
    double trace = 0.0;
    double min_raw_eigenvalue = 0.0;  // before clipping

    [[nodiscard]] double effective_rank() const;
    /// Largest over smallest eigenvalue among those >= threshold.
    [[nodiscard]] double flatness(double threshold = 1e-3) const;
    /// Largest over the median eigenvalue among those >= threshold.
    [[nodiscard]] double max_over_median(double threshold = 1e-3) const;
    /// Number of eigenvalues >= threshold.
    [[nodiscard]] std::size_t occupied(double threshold = 1e-3) const;
};

/// Spectrum of W^{1/2} rho W^{1/2}. Eigenvalues in [-1e-8, 0) are clipped to 0;
/// anything more negative throws Error.
SchmidtSpectrum schmidt_spectrum(const ReducedDensityMatrix& rdm);

/// -sum p ln p over probabilities, ignoring p < 1e-14.
double entropy_of_probabilities(const std::vector<double>& p);
double binary_entropy(double f);

EntropyResult von_neumann_entropy(const ReducedDensityMatrix& rdm);

struct ConvergedEntropy {
    EntropyResult result;
    SchmidtSpectrum spectrum;
    KernelGridSpec grid;      // accepted (coarser) grid
    double refinement_change = 0.0;  // |S(N) - S(2N)|
};

using KernelProvider = std::function<ReducedDensityMatrix(const KernelGridSpec&)>;

/// Refines `start` until |S(N) - S(2N)| <= tolerance; reports S(2N).
ConvergedEntropy converged_kernel_entropy(const KernelProvider& kernel_for, const KernelGridSpec& start,
                                          double tolerance = 1e-3, int max_doublings = 3);

/// Same, starting from default_grid_spec and computing kernels directly.
ConvergedEntropy converged_kernel_entropy(const StateSpec& state, const ModelParams& params,
                                          double tolerance = 1e-3, const KernelOptions& options = {},
                                          const GridRule& rule = {}, int max_doublings = 3);

/// Small-coupling ground-state entanglement: binary entropy with
/// f = C^2 / (4 omega Omega^3). Warns when f > 0.1.
EntropyResult ground_state_entropy_smallC(const ModelParams& params);

struct LowExcitationResult {
    EntropyResult entropy;
    double A = 0.0;
    double B = 0.0;
    double zeta2 = 0.0;
    double F = 0.0;                 // B / zeta^2
    double F_omega4 = 0.0;          // C^2 E1 E2 / (hbar^2 omega^2 Omega^4)
    double F_omega2 = 0.0;          // C^2 E1 E2 / (hbar^2 omega^2 Omega^2)
};

/// Two-state mixture of the order-C^2 expansion: A = (C/hbar Omega^2)^2 E2 / (2 sqrt 2),
/// B = 2A, zeta^2 = omega^2 / (sqrt 2 E1), F = B / zeta^2, S = binary entropy of F.
/// Throws RegimeError when F >= 0.5.
LowExcitationResult low_excitation_entropy(const StateSpec& state, const ModelParams& params);

/// Probability mass of the two-branch arcsine spectrum in unit cells
/// [k, k+1) of |dn| for k = 0, 1, ..., each doubled for the two branches and
/// sorted descending. Sums to 1.
std::vector<double> arcsine_cell_masses(double dn_max);

/// Total-variation distance between two descending probability lists,
/// padding the shorter with zeros.
double total_variation(const std::vector<double>& p, const std::vector<double>& q);

} // namespace oscillent
