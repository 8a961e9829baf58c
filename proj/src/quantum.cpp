#include "oscillent/quantum.hpp"

#include "oscillent/errors.hpp"
#include "oscillent/hermite.hpp"
#include "oscillent/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace oscillent {

Grid Grid::uniform(double half_width, std::size_t count) {
    if (!(half_width > 0.0) || count < 2) throw DomainError("Grid::uniform: need L > 0 and N >= 2");
    Grid g;
    g.half_width = half_width;
    g.nodes.resize(count);
    g.weights.resize(count);
    const double h = 2.0 * half_width / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        g.nodes[i] = -half_width + h * static_cast<double>(i);
        g.weights[i] = h;
    }
    g.weights.front() = 0.5 * h;
    g.weights.back() = 0.5 * h;
    return g;
}

Grid Grid::arcsine(double half_width, std::size_t count) {
    if (!(half_width > 0.0) || count < 1) throw DomainError("Grid::arcsine: need L > 0 and N >= 1");
    Grid g;
    g.half_width = half_width;
    g.nodes.resize(count);
    g.weights.resize(count);
    const double dt = std::numbers::pi / static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = -0.5 * std::numbers::pi + (static_cast<double>(i) + 0.5) * dt;
        g.nodes[i] = half_width * std::sin(t);
        g.weights[i] = half_width * std::cos(t) * dt;
    }
    return g;
}

KernelGridSpec KernelGridSpec::refined(std::size_t factor) const {
    KernelGridSpec s = *this;
    s.Nx = (Nx - 1) * factor + 1;
    s.Ny = (Ny - 1) * factor + 1;
    return s;
}

KernelGridSpec default_grid_spec(const StateSpec& state, const ModelParams& params, const GridRule& rule) {
    params.validate();
    const NormalModes nm = normal_modes(params);
    const double hb = params.hbar;
    const double q1 = 2.0 * static_cast<double>(state.n) + 1.0;
    const double q2 = 2.0 * static_cast<double>(state.m) + 1.0;
    // Turning points and peak momenta at E = (k + 1/2) hbar omega.
    const double turn1 = std::sqrt(q1 * hb / nm.omega1);
    const double turn2 = std::sqrt(q2 * hb / nm.omega2);
    const double reach1 = turn1 * (1.0 + rule.margin) + rule.tail_lengths * std::sqrt(hb / nm.omega1);
    const double reach2 = turn2 * (1.0 + rule.margin) + rule.tail_lengths * std::sqrt(hb / nm.omega2);
    const double pmax1 = std::sqrt(q1 * hb * nm.omega1);
    const double pmax2 = std::sqrt(q2 * hb * nm.omega2);
    const double a = std::abs(nm.alpha);
    const double b = std::abs(nm.beta);

    KernelGridSpec s;
    s.Lx = a * reach1 + b * reach2;
    s.Ly = b * reach1 + a * reach2;
    const double px = a * pmax1 + b * pmax2;
    const double py = b * pmax1 + a * pmax2;
    const double hx = 2.0 * std::numbers::pi * hb / (rule.points_per_wavelength * px);
    const double hy = 2.0 * std::numbers::pi * hb / (rule.points_per_wavelength * py);
    s.Nx = static_cast<std::size_t>(std::ceil(2.0 * s.Lx / hx)) + 1;
    s.Ny = static_cast<std::size_t>(std::ceil(2.0 * s.Ly / hy)) + 1;
    return s;
}

std::function<double(double, double)> eigenstate_wavefunction(const StateSpec& state, const ModelParams& params) {
    params.validate();
    if (state.n < 0 || state.m < 0) throw DomainError("eigenstate_wavefunction: quanta must be >= 0");
    const NormalModes nm = normal_modes(params);
    const double s1 = std::sqrt(nm.omega1 / params.hbar);
    const double s2 = std::sqrt(nm.omega2 / params.hbar);
    const double norm = std::sqrt(s1 * s2);
    const std::int64_t n = state.n;
    const std::int64_t m = state.m;
    return [=](double x, double y) {
        const double x1 = nm.alpha * x - nm.beta * y;
        const double x2 = nm.beta * x + nm.alpha * y;
        return hermite_function(n, s1 * x1) * hermite_function(m, s2 * x2) * norm;
    };
}

double ReducedDensityMatrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        t += grid.weights[i] * kernel(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
    }
    return t;
}

double ReducedDensityMatrix::max_asymmetry() const {
    return (kernel - kernel.transpose()).cwiseAbs().maxCoeff();
}

ReducedDensityMatrix reduced_density_kernel(const StateSpec& state, const ModelParams& params,
                                            const KernelGridSpec& spec, const KernelOptions& options) {
    if (state.n < 0 || state.m < 0) throw DomainError("reduced_density_kernel: quanta must be >= 0");
    if (state.n > kMaxExactN || state.m > kMaxExactM) {
        throw DomainError("reduced_density_kernel: exact engine supports n <= " + std::to_string(kMaxExactN) +
                          " and m <= " + std::to_string(kMaxExactM));
    }
    const Grid gx = Grid::uniform(spec.Lx, spec.Nx);
    const Grid gy = Grid::uniform(spec.Ly, spec.Ny);
    const auto psi = eigenstate_wavefunction(state, params);

    const auto nx = static_cast<Eigen::Index>(gx.size());
    const auto ny = static_cast<Eigen::Index>(gy.size());
    // Phi(i, j) = psi(x_i, y_j) sqrt(w_j); rho = Phi Phi^T is exactly symmetric.
    Eigen::MatrixXd phi(nx, ny);
    parallel_for(gx.size(), options.jobs, [&](std::size_t i) {
        const auto r = static_cast<Eigen::Index>(i);
        for (Eigen::Index j = 0; j < ny; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            phi(r, j) = psi(gx.nodes[i], gy.nodes[ju]) * std::sqrt(gy.weights[ju]);
        }
    });

    ReducedDensityMatrix rdm;
    rdm.kernel = Eigen::MatrixXd::Zero(nx, nx);
    rdm.kernel.selfadjointView<Eigen::Lower>().rankUpdate(phi);
    rdm.kernel.triangularView<Eigen::StrictlyUpper>() = rdm.kernel.transpose();
    rdm.grid = gx;
    rdm.state = state;

    const double tr = rdm.trace();
    if (!(std::abs(tr - 1.0) <= options.trace_tolerance)) {
        std::ostringstream msg;
        msg << "reduced_density_kernel: quadrature trace " << tr << " deviates from 1; grid (Lx=" << spec.Lx
            << ", Nx=" << spec.Nx << ", Ly=" << spec.Ly << ", Ny=" << spec.Ny
            << ") is insufficient, try Lx=" << 1.5 * spec.Lx << ", Ly=" << 1.5 * spec.Ly
            << " with the point counts scaled by 1.5 or more";
        throw GridError(msg.str());
    }
    return rdm;
}

SchmidtSpectrum schmidt_spectrum(const ReducedDensityMatrix& rdm) {
    const auto n = static_cast<Eigen::Index>(rdm.grid.size());
    Eigen::VectorXd sw(n);
    for (Eigen::Index i = 0; i < n; ++i) sw(i) = std::sqrt(rdm.grid.weights[static_cast<std::size_t>(i)]);
    const Eigen::MatrixXd d = sw.asDiagonal() * rdm.kernel * sw.asDiagonal();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(d, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw Error("schmidt_spectrum: eigensolver failed");

    SchmidtSpectrum s;
    const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending
    s.min_raw_eigenvalue = n > 0 ? ev(0) : 0.0;
    if (s.min_raw_eigenvalue < -1e-8) {
        throw Error("schmidt_spectrum: eigenvalue " + std::to_string(s.min_raw_eigenvalue) +
                    " below -1e-8; kernel is not positive");
    }
    s.eigenvalues.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        s.eigenvalues[static_cast<std::size_t>(i)] = std::max(0.0, ev(n - 1 - i));
    }
    for (double p : s.eigenvalues) s.trace += p;
    s.entropy = entropy_of_probabilities(s.eigenvalues);
    return s;
}

double SchmidtSpectrum::effective_rank() const { return std::exp(entropy); }

double SchmidtSpectrum::flatness(double threshold) const {
    const std::size_t k = occupied(threshold);
    if (k == 0) return 0.0;
    return eigenvalues.front() / eigenvalues[k - 1];
}

double SchmidtSpectrum::max_over_median(double threshold) const {
    const std::size_t k = occupied(threshold);
    if (k == 0) return 0.0;
    const double median =
        k % 2 == 1 ? eigenvalues[k / 2] : 0.5 * (eigenvalues[k / 2 - 1] + eigenvalues[k / 2]);
    return eigenvalues.front() / median;
}

std::size_t SchmidtSpectrum::occupied(double threshold) const {
    return static_cast<std::size_t>(
        std::count_if(eigenvalues.begin(), eigenvalues.end(), [threshold](double p) { return p >= threshold; }));
}

double entropy_of_probabilities(const std::vector<double>& p) {
    double s = 0.0;
    for (double v : p) {
        if (v >= 1e-14) s -= v * std::log(v);
    }
    return s;
}

double binary_entropy(double f) {
    if (f <= 0.0 || f >= 1.0) return 0.0;
    return -(1.0 - f) * std::log1p(-f) - f * std::log(f);
}

EntropyResult von_neumann_entropy(const ReducedDensityMatrix& rdm) {
    const SchmidtSpectrum s = schmidt_spectrum(rdm);
    EntropyResult r;
    r.method = EntropyMethod::exact_kernel;
    r.value = s.entropy;
    r.metadata = {{"n", rdm.state.n},
                  {"m", rdm.state.m},
                  {"grid_points", rdm.grid.size()},
                  {"grid_half_width", rdm.grid.half_width},
                  {"trace", rdm.trace()},
                  {"effective_rank", s.effective_rank()},
                  {"min_raw_eigenvalue", s.min_raw_eigenvalue}};
    return r;
}

ConvergedEntropy converged_kernel_entropy(const KernelProvider& kernel_for, const KernelGridSpec& start,
                                          double tolerance, int max_doublings) {
    KernelGridSpec spec = start;
    SchmidtSpectrum coarse = schmidt_spectrum(kernel_for(spec));
    for (int level = 0;; ++level) {
        const KernelGridSpec fine_spec = spec.refined(2);
        const ReducedDensityMatrix fine_rdm = kernel_for(fine_spec);
        SchmidtSpectrum fine = schmidt_spectrum(fine_rdm);
        const double change = std::abs(fine.entropy - coarse.entropy);
        if (change <= tolerance || level + 1 >= max_doublings) {
            ConvergedEntropy out;
            out.result = von_neumann_entropy(fine_rdm);
            out.result.metadata["refinement_change"] = change;
            out.result.metadata["accepted_Nx"] = spec.Nx;
            out.result.metadata["accepted_Ny"] = spec.Ny;
            out.result.uncertainty = change;
            if (change > tolerance) {
                out.result.warnings.push_back("grid refinement did not converge to the requested tolerance");
            }
            out.spectrum = std::move(fine);
            out.grid = spec;
            out.refinement_change = change;
            return out;
        }
        spec = fine_spec;
        coarse = std::move(fine);
    }
}

ConvergedEntropy converged_kernel_entropy(const StateSpec& state, const ModelParams& params, double tolerance,
                                          const KernelOptions& options, const GridRule& rule, int max_doublings) {
    return converged_kernel_entropy(
        [&](const KernelGridSpec& spec) { return reduced_density_kernel(state, params, spec, options); },
        default_grid_spec(state, params, rule), tolerance, max_doublings);
}

EntropyResult ground_state_entropy_smallC(const ModelParams& params) {
    params.validate();
    const double f = params.C * params.C / (4.0 * params.omega * std::pow(params.Omega, 3));
    EntropyResult r;
    r.method = EntropyMethod::ground_state_small_c;
    r.value = binary_entropy(f);
    r.metadata = {{"f", f}};
    if (f > 0.1) r.warnings.push_back("f > 0.1: outside the small-coupling regime");
    return r;
}

LowExcitationResult low_excitation_entropy(const StateSpec& state, const ModelParams& params) {
    params.validate();
    if (!(state.E1 > 0.0) || !(state.E2 > 0.0)) {
        throw DomainError("low_excitation_entropy: E1 and E2 must be positive");
    }
    const double hb = params.hbar;
    const double W2 = params.Omega * params.Omega;
    const double g = params.C / (hb * W2);
    LowExcitationResult out;
    out.A = 0.5 * g * g * state.E2 / std::numbers::sqrt2;
    out.B = g * g * state.E2 / std::numbers::sqrt2;
    out.zeta2 = params.omega * params.omega / (std::numbers::sqrt2 * state.E1);
    out.F = out.B / out.zeta2;
    const double base = params.C * params.C * state.E1 * state.E2 / (hb * hb * params.omega * params.omega);
    out.F_omega4 = base / (W2 * W2);
    out.F_omega2 = base / W2;
    if (out.F >= 0.5) {
        throw RegimeError("low_excitation_entropy: F = " + std::to_string(out.F) + " >= 0.5");
    }
    EntropyResult& r = out.entropy;
    r.method = EntropyMethod::low_excitation;
    r.value = binary_entropy(out.F);
    r.metadata = {{"A", out.A},       {"B", out.B},
                  {"zeta2", out.zeta2}, {"F", out.F},
                  {"F_omega4", out.F_omega4}, {"F_omega2", out.F_omega2}};
    const RegimeReport reg = validate_regime(params, state);
    if (reg.ratios.E1_over_hbarOmega < 5.0 || reg.ratios.E2_over_hbarOmega < 5.0) {
        r.warnings.push_back("energies are not large compared with hbar*Omega");
    }
    if (out.F > 0.2) r.warnings.push_back("F is not small; two-state reduction is unreliable");
    return out;
}

std::vector<double> arcsine_cell_masses(double dn_max) {
    if (!(dn_max > 0.0)) throw DomainError("arcsine_cell_masses: dn_max must be positive");
    std::vector<double> out;
    const auto cells = static_cast<std::size_t>(std::ceil(dn_max));
    for (std::size_t k = 0; k < cells; ++k) {
        const double lo = static_cast<double>(k) / dn_max;
        const double hi = std::min(1.0, static_cast<double>(k + 1) / dn_max);
        const double mass = (std::asin(hi) - std::asin(lo)) / std::numbers::pi;
        out.push_back(mass);
        out.push_back(mass);
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
    const std::size_t n = std::max(p.size(), q.size());
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = i < p.size() ? p[i] : 0.0;
        const double b = i < q.size() ? q[i] : 0.0;
        s += std::abs(a - b);
    }
    return 0.5 * s;
}

} // namespace oscillent
