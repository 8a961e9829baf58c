#include "oscillent/wkb.hpp"

#include "oscillent/config.hpp"
#include "oscillent/errors.hpp"
#include "oscillent/parallel.hpp"
#include "oscillent/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

namespace oscillent {

namespace {

double level_energy(double level, double omega, double hbar, EnergyConvention convention) {
    return (convention == EnergyConvention::zero_point ? level + 0.5 : level) * hbar * omega;
}

// Action at energy E, frozen at +-S(x_turn) outside the allowed region.
double clamped_action(double E, double x, double omega) {
    const double xt = std::sqrt(2.0 * E) / omega;
    return action_at_energy(E, std::clamp(x, -xt, xt), omega);
}

} // namespace

WkbState WkbState::make(std::int64_t n, double omega, double hbar, EnergyConvention convention) {
    if (n < 0) throw DomainError("WkbState: n must be >= 0");
    if (!(omega > 0.0) || !(hbar > 0.0)) throw DomainError("WkbState: omega and hbar must be positive");
    WkbState ws;
    ws.n = n;
    ws.omega = omega;
    ws.hbar = hbar;
    ws.E = level_energy(static_cast<double>(n), omega, hbar, convention);
    if (!(ws.E > 0.0)) throw DomainError("WkbState: energy must be positive (n = 0 with bare convention)");
    ws.parity = n % 2 == 0 ? Parity::even : Parity::odd;
    ws.T = 2.0 * std::numbers::pi / omega;
    return ws;
}

double WkbState::turning_point() const { return std::sqrt(2.0 * E) / omega; }

double WkbState::momentum(double x) const {
    const double k = 2.0 * E - omega * omega * x * x;
    return k > 0.0 ? std::sqrt(k) : 0.0;
}

double action_at_energy(double E, double x, double omega) {
    if (!(E > 0.0) || !(omega > 0.0)) throw DomainError("action_at_energy: E and omega must be positive");
    double s = omega * x / std::sqrt(2.0 * E);
    if (std::abs(s) > 1.0 + 1e-12) throw DomainError("action_at_energy: |x| beyond the turning point");
    s = std::clamp(s, -1.0, 1.0);
    const double theta = std::asin(s);
    return E / omega * (theta + s * std::sqrt(1.0 - s * s));  // sin(2 theta)/2 = s cos(theta)
}

double wkb_action(std::int64_t n, double x, double omega, double hbar) {
    if (n < 0) throw DomainError("wkb_action: n must be >= 0");
    if (n == 0) {
        if (x != 0.0) throw DomainError("wkb_action: n = 0 has no classically allowed region");
        return 0.0;
    }
    return action_at_energy(static_cast<double>(n) * hbar * omega, x, omega);
}

double expanded_action(std::int64_t n, double x, double omega, double hbar) {
    return x * std::sqrt(2.0 * static_cast<double>(n) * hbar * omega);
}

std::function<double(double)> wkb_wavefunction(const WkbState& ws) {
    const double limit = ws.turning_point() * (1.0 - 1e-3);
    return [ws, limit](double x) {
        if (!(std::abs(x) < limit)) throw DomainError("wkb_wavefunction: x too close to or beyond the turning point");
        const double phase = action_at_energy(ws.E, x, ws.omega) / ws.hbar;
        const double amp = std::sqrt(4.0 / (ws.T * ws.momentum(x)));
        return amp * (ws.parity == Parity::odd ? std::sin(phase) : std::cos(phase));
    };
}

double LambdaSpectrum::density(double dn) const {
    const double u = std::abs(dn) / dn_max;
    if (!(u < 1.0)) return 0.0;
    return 1.0 / (std::numbers::pi * dn_max * std::sqrt(1.0 - u * u));
}

double LambdaSpectrum::entropy() const { return std::log(std::numbers::pi * dn_max / 2.0); }

double LambdaSpectrum::normalization() const { return 2.0 * std::asin(1.0) / std::numbers::pi; }

LambdaSpectrum lambda_spectrum(const StateSpec& state, const ModelParams& params) {
    params.validate();
    if (!(state.E1 >= 0.0) || !(state.E2 >= 0.0)) throw DomainError("lambda_spectrum: energies must be >= 0");
    LambdaSpectrum s;
    s.dn_max = 2.0 * std::abs(params.C) * std::sqrt(state.E1 * state.E2) /
               (params.hbar * params.omega * params.Omega * params.Omega);
    if (s.dn_max < 1.0) {
        s.warnings.push_back("dn_max < 1: fewer than one Schmidt mode, semiclassical spectrum is meaningless");
    }
    return s;
}

EntropyResult wkb_entropy(const StateSpec& state, const ModelParams& params) {
    const LambdaSpectrum spec = lambda_spectrum(state, params);
    EntropyResult r;
    r.method = EntropyMethod::wkb_closed_form;
    r.value = std::log(std::numbers::pi * std::abs(params.C) * std::sqrt(state.E1 * state.E2) /
                       (params.hbar * params.omega * params.Omega * params.Omega));
    r.metadata = {{"dn_max", spec.dn_max}};
    r.warnings = spec.warnings;
    return r;
}

EntropyResult wkb_entropy_quadrature(const StateSpec& state, const ModelParams& params, std::size_t base_nodes) {
    const LambdaSpectrum spec = lambda_spectrum(state, params);
    if (!(spec.dn_max > 0.0)) throw DomainError("wkb_entropy_quadrature: dn_max must be positive");
    const double log_scale = std::log(std::numbers::pi * spec.dn_max);
    // -2 int_0^d lambda ln lambda = (1/pi) int_{-1}^{1} [ln(pi d) + ln(1-u^2)/2] du / sqrt(1-u^2)
    auto rule = [log_scale](std::size_t n) {
        double s = 0.0;
        for (double u : chebyshev_gauss_nodes(n)) s += log_scale + 0.5 * std::log1p(-u * u);
        return s / static_cast<double>(n);
    };
    const QuadratureEstimate q = richardson_1_over_n(rule, base_nodes);
    EntropyResult r;
    r.method = EntropyMethod::wkb_spectrum_quadrature;
    r.value = q.value;
    r.uncertainty = q.error;
    r.metadata = {{"dn_max", spec.dn_max}, {"evaluations", q.evaluations}};
    r.warnings = spec.warnings;
    return r;
}

std::function<double(double)> schmidt_modes(double dn, SchmidtBranch branch, const WkbState& ws) {
    if (!(dn >= 0.0) || !(dn < static_cast<double>(ws.n))) {
        throw DomainError("schmidt_modes: need 0 <= dn < n");
    }
    // Recover the convention from the stored energy.
    const double bare = static_cast<double>(ws.n) * ws.hbar * ws.omega;
    const EnergyConvention conv =
        std::abs(ws.E - bare) < 1e-9 * ws.E ? EnergyConvention::bare : EnergyConvention::zero_point;
    const double nd = static_cast<double>(ws.n);
    const double E_up = level_energy(nd + dn, ws.omega, ws.hbar, conv);
    const double E_dn = level_energy(nd - dn, ws.omega, ws.hbar, conv);
    // First branch uses the eigenstate's own trig function; second the other one.
    const bool use_sin = (ws.parity == Parity::odd) == (branch == SchmidtBranch::first);
    const double sign = branch == SchmidtBranch::first ? 1.0 : -1.0;
    const double xt = ws.turning_point();
    return [=](double x) {
        if (!(std::abs(x) < xt)) return 0.0;
        const double a = clamped_action(E_up, x, ws.omega) / ws.hbar;
        const double b = clamped_action(E_dn, x, ws.omega) / ws.hbar;
        const double amp = std::sqrt(2.0 / (ws.T * ws.momentum(x)));
        return use_sin ? amp * (std::sin(a) + sign * std::sin(b)) : amp * (std::cos(a) + sign * std::cos(b));
    };
}

Grid wkb_kernel_grid(const StateSpec& state, const ModelParams& params, std::size_t count) {
    params.validate();
    const WkbState ws = WkbState::make(state.n, params.omega, params.hbar);
    const double xt = ws.turning_point();
    if (count == 0) {
        // Central spacing pi x_t / N resolves 2 pi hbar / p_max with 16 points.
        const double pmax = ws.momentum(0.0);
        count = std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(8.0 * xt * pmax / params.hbar)));
    }
    return Grid::arcsine(xt, count);
}

ReducedDensityMatrix wkb_reduced_density(const StateSpec& state, const ModelParams& params, const Grid& grid,
                                         const WkbKernelOptions& options) {
    const LambdaSpectrum spec = lambda_spectrum(state, params);
    if (!(spec.dn_max > 0.0)) throw DomainError("wkb_reduced_density: coupling or energies vanish");
    if (options.dn_nodes < 1) throw DomainError("wkb_reduced_density: need at least 1 dn node");
    const WkbState ws = WkbState::make(state.n, params.omega, params.hbar);
    const Grid reference = wkb_kernel_grid(state, params);

    // Chebyshev-Gauss in u = dn/dn_max on (-1, 1) is symmetric; the positive half
    // carries weight 1/(2N) per node and branch under the lambda measure.
    std::vector<double> dns;
    for (double v : chebyshev_gauss_nodes(2 * options.dn_nodes)) {
        if (v > 0.0) dns.push_back(v * spec.dn_max);
    }
    const double sw = std::sqrt(1.0 / static_cast<double>(2 * options.dn_nodes));

    const auto nx = static_cast<Eigen::Index>(grid.size());
    const auto cols = static_cast<Eigen::Index>(2 * dns.size());
    Eigen::MatrixXd phi(nx, cols);
    std::vector<double> ref_norm2(static_cast<std::size_t>(cols), 0.0);
    parallel_for(dns.size(), options.jobs, [&](std::size_t k) {
        for (int b = 0; b < 2; ++b) {
            const auto f = schmidt_modes(dns[k], b == 0 ? SchmidtBranch::first : SchmidtBranch::second, ws);
            const auto c = static_cast<Eigen::Index>(2 * k + static_cast<std::size_t>(b));
            if (options.normalize_trace) {
                double norm2 = 0.0;
                for (std::size_t i = 0; i < reference.size(); ++i) {
                    const double v = f(reference.nodes[i]);
                    norm2 += reference.weights[i] * v * v;
                }
                ref_norm2[static_cast<std::size_t>(c)] = norm2;
            }
            for (Eigen::Index i = 0; i < nx; ++i) phi(i, c) = sw * f(grid.nodes[static_cast<std::size_t>(i)]);
        }
    });
    if (options.normalize_trace) {
        double raw = 0.0;
        for (double v : ref_norm2) raw += sw * sw * v;
        if (!(raw > 0.0)) throw GridError("wkb_reduced_density: modes vanish on the reference grid");
        phi /= std::sqrt(raw);
    }

    ReducedDensityMatrix rdm;
    rdm.kernel = Eigen::MatrixXd::Zero(nx, nx);
    rdm.kernel.selfadjointView<Eigen::Lower>().rankUpdate(phi);
    rdm.kernel.triangularView<Eigen::StrictlyUpper>() = rdm.kernel.transpose();
    rdm.grid = grid;
    rdm.state = state;
    const double tr = rdm.trace();
    if (!(std::abs(tr - 1.0) <= options.trace_tolerance)) {
        std::ostringstream msg;
        msg << "wkb_reduced_density: quadrature trace " << tr << " deviates from 1; use an arcsine grid on "
            << "[-x_turn, x_turn] with more than " << grid.size() << " points";
        throw GridError(msg.str());
    }
    return rdm;
}

void write_spectrum_csv(std::ostream& out, const LambdaSpectrum& spec, std::size_t points) {
    out << "dn,lambda\n";
    const std::vector<double> u = chebyshev_gauss_nodes(2 * points);
    std::vector<double> pos;
    for (double v : u) {
        if (v > 0.0) pos.push_back(v);
    }
    std::sort(pos.begin(), pos.end());
    for (double v : pos) {
        const double dn = v * spec.dn_max;
        out << format_double(dn) << ',' << format_double(spec.density(dn)) << '\n';
    }
}

} // namespace oscillent
