#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oscillent/config.hpp"
#include "oscillent/errors.hpp"
#include "oscillent/hermite.hpp"
#include "oscillent/kernel_cache.hpp"
#include "oscillent/quantum.hpp"

#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/hermite.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <vector>

using namespace oscillent;

namespace {

constexpr double kPi = std::numbers::pi;

ModelParams make_params(double omega, double Omega, double C) {
    ModelParams p;
    p.omega = omega;
    p.Omega = Omega;
    p.C = C;
    return p;
}

ModelParams reference_params() { return make_params(1.0, std::sqrt(10.0), 0.3); }

// Orthonormal Hermite function from boost's physicists' polynomial (valid while H_n fits a double).
double hermite_oracle(unsigned n, double xi) {
    const double log_norm = 0.5 * (n * std::log(2.0) + std::lgamma(n + 1.0) + 0.5 * std::log(kPi));
    return boost::math::hermite(n, xi) * std::exp(-0.5 * xi * xi - log_norm);
}

// Trapezoid rule on a uniform grid: spectrally accurate for smooth, Gaussian-decaying integrands.
template <typename F>
double trapezoid(F f, double L, std::size_t count) {
    const double h = 2 * L / static_cast<double>(count - 1);
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double w = (i == 0 || i + 1 == count) ? 0.5 : 1.0;
        s += w * f(-L + h * static_cast<double>(i));
    }
    return s * h;
}

// Gaussian-state oracle for the ground state: symplectic eigenvalue of the reduced
// (x, px) covariance and the resulting geometric Schmidt spectrum.
struct GaussianOracle {
    double entropy;
    double ratio;  // p_{k+1} / p_k
};

GaussianOracle ground_state_oracle(const ModelParams& p) {
    Eigen::Matrix2d k;
    k << p.omega * p.omega, p.C, p.C, p.Omega * p.Omega;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(k);
    const double w1 = std::sqrt(es.eigenvalues()(0)), w2 = std::sqrt(es.eigenvalues()(1));
    const double a2 = es.eigenvectors()(0, 0) * es.eigenvectors()(0, 0);
    const double b2 = es.eigenvectors()(0, 1) * es.eigenvectors()(0, 1);
    const double x2 = p.hbar * (a2 / (2 * w1) + b2 / (2 * w2));
    const double p2 = p.hbar * (a2 * w1 / 2 + b2 * w2 / 2);
    const double nu = std::sqrt(x2 * p2) / p.hbar;
    const double s = (nu + 0.5) * std::log(nu + 0.5) - (nu - 0.5) * std::log(nu - 0.5);
    return {s, (nu - 0.5) / (nu + 0.5)};
}

std::filesystem::path fresh_dir(const char* name) {
    const auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    return dir;
}

} // namespace

TEST_CASE("hermite functions: special values and parity") {
    CHECK(hermite_function(0, 0.0) == doctest::Approx(std::pow(kPi, -0.25)).epsilon(1e-15));
    CHECK(hermite_function(0, 0.0) == doctest::Approx(0.75112554).epsilon(1e-8));
    for (std::int64_t n : {1, 3, 17, 101}) CHECK(hermite_function(n, 0.0) == 0.0);
    for (std::int64_t n : {2, 5, 40}) {
        for (double xi : {0.3, 1.7, 4.2}) {
            const double sign = n % 2 == 0 ? 1.0 : -1.0;
            CHECK(hermite_function(n, -xi) == doctest::Approx(sign * hermite_function(n, xi)).epsilon(1e-13));
        }
    }
    CHECK_THROWS_AS(hermite_function(-1, 0.0), DomainError);
}

TEST_CASE("hermite functions match the polynomial oracle") {
    for (unsigned n : {0u, 1u, 2u, 7u, 30u, 100u}) {
        for (double xi = -14.0; xi <= 14.0; xi += 0.37) {
            const double want = hermite_oracle(n, xi);
            CHECK(hermite_function(n, xi) == doctest::Approx(want).scale(1e-12).epsilon(1e-10));
        }
    }
}

TEST_CASE("hermite functions are orthonormal under Gauss-Hermite quadrature") {
    // Golub-Welsch nodes. The eigenvector weights lose all relative accuracy in the
    // tails, so the scaled weights w e^{xi^2} come from the Christoffel sum of the oracle.
    const int N = 160;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(N, N);
    for (int k = 1; k < N; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(k / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    std::vector<double> scaled_w(N);
    for (int i = 0; i < N; ++i) {
        double christoffel = 0.0;
        for (unsigned k = 0; k < static_cast<unsigned>(N); ++k) {
            const double h = hermite_oracle(k, es.eigenvalues()(i));
            christoffel += h * h;
        }
        scaled_w[static_cast<std::size_t>(i)] = 1.0 / christoffel;
    }
    auto gh = [&](std::int64_t a, std::int64_t b) {
        double s = 0.0;
        for (int i = 0; i < N; ++i) {
            const double xi = es.eigenvalues()(i);
            s += scaled_w[static_cast<std::size_t>(i)] * hermite_function(a, xi) * hermite_function(b, xi);
        }
        return s;
    };
    CHECK(gh(10, 10) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(gh(100, 100) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(gh(10, 12)) < 1e-10);
    CHECK(std::abs(gh(99, 100)) < 1e-10);
}

TEST_CASE("hermite functions stay finite and normalized at large n") {
    for (std::int64_t n : {1000, 10000}) {
        const double L = std::sqrt(2.0 * n + 1.0) + 12.0;
        const double norm = trapezoid([n](double xi) { return std::pow(hermite_function(n, xi), 2); }, L,
                                      static_cast<std::size_t>(2 * L / 0.005) + 1);
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-8));
    }
    CHECK(std::isfinite(hermite_function(10000, 50.0)));
    CHECK(hermite_function(10000, 50.0) == doctest::Approx(-6.893e-02).epsilon(1e-3));
    CHECK(hermite_function(10000, 500.0) == 0.0);
    CHECK(hermite_function(0, 40.0) == 0.0);  // exp(-800) underflows
}

TEST_CASE("grids") {
    const Grid u = Grid::uniform(2.0, 5);
    CHECK(u.nodes.front() == -2.0);
    CHECK(u.nodes.back() == 2.0);
    CHECK(u.weights.front() == doctest::Approx(0.5));
    CHECK(u.weights[2] == doctest::Approx(1.0));
    double sum = 0.0;
    for (double w : u.weights) sum += w;
    CHECK(sum == doctest::Approx(4.0));
    const Grid a = Grid::arcsine(3.0, 400);
    double sa = 0.0, arc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.weights[i] > 0.0);
        CHECK(std::abs(a.nodes[i]) < 3.0);
        sa += a.weights[i];
        arc += a.weights[i] / std::sqrt(9.0 - a.nodes[i] * a.nodes[i]);
    }
    CHECK(sa == doctest::Approx(6.0).epsilon(1e-4));
    CHECK(arc == doctest::Approx(kPi).epsilon(1e-12));
    CHECK_THROWS_AS(Grid::uniform(1.0, 1), DomainError);
    CHECK_THROWS_AS(Grid::arcsine(0.0, 10), DomainError);
    const KernelGridSpec s{1.0, 2.0, 11, 21};
    CHECK(s.refined(2).Nx == 21);
    CHECK(s.refined(2).Ny == 41);
}

TEST_CASE("default grid covers the turning points") {
    const ModelParams p = reference_params();
    const StateSpec s = StateSpec::from_energies(20.0, 200.0, p);
    const KernelGridSpec g = default_grid_spec(s, p);
    const NormalModes nm = normal_modes(p);
    const double x1t = std::sqrt((2.0 * s.n + 1.0) / nm.omega1);
    CHECK(g.Lx > 1.25 * x1t);
    CHECK(g.Lx == doctest::Approx(13.39).epsilon(1e-3));
    CHECK(g.Ly == doctest::Approx(11.16).epsilon(1e-3));
    CHECK(g.Nx == 242);
    CHECK(g.Ny == 577);
}

TEST_CASE("eigenstate normalization and energy") {
    const ModelParams p = reference_params();
    const NormalModes nm = normal_modes(p);
    const StateSpec s = StateSpec::from_quanta(3, 2, p);
    const auto psi = eigenstate_wavefunction(s, p);
    const double L = 9.0;
    const std::size_t N = 451;
    const double h = 2 * L / (N - 1);
    Eigen::MatrixXd v(N, N);
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) v(i, j) = psi(-L + h * i, -L + h * j);
    }
    // Sixth-order central second derivative.
    const double c[4] = {-49.0 / 18.0, 1.5, -0.15, 1.0 / 90.0};
    double norm = 0.0, energy = 0.0;
    for (std::size_t i = 3; i + 3 < N; ++i) {
        for (std::size_t j = 3; j + 3 < N; ++j) {
            double lap = 2 * c[0] * v(i, j);
            for (int k = 1; k <= 3; ++k) lap += c[k] * (v(i + k, j) + v(i - k, j) + v(i, j + k) + v(i, j - k));
            lap /= h * h;
            const double x = -L + h * i, y = -L + h * j;
            const double V = 0.5 * (p.omega * p.omega * x * x + p.Omega * p.Omega * y * y) + p.C * x * y;
            norm += v(i, j) * v(i, j);
            energy += v(i, j) * (-0.5 * lap + V * v(i, j));
        }
    }
    norm *= h * h;
    energy *= h * h;
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(energy == doctest::Approx(3.5 * nm.omega1 + 2.5 * nm.omega2).epsilon(1e-6));
}

TEST_CASE("decoupled eigenstate is a product") {
    const ModelParams p = make_params(1.0, 2.0, 0.0);
    const auto psi = eigenstate_wavefunction(StateSpec::from_quanta(2, 1, p), p);
    for (double x : {-1.0, 0.2, 1.4}) {
        for (double y : {-0.5, 0.9}) {
            const double want = hermite_function(2, x) * hermite_function(1, std::sqrt(2.0) * y) * std::pow(2.0, 0.25);
            CHECK(psi(x, y) == doctest::Approx(want).epsilon(1e-13));
        }
    }
}

TEST_CASE("decoupled kernel has rank one") {
    const ModelParams p = make_params(1.0, std::sqrt(10.0), 0.0);
    const StateSpec s = StateSpec::from_quanta(6, 9, p);
    const ReducedDensityMatrix rdm = reduced_density_kernel(s, p, default_grid_spec(s, p));
    const SchmidtSpectrum sp = schmidt_spectrum(rdm);
    CHECK(sp.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sp.eigenvalues[1] < 1e-10);
    CHECK(std::abs(sp.entropy) < 1e-8);
    CHECK(rdm.trace() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("reference kernel invariants and symmetries") {
    const ModelParams p = reference_params();
    const StateSpec s = StateSpec::from_energies(20.0, 200.0, p);
    const KernelGridSpec spec = default_grid_spec(s, p);
    const ReducedDensityMatrix rdm = reduced_density_kernel(s, p, spec);
    const auto n = rdm.kernel.rows();
    CHECK(rdm.max_asymmetry() <= 1e-10);
    CHECK(rdm.trace() == doctest::Approx(1.0).epsilon(1e-6));
    double parity = 0.0, scale = rdm.kernel.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) parity = std::max(parity, std::abs(rdm.kernel(i, j) - rdm.kernel(n - 1 - i, n - 1 - j)));
    }
    CHECK(parity <= 1e-10 * scale);
    const SchmidtSpectrum sp = schmidt_spectrum(rdm);
    CHECK(sp.min_raw_eigenvalue >= -1e-8);
    CHECK(sp.trace == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(sp.eigenvalues.front() <= 1.0);
    CHECK(std::is_sorted(sp.eigenvalues.rbegin(), sp.eigenvalues.rend()));
    CHECK(sp.effective_rank() == doctest::Approx(std::exp(sp.entropy)));
    // Regression values of the converged reference spectrum.
    CHECK(sp.entropy == doctest::Approx(1.86981).epsilon(1e-5));
    CHECK(sp.eigenvalues[0] == doctest::Approx(0.3205).epsilon(1e-3));
    CHECK(sp.max_over_median() <= 10.0);
    const EntropyResult vn = von_neumann_entropy(rdm);
    CHECK(vn.value == sp.entropy);
    CHECK(vn.method == EntropyMethod::exact_kernel);
    CHECK(vn.metadata.at("n").get<int>() == 20);

    SUBCASE("grid refinement leaves the entropy unchanged") {
        const ReducedDensityMatrix fine = reduced_density_kernel(s, p, spec.refined(2));
        CHECK(std::abs(schmidt_spectrum(fine).entropy - sp.entropy) <= 1e-8);
    }
}

TEST_CASE("ground-state kernel matches the Gaussian-state oracle") {
    for (double C : {0.5, 0.25}) {
        const ModelParams p = make_params(1.0, 5.0, C);
        const StateSpec s = StateSpec::from_quanta(0, 0, p);
        const SchmidtSpectrum sp = schmidt_spectrum(reduced_density_kernel(s, p, default_grid_spec(s, p)));
        const GaussianOracle o = ground_state_oracle(p);
        CHECK(sp.entropy == doctest::Approx(o.entropy).epsilon(1e-6));
        CHECK(sp.eigenvalues[1] / sp.eigenvalues[0] == doctest::Approx(o.ratio).epsilon(1e-5));
        CHECK(sp.eigenvalues[2] / sp.eigenvalues[1] == doctest::Approx(o.ratio).epsilon(1e-3));
    }
}

TEST_CASE("small-coupling ground-state formula") {
    CHECK(ground_state_entropy_smallC(make_params(1.0, 5.0, 0.0)).value == 0.0);
    const EntropyResult r = ground_state_entropy_smallC(make_params(1.0, 5.0, 0.5));
    CHECK(r.metadata.at("f").get<double>() == doctest::Approx(5.0e-4).epsilon(1e-12));
    CHECK(r.value == doctest::Approx(4.300326208932443e-3).epsilon(1e-12));
    CHECK(r.warnings.empty());
    double prev = 0.0;
    for (double C = 0.2; C <= 4.0; C += 0.2) {
        const EntropyResult e = ground_state_entropy_smallC(make_params(1.0, 5.0, C));
        CHECK(e.value > prev);
        prev = e.value;
    }
    CHECK_FALSE(ground_state_entropy_smallC(make_params(1.0, 1.2, 0.9)).warnings.empty());
}

TEST_CASE("probability helpers") {
    CHECK(binary_entropy(0.5) == doctest::Approx(std::log(2.0)));
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(entropy_of_probabilities({0.25, 0.25, 0.25, 0.25}) == doctest::Approx(std::log(4.0)));
    CHECK(entropy_of_probabilities({1.0, 1e-16}) == 0.0);
    const auto m = arcsine_cell_masses(3.8);
    double total = 0.0;
    for (double v : m) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m.size() == 8);
    CHECK(std::is_sorted(m.rbegin(), m.rend()));
    CHECK(total_variation({0.5, 0.5}, {1.0}) == doctest::Approx(0.5));
    CHECK(total_variation(m, m) == 0.0);
    CHECK_THROWS_AS(arcsine_cell_masses(0.0), DomainError);
}

TEST_CASE("Schmidt spectrum of a synthetic two-level kernel") {
    const Grid g = Grid::uniform(8.0, 401);
    const double f = 0.2;
    ReducedDensityMatrix rdm;
    rdm.grid = g;
    rdm.kernel.resize(401, 401);
    for (int i = 0; i < 401; ++i) {
        for (int j = 0; j < 401; ++j) {
            const double a = g.nodes[i], b = g.nodes[j];
            rdm.kernel(i, j) = (1 - f) * hermite_function(0, a) * hermite_function(0, b) +
                               f * hermite_function(1, a) * hermite_function(1, b);
        }
    }
    const SchmidtSpectrum sp = schmidt_spectrum(rdm);
    CHECK(sp.entropy == doctest::Approx(binary_entropy(f)).epsilon(1e-10));
    CHECK(sp.occupied() == 2);
    CHECK(sp.flatness() == doctest::Approx(4.0).epsilon(1e-9));
    rdm.kernel(200, 200) -= 1.0;
    CHECK_THROWS_AS(schmidt_spectrum(rdm), Error);
}

TEST_CASE("kernel errors") {
    const ModelParams p = reference_params();
    CHECK_THROWS_AS(reduced_density_kernel(StateSpec::from_quanta(201, 0, p), p, {10, 10, 50, 50}), DomainError);
    CHECK_THROWS_AS(reduced_density_kernel(StateSpec::from_quanta(0, 2001, p), p, {10, 10, 50, 50}), DomainError);
    const StateSpec s = StateSpec::from_energies(20.0, 200.0, p);
    KernelGridSpec small = default_grid_spec(s, p);
    small.Lx = 3.0;  // well inside the turning point
    try {
        (void)reduced_density_kernel(s, p, small);
        FAIL("expected GridError");
    } catch (const GridError& e) {
        CHECK(std::string(e.what()).find("Lx") != std::string::npos);
    }
}

TEST_CASE("grid refinement loop") {
    const ModelParams p = reference_params();
    const StateSpec s = StateSpec::from_quanta(4, 10, p);
    int calls = 0;
    const KernelGridSpec start = default_grid_spec(s, p);
    const ConvergedEntropy c = converged_kernel_entropy(
        [&](const KernelGridSpec& g) {
            ++calls;
            return reduced_density_kernel(s, p, g);
        },
        start);
    CHECK(calls == 2);
    CHECK(c.refinement_change <= 1e-3);
    CHECK(c.grid.Nx == start.Nx);
    CHECK(c.result.warnings.empty());
    CHECK(c.result.value == doctest::Approx(c.spectrum.entropy));
}

TEST_CASE("low-excitation two-state reduction") {
    const ModelParams p = make_params(1.0, 10.0, 0.05);
    const StateSpec s = StateSpec::from_quanta(20, 30, p);
    const LowExcitationResult r = low_excitation_entropy(s, p);
    CHECK(r.B == doctest::Approx(2.0 * r.A).epsilon(1e-15));
    CHECK(r.F == doctest::Approx(r.B / r.zeta2).epsilon(1e-15));
    CHECK(r.F_omega2 / r.F_omega4 == doctest::Approx(100.0));
    CHECK(r.entropy.value == doctest::Approx(binary_entropy(r.F)));
    for (double C : {0.2, 0.5, 0.7}) {
        const LowExcitationResult q = low_excitation_entropy(s, make_params(1.0, 10.0, C));
        CHECK(q.B == doctest::Approx(2.0 * q.A).epsilon(1e-15));
    }
    CHECK(low_excitation_entropy(s, make_params(1.0, 10.0, 1e-6)).entropy.value < 1e-9);
    CHECK_THROWS_AS(low_excitation_entropy(s, make_params(1.0, 10.0, 9.0)), RegimeError);
}

TEST_CASE("low-excitation entropy against the exact kernel at small F") {
    // F = 0.05 at these quanta.
    ModelParams p = make_params(1.0, 10.0, 0.0);
    const StateSpec probe = StateSpec::from_quanta(20, 30, make_params(1.0, 10.0, 0.05));
    const double F_per_C2 = low_excitation_entropy(probe, make_params(1.0, 10.0, 0.05)).F / (0.05 * 0.05);
    p.C = std::sqrt(0.05 / F_per_C2);
    const StateSpec s = StateSpec::from_quanta(20, 30, p);
    const LowExcitationResult r = low_excitation_entropy(s, p);
    CHECK(r.F == doctest::Approx(0.05).epsilon(0.01));
    const ConvergedEntropy exact = converged_kernel_entropy(s, p);
    MESSAGE("two-state S = " << r.entropy.value << ", exact kernel S = " << exact.result.value);
    CHECK(std::abs(r.entropy.value - exact.result.value) <= 0.2 * exact.result.value);
}

TEST_CASE("kernel cache round trip and corruption") {
    const ModelParams p = reference_params();
    const StateSpec s = StateSpec::from_quanta(3, 5, p);
    const KernelGridSpec spec = default_grid_spec(s, p);
    const ReducedDensityMatrix rdm = reduced_density_kernel(s, p, spec);
    const std::uint64_t key = KernelCache::key(p, s, spec, "exact");
    CHECK(key != KernelCache::key(p, s, spec.refined(2), "exact"));
    CHECK(key != KernelCache::key(p, s, spec, "wkb"));

    const std::string bytes = serialize_kernel(key, rdm);
    const auto n = rdm.grid.size();
    CHECK(bytes.size() == 24 + 8 * (2 * n + 1 + n * n));
    const ReducedDensityMatrix back = deserialize_kernel(bytes, key);
    CHECK(back.kernel == rdm.kernel);
    CHECK(back.grid.nodes == rdm.grid.nodes);
    CHECK_THROWS_AS(deserialize_kernel(bytes, key + 1), FormatError);
    CHECK_THROWS_AS(deserialize_kernel(bytes.substr(0, bytes.size() - 8), key), FormatError);

    const auto dir = fresh_dir("oscillent_test_cache");
    KernelCache cache(dir);
    CHECK_FALSE(cache.load(key).has_value());
    cache.store(key, rdm, p, "exact");
    const auto loaded = cache.load(key);
    REQUIRE(loaded.has_value());
    CHECK(loaded->kernel == rdm.kernel);

    const auto bin = dir / (hex64(key) + ".bin");
    {
        std::fstream f(bin, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(100);
        f.put('\x7f');
    }
    CHECK_FALSE(cache.load(key).has_value());
    CHECK(cache.invalidated() == 1);
    CHECK_FALSE(std::filesystem::exists(bin));

    const ReducedDensityMatrix first = cached_reduced_density_kernel(&cache, s, p, spec);
    CHECK(std::filesystem::exists(bin));
    const ReducedDensityMatrix second = cached_reduced_density_kernel(&cache, s, p, spec);
    CHECK(second.kernel == first.kernel);
    CHECK(cached_reduced_density_kernel(nullptr, s, p, spec).kernel == first.kernel);
    std::filesystem::remove_all(dir);
}
