#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oscillent/classical_entropy.hpp"
#include "oscillent/errors.hpp"
#include "oscillent/marginal.hpp"
#include "oscillent/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>

using namespace oscillent;

namespace {

constexpr double kPi = std::numbers::pi;

ModelParams reference_params() {
    ModelParams p;
    p.omega = 1.0;
    p.Omega = std::sqrt(10.0);
    p.C = 0.3;
    return p;
}

StateSpec reference_state(const ModelParams& p) { return StateSpec::from_energies(20.0, 200.0, p); }

// Independent oracle for the marginal integrals: adaptive Gauss-Kronrod over theta
// and tanh-sinh over R^2 across the band, using the density formula written out here.
struct Oracle {
    double norm;
    double entropy;
};

Oracle oracle(const StateSpec& s, const ModelParams& p) {
    const double ep = s.E_plus(), em = s.E_minus();
    const double n_const = p.omega * p.Omega / (2.0 * kPi * kPi);
    boost::math::quadrature::tanh_sinh<double> ts;
    auto band_integral = [&](double theta, bool entropy) {
        const double half = 2.0 * p.C / (p.Omega * p.Omega) * std::abs(std::cos(theta)) * std::sqrt(ep * ep - em * em);
        const double x1 = ep - em - half, x2 = ep - em + half;
        if (half <= 0.0) return 0.0;
        const double mid = 0.5 * (x1 + x2);
        // tanh-sinh hands over the exact distance to the nearer endpoint as uc.
        auto f = [&](double u, double uc) {
            const double left = u < mid ? -uc : u - x1;
            const double right = u < mid ? x2 - u : uc;
            const double w = 2.0 * n_const / p.Omega / std::sqrt(left * right);
            const double jac = 1.0 / (2.0 * p.omega);  // dx dpx = dR^2 dtheta / (2 omega)
            return entropy ? -w * std::log(w * p.delta_cell) * jac : w * jac;
        };
        return ts.integrate(f, x1, x2);
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    // Split at the zeros of cos(theta) where the band degenerates.
    auto over_theta = [&](bool entropy) {
        double total = 0.0;
        const double cuts[] = {0.0, kPi / 2, 3 * kPi / 2, 2 * kPi};
        for (int i = 0; i < 3; ++i) {
            total += GK::integrate([&](double t) { return band_integral(t, entropy); }, cuts[i], cuts[i + 1], 12, 1e-11);
        }
        return total;
    };
    return {over_theta(false), over_theta(true)};
}

} // namespace

TEST_CASE("closed form at the reference point") {
    const ModelParams p = reference_params();
    const EntropyResult r = classical_entropy_closed_form(reference_state(p), p);
    CHECK(r.value == doctest::Approx(1.7851968085804322).epsilon(1e-13));
    CHECK(r.metadata.at("argument").get<double>() == doctest::Approx(5.96075295947766).epsilon(1e-12));
    CHECK(r.warnings.empty());
}

TEST_CASE("closed form edge cases") {
    ModelParams p = reference_params();
    p.C = 0.0;
    const EntropyResult zero = classical_entropy_closed_form(reference_state(p), p);
    CHECK(std::isinf(zero.value));
    CHECK(zero.value < 0.0);
    CHECK_FALSE(zero.warnings.empty());
    p.C = 0.001;
    const EntropyResult weak = classical_entropy_closed_form(reference_state(p), p);
    CHECK(weak.value < 0.0);
    CHECK_FALSE(weak.warnings.empty());
}

TEST_CASE("closed form scales with the coupling and the cell") {
    const ModelParams p = reference_params();
    const StateSpec s = reference_state(p);
    const double base = classical_entropy_closed_form(s, p).value;
    for (double lambda : {0.5, 1.5, 3.0}) {
        ModelParams q = p;
        q.C *= lambda;
        CHECK(classical_entropy_closed_form(s, q).value - base == doctest::Approx(std::log(lambda)).epsilon(1e-12));
        ModelParams d = p;
        d.delta_cell *= lambda;
        CHECK(base - classical_entropy_closed_form(s, d).value == doctest::Approx(std::log(lambda)).epsilon(1e-12));
    }
    // The energies enter through sqrt(E1 E2).
    const StateSpec scaled = StateSpec::from_energies(4 * s.E1, s.E2, p);
    CHECK(classical_entropy_closed_form(scaled, p).value - base == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("support band geometry") {
    const ModelParams p = reference_params();
    const StateSpec s = reference_state(p);
    const SupportBand b0 = support_band(0.0, s, p);
    const double half = 2 * 0.3 / 10.0 * std::sqrt(220.0 * 220.0 - 180.0 * 180.0);
    CHECK(b0.midpoint() == doctest::Approx(40.0));
    CHECK(b0.half_width() == doctest::Approx(half));
    CHECK(support_band(kPi / 2, s, p).half_width() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(support_band(kPi, s, p).half_width() == doctest::Approx(half));
    CHECK(support_band(0.7, s, p).X1 == doctest::Approx(support_band(kPi - 0.7, s, p).X1));
    CHECK_THROWS_AS(support_band(0.0, StateSpec{0, 0, 10.0, -30.0}, p), DomainError);
}

TEST_CASE("marginal density support and symmetry") {
    const ModelParams p = reference_params();
    const StateSpec s = reference_state(p);
    const MarginalDensity w(p, s);
    CHECK(w.normalization_constant() == doctest::Approx(std::sqrt(10.0) / (2 * kPi * kPi)));
    // R^2 = 40 sits mid-band for any theta with cos(theta) != 0.
    const double r = std::sqrt(40.0);
    const DensityValue inside = w(r * std::sin(0.3), r * std::cos(0.3));
    CHECK(inside.value > 0.0);
    CHECK_FALSE(inside.on_boundary);
    CHECK(w(0.0, 0.0).value == 0.0);
    CHECK(w(10.0, 10.0).value == 0.0);
    for (double x : {-1.3, 0.4, 2.0}) {
        for (double px : {-6.0, 3.5, 5.9}) {
            const double v = w(x, px).value;
            CHECK(w(-x, px).value == doctest::Approx(v));
            CHECK(w(x, -px).value == doctest::Approx(v));
            CHECK(w(-x, -px).value == doctest::Approx(v));
        }
    }
    // Exactly on an edge the density is tagged rather than returned as a number.
    const SupportBand b0 = support_band(0.0, s, p);
    const DensityValue edge = w(0.0, std::sqrt(b0.X2));
    CHECK((edge.on_boundary || edge.value == 0.0 || edge.value > 1.0));
}

TEST_CASE("pre-polar form is positive on its support and even") {
    const ModelParams p = reference_params();
    const StateSpec s = reference_state(p);
    const MarginalDensity w(p, s, MarginalMode::pre_polar);
    CHECK(w(0.5, 0.0).value == 0.0);
    int positive = 0;
    for (double x = -6.0; x <= 6.0; x += 0.25) {
        for (double px = -7.0; px <= 7.0; px += 0.25) {
            const DensityValue v = w(x, px);
            if (v.on_boundary) continue;
            CHECK(v.value >= 0.0);
            CHECK(std::isfinite(v.value));
            CHECK(w(-x, -px).value == doctest::Approx(v.value));
            if (v.value > 0.0) ++positive;
        }
    }
    CHECK(positive > 0);
}

TEST_CASE("quadrature normalization and entropy against an independent oracle") {
    const ModelParams p = reference_params();
    const StateSpec s = reference_state(p);
    const Oracle o = oracle(s, p);
    CHECK(o.norm == doctest::Approx(1.0).epsilon(1e-8));
    const QuadratureEstimate norm = marginal_normalization(s, p);
    CHECK(norm.value == doctest::Approx(1.0).epsilon(1e-8));
    const EntropyResult q = classical_entropy_quadrature(s, p);
    CHECK(q.value == doctest::Approx(o.entropy).epsilon(1e-6));
    CHECK(q.uncertainty < 1e-6);
}

TEST_CASE("quadrature agrees with the closed form at the reference point") {
    const ModelParams p = reference_params();
    const StateSpec s = reference_state(p);
    const double q = classical_entropy_quadrature(s, p).value;
    const double c = classical_entropy_closed_form(s, p).value;
    CHECK(std::abs(q - c) <= 1e-3);
}

TEST_CASE("quadrature shifts exactly with the cell and the coupling") {
    const ModelParams p = reference_params();
    const StateSpec s = reference_state(p);
    PolarQuadratureOptions opt;
    opt.base_nodes = 128;
    const double base = classical_entropy_quadrature(s, p, opt).value;
    ModelParams d = p;
    d.delta_cell = 2.0 * kPi;
    CHECK(base - classical_entropy_quadrature(s, d, opt).value == doctest::Approx(std::log(2.0)).epsilon(1e-9));
    ModelParams c = p;
    c.C = 0.15;
    CHECK(base - classical_entropy_quadrature(s, c, opt).value == doctest::Approx(std::log(2.0)).epsilon(1e-6));
}

TEST_CASE("quadrature building blocks") {
    const auto cg = chebyshev_gauss_nodes(8);
    REQUIRE(cg.size() == 8);
    double sum = 0.0;
    for (double u : cg) sum += u * u;
    CHECK(sum * kPi / 8 == doctest::Approx(kPi / 2).epsilon(1e-14));  // int u^2/sqrt(1-u^2) = pi/2
    const auto mid = midpoint_nodes(0.0, 1.0, 4);
    CHECK(mid.front() == doctest::Approx(0.125));
    CHECK(mid.back() == doctest::Approx(0.875));
    // A pure 1/N error is removed exactly; a 1/N^2 remainder shrinks to -b/(8 N0^2).
    const QuadratureEstimate e =
        richardson_1_over_n([](std::size_t n) { return 2.0 + 3.0 / static_cast<double>(n); }, 16);
    CHECK(e.value == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(e.error == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
    const QuadratureEstimate e2 =
        richardson_1_over_n([](std::size_t n) { return 2.0 + 5.0 / (double(n) * double(n)); }, 16);
    CHECK(e2.value == doctest::Approx(2.0 - 5.0 / (8.0 * 256.0)).epsilon(1e-14));
}
