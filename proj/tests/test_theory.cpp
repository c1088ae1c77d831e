#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stieltjes/errors.hpp"
#include "stieltjes/jacobi.hpp"
#include "stieltjes/quadrature.hpp"
#include "stieltjes/theory.hpp"

using namespace stieltjes;
using namespace stieltjes::theory;
using cfrac::CutPoint;
using std::numbers::pi;

namespace {

std::vector<double> log_grid(double lo, double hi, int points) {
    std::vector<double> g;
    for (int i = 0; i < points; ++i) g.push_back(lo * std::pow(hi / lo, i / (points - 1.0)));
    return g;
}

}  // namespace

TEST_SUITE("theory") {

TEST_CASE("Lyapunov exponent is real on the positive axis") {
    const auto l = lyapunov_gamma({2, 1}, CutPoint::interior(1.0));
    CHECK(l.path == LyapunovValue::Path::InteriorK);
    CHECK(std::abs(l.value.imag()) <= 1e-9);
    CHECK(l.value.real() > 0.0);
}

TEST_CASE("Lyapunov exponent matches the simulated growth rate") {
    const auto t = CutPoint::interior(1.0);
    const auto g = cfrac::log_growth(coeffs::make_stream(GammaParams{1, 1}, 2, 0), t, 1000000);
    const cdouble l = lyapunov_gamma({1, 1}, t).value;
    CHECK(std::abs(g.value.real() - l.real()) <= 3 * g.se_real);
    CHECK(std::abs(g.value.imag() - l.imag()) <= std::max(3 * g.se_imag, 1e-12));
}

TEST_CASE("interior formula refuses boundary points") {
    CHECK_THROWS_AS(lyapunov_gamma({1, 1}, CutPoint::spectral(1.0)), DomainError);
    CHECK_THROWS_AS(boundary_lyapunov({1, 1}, 0.0), DomainError);
    CHECK_THROWS_AS(integrated_dos({1, 1}, -1.0), DomainError);
    CHECK_THROWS_AS(dos_density({1, 1}, 0.0), DomainError);
}

TEST_CASE("boundary exponent: positive real part, imaginary part in [-pi/2, 0]") {
    for (double a : {1.0, 8.0}) {
        for (double lambda : log_grid(1e-2, 1e2, 1000)) {
            const cdouble l = boundary_lyapunov({a, 1 / a}, lambda).value;
            REQUIRE(l.real() > 0.0);
            REQUIRE(l.imag() <= 0.0);
            REQUIRE(l.imag() >= -pi / 2);
        }
    }
}

TEST_CASE("interior exponents have positive real part") {
    for (double re : {-50.0, -3.0, -0.2, 0.0, 0.5, 4.0}) {
        for (double im : {-10.0, -0.5, 1e-3, 0.7, 20.0}) {
            REQUIRE(lyapunov_gamma({3, 0.5}, CutPoint::interior({re, im})).value.real() > 0.0);
        }
    }
}

TEST_CASE("boundary values are limits of interior values") {
    for (double a : {1.0, 8.0}) {
        for (double lambda : {0.05, 0.5, 2.0, 7.0, 20.0}) {
            const cdouble edge = boundary_lyapunov({a, 1 / a}, lambda).value;
            const cdouble near = lyapunov_gamma({a, 1 / a}, CutPoint::interior({-1 / lambda, 1e-6})).value;
            CHECK(std::abs(edge - near) <= 1e-4);
            const cdouble below = boundary_lyapunov({a, 1 / a}, lambda, CutPoint::Side::Lower).value;
            CHECK(std::abs(below - std::conj(edge)) == 0.0);
        }
    }
}

TEST_CASE("integrated density of states") {
    const GammaParams p{8, 0.125};
    CHECK(integrated_dos(p, 1e3).value > 0.99);
    // Near zero N ~ sqrt(lambda)/pi, so N(1e-3) is about 0.01.  Oracle: the
    // fraction of eigenvalues below 1e-3 over 20 chains of 4000 sites.
    long below = 0;
    long total = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto J = jacobi::build_jacobi(coeffs::make_stream(p, seed, 0).take(8000));
        below += jacobi::sturm_count(J, 1e-3);
        total += J.size();
    }
    const double empirical = static_cast<double>(below) / static_cast<double>(total);
    const double n = integrated_dos(p, 1e-3).value;
    CHECK(std::abs(empirical - n) <= 3 * std::sqrt(n * (1 - n) / static_cast<double>(total)));
    double prev = 0.0;
    for (double lambda : log_grid(1e-2, 1e2, 300)) {
        const auto n = integrated_dos(p, lambda);
        CHECK(n.value >= prev);
        CHECK(n.discrepancy <= 1e-6);
        prev = n.value;
    }
}

TEST_CASE("N approaches the baseline for large a") {
    CHECK(baseline::integrated_dos(2.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(baseline::integrated_dos(5.0) == 1.0);
    double prev = 1.0;
    for (double a : {16.0, 64.0, 256.0}) {
        double worst = 0.0;
        for (double lambda : {0.3, 1.0, 2.0, 3.0, 3.5}) {
            worst = std::max(worst, std::abs(integrated_dos({a, 1 / a}, lambda).value - baseline::integrated_dos(lambda)));
        }
        CHECK(worst < prev);
        prev = worst;
    }
    CHECK(prev <= 1e-3);
}

TEST_CASE("density of states is positive") {
    for (double a : {1.0, 8.0, 64.0}) {
        for (double lambda : log_grid(1e-2, 1e2, 1000)) REQUIRE(dos_density({a, 1 / a}, lambda) > 0.0);
    }
}

TEST_CASE("density integrates to the increment of N") {
    for (double a : {1.0, 8.0}) {
        const GammaParams p{a, 1 / a};
        const auto r = quadrature::integrate([&](double x) { return dos_density(p, x); }, quadrature::Interval{0.1, 20},
                                             {1e-10, 10});
        CHECK(std::abs(r.value - (integrated_dos(p, 20).value - integrated_dos(p, 0.1).value)) <= 1e-6);
    }
}

TEST_CASE("density correction for large a") {
    for (double lambda : {0.5, 1.0, 2.0, 3.0}) {
        const double c = baseline::density_correction(lambda);
        double prev = std::numeric_limits<double>::infinity();
        for (double a : {64.0, 256.0, 1024.0}) {
            const double scaled = a * a * (dos_density({a, 1 / a}, lambda) - baseline::dos_density(lambda).value);
            const double err = std::abs(scaled - c);
            CHECK(err < prev);
            prev = err;
        }
        CHECK(prev <= 2e-3 * std::abs(c));
    }
}

TEST_CASE("Pade rate is minus twice the real exponent") {
    const auto t = CutPoint::interior({1.0, 0.5});
    CHECK(pade_rate({2, 1}, t) == -2.0 * lyapunov_gamma({2, 1}, t).value.real());
    const double limit = -2.0 * std::log(std::numbers::phi);
    CHECK(std::abs(pade_rate({1024, 1.0 / 1024}, CutPoint::interior(1.0)) - limit) <= 1e-3);
}

TEST_CASE("baseline closed forms") {
    CHECK(std::abs(baseline::stieltjes(0.0) - 1.0) <= 1e-15);
    CHECK(std::abs(baseline::lyapunov(1.0) - std::log(std::numbers::phi)) <= 1e-15);
    CHECK(baseline::dos_density(4.0).band_edge);
    CHECK(baseline::dos_density(5.0).value == 0.0);
    CHECK(baseline::dos_density(1.0).value == doctest::Approx(1 / (pi * std::sqrt(3.0))));
    CHECK(baseline::measure_cdf(0.0) == 0.0);
    CHECK(baseline::measure_cdf(4.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("baseline S is the Stieltjes transform of the baseline measure") {
    for (cdouble t : {cdouble(0.3, 0), cdouble(2, 0), cdouble(-0.1, 1), cdouble(5, -5)}) {
        // sigma(dx) = (1/(2 pi)) sqrt(4/x - 1) dx on (0, 4); with x = 4 sin^2 phi
        // this is (4/pi) cos^2 phi dphi on (0, pi/2).
        const auto r = quadrature::integrate(
            [&](double phi) {
                const double c = std::cos(phi);
                const double x = 4.0 * (1.0 - c * c);
                return cdouble(4.0 / pi * c * c) / (1.0 + x * t);
            },
            quadrature::Interval{0.0, pi / 2}, {1e-12, 12});
        CHECK(std::abs(r.value - baseline::stieltjes(t)) <= 1e-10);
        const auto ref = cfrac::reference_value(coeffs::constant_stream(), CutPoint::interior(t), 1e-12);
        CHECK(std::abs(ref.value - baseline::stieltjes(t)) <= 1e-10);
    }
}

TEST_CASE("baseline CDF differentiates to the baseline density") {
    for (double x : {0.2, 1.0, 2.5, 3.9}) {
        const double h = 1e-6;
        const double fd = (baseline::measure_cdf(x + h) - baseline::measure_cdf(x - h)) / (2 * h);
        CHECK(fd == doctest::Approx(std::sqrt(4.0 / x - 1.0) / (2 * pi)).epsilon(1e-7));
    }
}

TEST_CASE("first-order correction to the exponent") {
    const cdouble t = 1.0;
    const double c = baseline::lyapunov_correction(t).real();
    CHECK(c == doctest::Approx(-0.1).epsilon(1e-15));
    CHECK(baseline::lyapunov_correction_printed(t).real() == doctest::Approx(0.9).epsilon(1e-15));
    double prev = std::numeric_limits<double>::infinity();
    for (double a : {64.0, 256.0, 1024.0}) {
        const double scaled = a * (lyapunov_gamma({a, 1 / a}, CutPoint::interior(t)).value - baseline::lyapunov(t)).real();
        const double err = std::abs(scaled - c);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev <= 0.01 * std::abs(c));
    const cdouble tc(0.5, 2.0);
    const cdouble scaled = 512.0 * (lyapunov_gamma({512, 1.0 / 512}, CutPoint::interior(tc)).value - baseline::lyapunov(tc));
    CHECK(std::abs(scaled - baseline::lyapunov_correction(tc)) <= 0.01 * std::abs(baseline::lyapunov_correction(tc)));
}

TEST_CASE("invariant density parameters") {
    const auto ip = invariant_params({2, 0.5}, cdouble(0, 4));
    CHECK(ip.p == 2);
    CHECK(ip.s == doctest::Approx(0.25));
    CHECK(ip.alpha == doctest::Approx(-pi / 4));
    CHECK_THROWS_AS(InvariantDensity({2, 1, pi / 2}), ParameterError);
    CHECK_THROWS_AS(InvariantDensity({0, 1, 0.3}), ParameterError);
    CHECK_THROWS_AS(InvariantDensity({1, 1, 0.0}), ParameterError);
}

TEST_CASE("invariant density: normalization, support and log moments") {
    const InvariantDensity f({2, 1, pi / 6});
    CHECK(std::abs(f.normalization() - 1.0) <= 1e-6);
    CHECK(f(std::polar(1.0, pi / 6 + 0.01)) == 0.0);
    CHECK(f(std::polar(1.0, 0.1)) > 0.0);
    const cdouble m = f.log_moment();
    const cdouble want = f.log_moment_closed_form();
    CHECK(std::abs(m.real() - want.real()) <= 1e-5);
    CHECK(std::abs(m.imag() - want.imag()) <= 1e-5);

    const InvariantDensity g({2, 1, -pi / 6});
    CHECK(std::abs(g.log_moment() - std::conj(m)) <= 1e-10);
    CHECK(g(std::polar(1.0, -0.1)) == doctest::Approx(f(std::polar(1.0, 0.1))).epsilon(1e-14));

    for (const InvariantDensityParams q : {InvariantDensityParams{0.5, 3, 0.2}, InvariantDensityParams{9, 0.2, -1.4}}) {
        const InvariantDensity h(q);
        CHECK(std::abs(h.normalization() - 1.0) <= 1e-6);
        CHECK(std::abs(h.log_moment() - h.log_moment_closed_form()) <= 1e-5);
    }
}

TEST_CASE("forward iterates follow the invariant density") {
    const cdouble t = std::polar(1.0, -pi / 3);
    const GammaParams p{2, 1};
    const InvariantDensity f(invariant_params(p, t));
    const std::size_t n = 20000;
    const auto z = forward_iterates(coeffs::make_stream(p, 77, 0), CutPoint::interior(t), n);
    REQUIRE(z.size() == n);
    std::vector<double> r;
    for (const auto& v : z) {
        CHECK(std::abs(std::arg(v)) <= pi / 6 + 1e-12);
        r.push_back(std::abs(v));
    }
    std::sort(r.begin(), r.end());
    CHECK(ks_statistic(f.radial_cdf(r)) <= 1.63 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("Kolmogorov-Smirnov statistic") {
    CHECK(ks_statistic({0.1, 0.5, 0.9}) == doctest::Approx(0.1 + 1.0 / 3.0 - 0.2));
    CHECK(ks_statistic({0.25, 0.75}) == doctest::Approx(0.25));
}

}
