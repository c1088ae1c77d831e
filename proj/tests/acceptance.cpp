// Acceptance suite: one PASS/FAIL line per criterion.  Exits non-zero if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>
#include <unistd.h>

#include "stieltjes/cfrac.hpp"
#include "stieltjes/cli.hpp"
#include "stieltjes/jacobi.hpp"
#include "stieltjes/quadrature.hpp"
#include "stieltjes/specfun.hpp"
#include "stieltjes/theory.hpp"

using namespace stieltjes;
using cfrac::CutPoint;
using cfrac::cdouble;
using coeffs::GammaParams;
using std::numbers::pi;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

Verdict baseline_eigenvalues() {
    double worst = 0.0;
    double solve_512 = 0.0;
    for (int n : {1, 2, 64, 512}) {
        const auto start = Clock::now();
        const Eigen::VectorXd x = jacobi::eigenvalues(jacobi::build_jacobi(Eigen::VectorXd::Ones(2 * n)));
        if (n == 512) solve_512 = seconds_since(start);
        for (int j = 1; j <= n; ++j) {
            const double c = std::cos(j * pi / (2.0 * n + 1.0));
            worst = std::max(worst, std::abs(x(n - j) - 4 * c * c) / (4 * c * c));
        }
    }
    return {worst <= 1e-10 && solve_512 <= 1.0,
            fmt("max relative error %.3g (limit 1e-10), n=512 solve %.3f s (limit 1 s)", worst, solve_512)};
}

Verdict counting_measure_convergence() {
    cli::ExperimentConfig c;
    c.experiment = cli::Experiment::Dos;
    c.a = 8;
    c.b = 0.125;
    c.n = 256;
    c.lambda_min = 0.05;
    c.lambda_max = 20;
    c.lambda_points = 200;
    c.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    c.tolerance = 0.06;
    c.out = (std::filesystem::temp_directory_path() / ("stieltjes_acceptance_" + std::to_string(::getpid()))).string();
    const auto start = Clock::now();
    const auto report = cli::run(c);
    const double elapsed = seconds_since(start);
    std::filesystem::remove_all(c.out);
    const auto& check = report.checks.at(0);
    return {check.pass && elapsed <= 60.0,
            fmt("median sup|N_n - N| %.4f (limit 0.06), runtime %.2f s (limit 60 s)", check.observed, elapsed)};
}

Verdict lyapunov_cross_check() {
    struct Point {
        GammaParams p;
        cdouble t;
    };
    const Point points[] = {{{1, 1}, 1.0}, {{2, 1}, {1, 1}}, {{8, 0.125}, 0.3}};
    bool pass = true;
    std::string detail;
    for (const auto& pt : points) {
        const auto t = CutPoint::interior(pt.t);
        const auto g = cfrac::log_growth(coeffs::make_stream(pt.p, 1, 0), t, 1000000);
        const cdouble l = theory::lyapunov_gamma(pt.p, t).value;
        const double dr = std::abs(g.value.real() - l.real());
        const double di = std::abs(g.value.imag() - l.imag());
        const bool ok = dr <= 3 * g.se_real && di <= 3 * g.se_imag;
        pass = pass && ok;
        detail += fmt("(a=%g,t=%g%+gi): |dRe| %.2g <= %.2g, |dIm| %.2g <= %.2g; ", pt.p.a, pt.t.real(), pt.t.imag(), dr,
                      3 * g.se_real, di, 3 * g.se_imag);
    }
    return {pass, detail};
}

Verdict pade_rate() {
    const GammaParams p{2, 1};
    const auto t = CutPoint::interior(1.0);
    const double predicted = theory::pade_rate(p, t);
    double mean = 0.0;
    std::string slopes;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto fit = cfrac::pade_error_rate(coeffs::make_stream(p, seed, 0), t, 1000, 10000);
        mean += fit.slope / 5.0;
        slopes += fmt("%.4f ", fit.slope);
    }
    const double rel = std::abs(mean - predicted) / std::abs(predicted);
    return {rel <= 0.01, fmt("mean slope %.5f vs %.5f, relative %.4f (limit 0.01); per seed %s", mean, predicted, rel,
                             slopes.c_str())};
}

Verdict quadrature_exactness() {
    double worst_moment = 0.0;
    double worst_mass = 0.0;
    for (int n = 1; n <= 20; ++n) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const GammaParams p{0.5 + seed, 1.0 / (0.5 + seed)};
            const Eigen::VectorXd s = coeffs::make_stream(p, seed, static_cast<std::uint64_t>(n)).take(2 * n);
            const auto m = jacobi::quadrature_measure(jacobi::build_jacobi(s));
            const Eigen::VectorXd exact = cfrac::moments_from_coefficients(s);
            for (int k = 0; k < 2 * n; ++k) worst_moment = std::max(worst_moment, std::abs(m.moment(k) - exact(k)) / exact(k));
            worst_mass = std::max(worst_mass, std::abs(m.total_mass() - 1.0 / s(0)) * s(0));
        }
    }
    return {worst_moment <= 1e-8 && worst_mass <= 1e-10,
            fmt("max relative moment error %.3g (limit 1e-8), mass error %.3g (limit 1e-10)", worst_moment, worst_mass)};
}

Verdict dos_self_consistency() {
    double worst_route = 0.0;
    double worst_integral = 0.0;
    double min_rho = INFINITY;
    for (double a : {1.0, 8.0, 64.0}) {
        const GammaParams p{a, 1 / a};
        for (int i = 0; i < 1000; ++i) {
            const double lambda = 1e-2 * std::pow(1e4, i / 999.0);
            worst_route = std::max(worst_route, theory::integrated_dos(p, lambda).discrepancy);
            min_rho = std::min(min_rho, theory::dos_density(p, lambda));
        }
        const auto r = quadrature::integrate([&](double x) { return theory::dos_density(p, x); },
                                             quadrature::Interval{0.1, 20}, {1e-10, 10});
        const double dn = theory::integrated_dos(p, 20).value - theory::integrated_dos(p, 0.1).value;
        worst_integral = std::max(worst_integral, std::abs(r.value - dn));
    }
    return {worst_route <= 1e-6 && worst_integral <= 1e-6 && min_rho > 0.0,
            fmt("route difference %.3g (limit 1e-6), |int rho - dN| %.3g (limit 1e-6), min rho %.3g (> 0)", worst_route,
                worst_integral, min_rho)};
}

Verdict invariant_density() {
    const theory::InvariantDensity f({2, 1, pi / 6});
    const double norm = std::abs(f.normalization() - 1.0);
    const cdouble m = f.log_moment();
    const cdouble want = f.log_moment_closed_form();
    const double dre = std::abs(m.real() - want.real());
    const double dim = std::abs(m.imag() - want.imag());

    // alpha = -arg(t)/2 = pi/6 and s = b/sqrt|t| = 1.
    const cdouble t = std::polar(1.0, -pi / 3);
    const std::size_t n = 100000;
    const auto z = theory::forward_iterates(coeffs::make_stream(GammaParams{2, 1}, 1, 0), CutPoint::interior(t), n);
    std::vector<double> r(z.size());
    std::transform(z.begin(), z.end(), r.begin(), [](cdouble v) { return std::abs(v); });
    std::sort(r.begin(), r.end());
    const double ks = theory::ks_statistic(f.radial_cdf(r));
    const double ks_limit = 1.63 / std::sqrt(static_cast<double>(n));
    return {norm <= 1e-6 && dre <= 1e-5 && dim <= 1e-5 && ks <= ks_limit,
            fmt("normalization error %.3g (limit 1e-6), moment errors %.3g / %.3g (limit 1e-5), KS %.5f (limit %.5f)",
                norm, dre, dim, ks, ks_limit)};
}

Verdict large_a_expansion() {
    const double target = theory::baseline::lyapunov_correction_printed(1.0).real();
    double err[3];
    double scaled[3];
    const double orders[] = {64, 256, 1024};
    for (int i = 0; i < 3; ++i) {
        const double a = orders[i];
        const cdouble l = theory::lyapunov_gamma({a, 1 / a}, CutPoint::interior(1.0)).value;
        scaled[i] = a * (l - theory::baseline::lyapunov(1.0)).real();
        err[i] = std::abs(scaled[i] - target);
    }
    const bool within = err[1] <= 0.05 * std::abs(target);
    const bool shrinking = err[1] < err[0] && err[2] < err[1];
    return {within && shrinking,
            fmt("a(Lambda - Lambda_inf) at t=1: %.5f (a=64), %.5f (a=256), %.5f (a=1024) vs %.3f; "
                "relative error at a=256 %.3f (limit 0.05)",
                scaled[0], scaled[1], scaled[2], target, err[1] / std::abs(target))};
}

Verdict special_functions() {
    using namespace specfun;
    double wronskian = 0.0;
    for (double a : {0.5, 2.0, 8.0, 32.0}) {
        for (double z = 0.05; z <= 50.0; z *= 1.1) {
            const auto b = bessel_jy_full(a, z);
            wronskian = std::max(wronskian, std::abs(b.j * b.yp - b.y * b.jp - 2 / (pi * z)) * (pi * z / 2));
        }
    }
    double evenness = 0.0;
    double dk = 0.0;
    for (double a : {0.3, 0.7, 2.0, 9.0, 30.0, 64.0}) {
        for (cdouble w : {cdouble(0.01, 0), cdouble(2, 1), cdouble(0.5, -8), cdouble(30, 40), cdouble(100, 0)}) {
            const cdouble k = bessel_k_complex(a, w);
            evenness = std::max(evenness, std::abs(k - bessel_k_complex(-a, w)) / std::abs(k));
            const double h = 1e-5;
            const cdouble fd = (bessel_k_complex(a + h, w) - bessel_k_complex(a - h, w)) / (2 * h);
            dk = std::max(dk, std::abs(dk_da_complex(a, w) - fd) / std::abs(fd));
        }
    }
    double two_path = 0.0;
    for (double a = 0.5; a <= 64.0; a *= 1.6) {
        for (double z = 0.1; z <= 50.0; z *= 1.5) {
            const auto aux = jy_aux(a, z);
            two_path = std::max(two_path, std::abs(aux.m2 - aux.m2_direct) / aux.m2_direct);
        }
    }
    return {wronskian <= 1e-9 && evenness <= 1e-10 && two_path <= 1e-8 && dk <= 1e-7,
            fmt("Wronskian %.3g (1e-9), evenness %.3g (1e-10), two-path M^2 %.3g (1e-8), dK/da vs differences %.3g "
                "(1e-7)",
                wronskian, evenness, two_path, dk)};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Verdict()>> criteria[] = {
        {"baseline eigenvalues", baseline_eigenvalues},
        {"counting measure vs closed-form N", counting_measure_convergence},
        {"Lyapunov exponent vs simulation", lyapunov_cross_check},
        {"Pade error rate", pade_rate},
        {"Gaussian quadrature exactness", quadrature_exactness},
        {"density of states self-consistency", dos_self_consistency},
        {"invariant density", invariant_density},
        {"large-a expansion of the exponent", large_a_expansion},
        {"special-function checks", special_functions},
    };
    int failures = 0;
    int index = 0;
    for (const auto& [name, criterion] : criteria) {
        ++index;
        Verdict v;
        try {
            v = criterion();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failures += !v.pass;
        std::printf("%s %d %s: %s\n", v.pass ? "PASS" : "FAIL", index, name, v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %d criteria passed\n", index - failures, index);
    return failures == 0 ? 0 : 1;
}
