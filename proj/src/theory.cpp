#include "stieltjes/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "stieltjes/errors.hpp"
#include "stieltjes/quadrature.hpp"
#include "stieltjes/specfun.hpp"

namespace stieltjes::theory {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double dos_route_limit = 1e-4;

void require_gamma(const GammaParams& params, const char* who) {
    if (!(params.a > 0.0) || !(params.b > 0.0)) throw ParameterError(std::string(who) + ": need a > 0 and b > 0");
}

void require_positive_lambda(double lambda, const char* who) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError(std::string(who) + ": lambda must be positive");
}

double spectral_argument(const GammaParams& params, double lambda) { return 2.0 / (params.b * std::sqrt(lambda)); }

}  // namespace

LyapunovValue lyapunov_gamma(const GammaParams& params, const cfrac::CutPoint& t) {
    require_gamma(params, "lyapunov_gamma");
    if (t.on_cut()) throw DomainError("lyapunov_gamma: t is on the cut; use boundary_lyapunov");
    if (!(t.sqrt().real() > 0.0)) throw DomainError("lyapunov_gamma: need Re sqrt(t) > 0");
    const cdouble w = 2.0 * t.sqrt() / params.b;
    return {specfun::log_derivative_k(params.a, w), LyapunovValue::Path::InteriorK};
}

LyapunovValue boundary_lyapunov(const GammaParams& params, double lambda, cfrac::CutPoint::Side side) {
    require_gamma(params, "boundary_lyapunov");
    require_positive_lambda(lambda, "boundary_lyapunov");
    const double z = spectral_argument(params, lambda);
    const specfun::JYOrderDerivatives d = specfun::jy_order_derivatives(params.a, z);
    const double m2 = d.j * d.j + d.y * d.y;
    const double re = (d.j * d.dj_da + d.y * d.dy_da) / m2;
    const double im = -0.5 * pi + (d.y * d.dj_da - d.j * d.dy_da) / m2;
    const cdouble value(re, side == cfrac::CutPoint::Side::Upper ? im : -im);
    return {value, LyapunovValue::Path::BoundaryJY};
}

LyapunovValue lyapunov(const GammaParams& params, const cfrac::CutPoint& t) {
    if (t.on_cut()) return boundary_lyapunov(params, -1.0 / t.value().real(), t.side());
    return lyapunov_gamma(params, t);
}

DosValue integrated_dos(const GammaParams& params, double lambda) {
    require_gamma(params, "integrated_dos");
    require_positive_lambda(lambda, "integrated_dos");
    DosValue out{};
    out.value = -(2.0 / pi) * boundary_lyapunov(params, lambda).value.imag();
    const specfun::JYAux aux = specfun::jy_aux(params.a, spectral_argument(params, lambda));
    out.phase_route = 1.0 + (2.0 / pi) * aux.dtheta_da;
    out.discrepancy = std::abs(out.value - out.phase_route);
    if (!(out.discrepancy <= dos_route_limit)) {
        throw ConsistencyError("integrated_dos: routes disagree by " + std::to_string(out.discrepancy) +
                               " at lambda = " + std::to_string(lambda));
    }
    return out;
}

double dos_density(const GammaParams& params, double lambda) {
    require_gamma(params, "dos_density");
    require_positive_lambda(lambda, "dos_density");
    const specfun::WatsonModulus wm = specfun::watson_modulus(params.a, spectral_argument(params, lambda));
    return 2.0 / (pi * pi * lambda) * std::exp(-wm.log_m2) * wm.dlog_m2_da;
}

double pade_rate(const GammaParams& params, const cfrac::CutPoint& t) {
    return -2.0 * lyapunov_gamma(params, t).value.real();
}

namespace baseline {

cdouble stieltjes(cdouble t) { return 2.0 / (1.0 + std::sqrt(1.0 + 4.0 * t)); }

cdouble lyapunov(cdouble t) {
    const cdouble r = 1.0 / std::sqrt(t);
    return std::log(0.5 * (std::sqrt(1.0 / t + 4.0) + r));
}

double integrated_dos(double lambda) {
    require_positive_lambda(lambda, "baseline::integrated_dos");
    if (lambda >= 4.0) return 1.0;
    return 1.0 - (2.0 / pi) * std::acos(0.5 * std::sqrt(lambda));
}

DensityValue dos_density(double lambda) {
    require_positive_lambda(lambda, "baseline::dos_density");
    if (lambda == 4.0) return {std::numeric_limits<double>::infinity(), true};
    if (lambda > 4.0) return {0.0, false};
    return {1.0 / (pi * std::sqrt(lambda * (4.0 - lambda))), false};
}

double measure_cdf(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 4.0) return 1.0;
    const double phi = std::asin(0.5 * std::sqrt(x));
    return (2.0 * phi + std::sin(2.0 * phi)) / pi;
}

cdouble lyapunov_correction_printed(cdouble t) { return (1.0 + 8.0 * t) / (2.0 * (1.0 + 4.0 * t)); }

cdouble lyapunov_correction(cdouble t) { return -1.0 / (2.0 * (1.0 + 4.0 * t)); }

double density_correction(double lambda) {
    if (!(lambda > 0.0 && lambda < 4.0)) throw DomainError("density_correction: needs 0 < lambda < 4");
    const double beta = std::acos(0.5 * std::sqrt(lambda));
    const double c = std::cos(beta);
    const double s = std::sin(beta);
    const double cot2 = (c / s) * (c / s);
    return -c / (32.0 * pi * s * s * s) * (13.0 + 38.0 * cot2 + 25.0 * cot2 * cot2);
}

}  // namespace baseline

InvariantDensityParams invariant_params(const GammaParams& params, cdouble t) {
    return {params.a, params.b / std::sqrt(std::abs(t)), -0.5 * std::arg(t)};
}

InvariantDensity::InvariantDensity(const InvariantDensityParams& params) : params_(params) {
    const double A = std::abs(params.alpha);
    if (!(params.p > 0.0) || !(params.s > 0.0)) throw ParameterError("InvariantDensity: need p > 0 and s > 0");
    if (!(A > 0.0) || !(A < 0.5 * pi)) throw ParameterError("InvariantDensity: need 0 < |alpha| < pi/2");
    const specfun::ScaledBesselK k = specfun::bessel_k_scaled(params.p, std::polar(2.0 / params.s, params.alpha));
    log_prefactor_ = std::log(std::sin(2.0 * A)) - 2.0 * (std::log(2.0 * std::abs(k.k)) + k.log_scale);
}

double InvariantDensity::polar(double r, double theta) const {
    const double A = std::abs(params_.alpha);
    // f_{-alpha}(r, theta) = f_alpha(r, -theta).
    const double th = (params_.alpha < 0.0) ? -theta : theta;
    if (!(r > 0.0) || !(std::abs(th) < A)) return 0.0;
    const double minus = std::sin(A - th);
    const double plus = std::sin(A + th);
    const double c = std::sin(2.0 * A) / params_.s;
    const double log_f = log_prefactor_ - 2.0 * std::log(r) - 2.0 * std::log(plus) +
                         (params_.p - 1.0) * (std::log(minus) - std::log(plus)) - c * (1.0 / (r * minus) + r / plus);
    return std::exp(log_f);
}

double InvariantDensity::operator()(cdouble z) const { return polar(std::abs(z), std::arg(z)); }

namespace {

// Sector integrals of (f, -ln r f, -theta f) with area element r dr dtheta:
// Gauss-Legendre in theta, exp-sinh in r centred on the ridge of f.
Eigen::Vector3d sector_integrals(const InvariantDensity& f) {
    const double A = std::abs(f.params().alpha);
    const auto rule = quadrature::gauss_legendre(InvariantDensity::angular_order, -A, A);
    const quadrature::QuadratureSpec spec{1e-12, 12, 1e-300};
    Eigen::Vector3d total = Eigen::Vector3d::Zero();
    for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
        const double theta = rule.nodes(i);
        const double th = (f.params().alpha < 0.0) ? -theta : theta;
        const double ridge = std::sqrt(std::sin(A + th) / std::sin(A - th));
        auto radial = [&](double r) -> Eigen::Vector2d {
            const double v = f.polar(r, theta) * r;
            return Eigen::Vector2d(v, -std::log(r) * v);
        };
        const Eigen::Vector2d inner = quadrature::integrate(radial, quadrature::HalfLine{0.0, ridge}, spec).value;
        total += rule.weights(i) * Eigen::Vector3d(inner(0), inner(1), -theta * inner(0));
    }
    return total;
}

}  // namespace

double InvariantDensity::normalization() const { return sector_integrals(*this)(0); }

cdouble InvariantDensity::log_moment() const {
    const Eigen::Vector3d v = sector_integrals(*this);
    return {v(1), v(2)};
}

cdouble InvariantDensity::log_moment_closed_form() const {
    return specfun::log_derivative_k(params_.p, std::polar(2.0 / params_.s, -params_.alpha));
}

std::vector<double> InvariantDensity::radial_cdf(const std::vector<double>& radii) const {
    const double A = std::abs(params_.alpha);
    const auto rule = quadrature::gauss_legendre(angular_order, -A, A);
    // Radial marginal in x = ln r: g(x) = r^2 int f(r, theta) dtheta.
    auto marginal = [&](double x) {
        const double r = std::exp(x);
        double acc = 0.0;
        for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) acc += rule.weights(i) * polar(r, rule.nodes(i));
        return acc * r * r;
    };
    constexpr double dx = 2e-3;
    constexpr double x_limit = 60.0;
    // Walk out from ln r = 0 until the marginal is negligible on both sides.
    auto extent = [&](double dir) {
        double peak = 0.0;
        int quiet = 0;
        double x = 0.0;
        for (; std::abs(x) < x_limit; x += dir * dx) {
            const double g = marginal(x);
            peak = std::max(peak, g);
            quiet = (g <= 1e-17 * peak) ? quiet + 1 : 0;
            if (quiet > 50) break;
        }
        return x;
    };
    const double lo = extent(-1.0);
    const double hi = extent(+1.0);
    const auto count = static_cast<std::size_t>(std::ceil((hi - lo) / dx)) + 1;
    std::vector<double> xs(count);
    std::vector<double> cum(count, 0.0);
    double prev = marginal(lo);
    xs[0] = lo;
    for (std::size_t i = 1; i < count; ++i) {
        xs[i] = lo + static_cast<double>(i) * dx;
        const double g = marginal(xs[i]);
        cum[i] = cum[i - 1] + 0.5 * dx * (prev + g);
        prev = g;
    }
    std::vector<double> out;
    out.reserve(radii.size());
    for (double r : radii) {
        const double x = std::log(r);
        if (!(x > lo)) {
            out.push_back(0.0);
        } else if (!(x < xs.back())) {
            out.push_back(cum.back());
        } else {
            const auto i = static_cast<std::size_t>((x - lo) / dx);
            const std::size_t j = std::min(i, count - 2);
            const double frac = (x - xs[j]) / dx;
            out.push_back(cum[j] + frac * (cum[j + 1] - cum[j]));
        }
    }
    return out;
}

std::vector<cdouble> forward_iterates(coeffs::CoefficientStream stream, const cfrac::CutPoint& t, std::size_t count,
                                      std::size_t burn_in, std::size_t thin) {
    if (thin < 1) throw ParameterError("forward_iterates: thin must be >= 1");
    cfrac::LogConvergentState st = cfrac::LogConvergentState::start(t);
    for (std::size_t k = 0; k < burn_in; ++k) st.advance(stream.next());
    std::vector<cdouble> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t k = 0; k < thin; ++k) st.advance(stream.next());
        out.push_back(st.u_prev / st.u);
    }
    return out;
}

double ks_statistic(const std::vector<double>& cdf_at_sorted_sample) {
    const auto n = static_cast<double>(cdf_at_sorted_sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < cdf_at_sorted_sample.size(); ++i) {
        const double f = cdf_at_sorted_sample[i];
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

}  // namespace stieltjes::theory
