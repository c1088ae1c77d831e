#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Core>

#include "stieltjes/errors.hpp"
#include "stieltjes/specfun.hpp"

namespace stieltjes::specfun {

namespace {

constexpr double pi = std::numbers::pi;

void require_positive_argument(double z, const char* who) {
    if (!(z > 0.0) || !std::isfinite(z)) throw DomainError(std::string(who) + ": argument must be positive");
}

double wrap_to_pi(double x) {
    return x - 2.0 * pi * std::round(x / (2.0 * pi));
}

}  // namespace

JYOrderDerivatives jy_order_derivatives(double a, double z) {
    require_positive_argument(z, "jy_order_derivatives");
    const BesselJY c = bessel_jy_full(a, z);
    const double h = order_step(a);
    auto jy = [z](double order) {
        const auto [j, y] = bessel_jy(order, z);
        return Eigen::Vector2d(j, y);
    };
    const Eigen::Vector2d d = richardson_derivative(jy, a, h);
    return {c.j, c.y, d(0), d(1)};
}

WatsonModulus watson_modulus(double a, double z, const quadrature::QuadratureSpec& spec) {
    require_positive_argument(z, "watson_modulus");
    const double order = std::abs(a);

    // Integrand peak: d/dt (2 a t - 2 z sinh t) = 0.
    const double peak = (order > z) ? std::acosh(order / z) : 0.0;
    const double shift = 2.0 * order * peak - 2.0 * z * std::sinh(peak);

    // Columns: cosh(2at) K_0(2z sinh t) and 2t sinh(2at) K_0(2z sinh t), both times e^{-shift}.
    auto integrand = [&](double t) -> Eigen::Vector2d {
        const double x = 2.0 * z * std::sinh(t);
        if (!(x > 0.0)) return Eigen::Vector2d::Zero();
        const double e = std::exp(2.0 * order * t - x - shift);
        if (e == 0.0) return Eigen::Vector2d::Zero();
        const double k0 = bessel_k_real_scaled(0.0, x);
        const double decay = std::exp(-4.0 * order * t);
        return Eigen::Vector2d(0.5 * e * k0 * (1.0 + decay), -e * k0 * t * std::expm1(-4.0 * order * t));
    };

    Eigen::Vector2d total;
    if (peak > 0.0) {
        const double width = 1.0 / std::sqrt(2.0 * std::sqrt(order * order - z * z));
        total = quadrature::integrate(integrand, quadrature::Interval{0.0, peak}, spec).value +
                quadrature::integrate(integrand, quadrature::HalfLine{peak, width}, spec).value;
    } else {
        const double scale = 1.0 / (1.0 + 2.0 * (z - order));
        total = quadrature::integrate(integrand, quadrature::HalfLine{0.0, scale}, spec).value;
    }
    WatsonModulus out{};
    out.log_m2 = std::log(8.0 / (pi * pi)) + shift + std::log(total(0));
    out.dlog_m2_da = (a < 0.0 ? -1.0 : 1.0) * total(1) / total(0);
    return out;
}

double bessel_phase(double a, double z) {
    require_positive_argument(z, "bessel_phase");
    const double nu = std::abs(a);
    const auto [j, y] = bessel_jy(nu, z);
    double theta = std::atan2(y, j);
    if (z > nu) {
        // Debye phase; within pi of the true phase for z > nu, which fixes the branch.
        const double debye = std::sqrt(z * z - nu * nu) - nu * std::acos(nu / z) - 0.25 * pi;
        theta += 2.0 * pi * std::round((debye - theta) / (2.0 * pi));
    }
    // J_{-nu} + i Y_{-nu} = e^{i nu pi} (J_nu + i Y_nu)
    if (a < 0.0) theta += nu * pi;
    return theta;
}

JYAux jy_aux(double a, double z) {
    require_positive_argument(z, "jy_aux");
    JYAux out{};
    const auto [j, y] = bessel_jy(a, z);
    out.m2_direct = j * j + y * y;

    const WatsonModulus wm = watson_modulus(a, z);
    out.log_m2 = wm.log_m2;
    out.dlog_m2_da = wm.dlog_m2_da;
    out.m2 = std::exp(wm.log_m2);
    out.dm2_da = out.m2 * wm.dlog_m2_da;

    out.theta = bessel_phase(a, z);
    const double h = order_step(a);
    // Differences of theta are unwrapped so a branch jump between stencil
    // points cannot leak into the derivative.
    auto delta = [&](double step) { return wrap_to_pi(bessel_phase(a + step, z) - bessel_phase(a - step, z)); };
    const double d1 = delta(h) / (2.0 * h);
    const double d2 = delta(0.5 * h) / h;
    out.dtheta_da = (4.0 * d2 - d1) / 3.0;
    return out;
}

}  // namespace stieltjes::specfun
