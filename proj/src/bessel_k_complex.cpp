// K_a(w) and dK_a/da for real order and Re w > 0 from
//   K_a(w) = 1/2 int_R exp(-w cosh x - a x) dx.
//
// For complex w the integrand oscillates along the real axis, badly so when
// arg w approaches +-pi/2.  The contour is moved to
//   z(x) = x + i c(x),  c(x) = m sech^2((x - x0)/L) - arg(w) tanh((x - x0)/L),
// which passes through the saddle x0 + i m = -asinh(a/w) and tends to
// Im z = -+arg(w) as x -> +-inf, where w e^{+-z} is real and positive.
// L matches the slope of the contour at the saddle to the steepest-descent
// direction.

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Core>

#include "stieltjes/errors.hpp"
#include "stieltjes/specfun.hpp"

namespace stieltjes::specfun {

ScaledBesselK bessel_k_scaled(double a, cdouble w, const quadrature::QuadratureSpec& spec) {
    if (!(w.real() > 0.0) || !std::isfinite(w.real()) || !std::isfinite(w.imag())) {
        throw DomainError("bessel_k_complex: requires Re w > 0");
    }
    if (!std::isfinite(a)) throw DomainError("bessel_k_complex: order must be finite");

    const cdouble saddle = -std::asinh(a / w);
    const cdouble curvature = w * std::cosh(saddle);  // -(second derivative of the exponent)
    const double phi = std::arg(w);
    const double x0 = saddle.real();
    const double m = saddle.imag();

    double width = 1.0;
    if (phi != 0.0) {
        const double slope = std::tan(-0.5 * std::arg(curvature));
        width = (std::abs(slope) > 1e-12) ? -phi / slope : 5.0;
        if (!(width > 0.0)) width = 1.0;
        width = std::clamp(width, 0.05, 5.0);
    }
    const cdouble exponent_at_saddle = -w * std::cosh(saddle) - a * saddle;
    const double shift = exponent_at_saddle.real();

    using Vec3 = Eigen::Vector3cd;
    auto integrand = [&](double x) -> Vec3 {
        const double tau = std::tanh((x - x0) / width);
        const double sech2 = 1.0 - tau * tau;
        const cdouble z(x, m * sech2 - phi * tau);
        const cdouble dz(1.0, -(2.0 * m * tau + phi) * sech2 / width);
        const cdouble g = std::exp(-w * std::cosh(z) - a * z - shift) * dz;
        return Vec3(g, -z * g, cdouble(std::abs(g), 0.0));
    };

    const double step = std::min(0.5, 0.5 / std::sqrt(std::abs(curvature)));
    const auto r = quadrature::integrate(integrand, quadrature::DecayingLine{x0, step}, spec);

    ScaledBesselK out{};
    out.k = 0.5 * r.value(0);
    out.dk_da = 0.5 * r.value(1);
    out.log_scale = shift;
    out.cancellation = 0.5 * r.value(2).real() / std::abs(out.k);
    return out;
}

cdouble bessel_k_complex(double a, cdouble w) {
    const ScaledBesselK s = bessel_k_scaled(a, w);
    return s.k * std::exp(s.log_scale);
}

cdouble dk_da_complex(double a, cdouble w) {
    const ScaledBesselK s = bessel_k_scaled(a, w);
    return s.dk_da * std::exp(s.log_scale);
}

cdouble log_derivative_k(double a, cdouble w) {
    const ScaledBesselK s = bessel_k_scaled(a, w);
    return s.dk_da / s.k;
}

}  // namespace stieltjes::specfun
