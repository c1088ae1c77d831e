#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <type_traits>
#include <utility>

#include "stieltjes/quadrature.hpp"

namespace stieltjes::specfun {

using cdouble = std::complex<double>;

/// J_a(z), Y_a(z) and their z-derivatives.
struct BesselJY {
    double j;
    double y;
    double jp;
    double yp;
};

/// Bessel functions of the first and second kind for real order a and z > 0.
///
/// Temme series for z < 2, Steed's continued fraction otherwise, with
/// downward recurrence for J and upward recurrence for Y from the reduced
/// order.  Negative orders use the reflection formulae.
BesselJY bessel_jy_full(double a, double z);

/// (J_a(z), Y_a(z)).  Throws DomainError for z <= 0.
std::pair<double, double> bessel_jy(double a, double z);

/// Modified Bessel K_a(x) for real a and x > 0.
double bessel_k_real(double a, double x);

/// e^x K_a(x); finite for large x where K_a itself underflows.
double bessel_k_real_scaled(double a, double x);

/// K_a(w) and dK_a/da(w) with a common scale factor:
/// K = k * exp(log_scale), dK/da = dk_da * exp(log_scale).
struct ScaledBesselK {
    cdouble k;
    cdouble dk_da;
    double log_scale;
    /// (integral of |integrand|) / |K|; near 1 means no cancellation on the contour.
    double cancellation;
};

/// Evaluates K_a(w) = 1/2 int exp(-w cosh z - a z) dz and its order
/// derivative -1/2 int z exp(-w cosh z - a z) dz on a contour through the
/// saddle point.  Requires Re w > 0 (DomainError otherwise).
ScaledBesselK bessel_k_scaled(double a, cdouble w, const quadrature::QuadratureSpec& spec = {1e-13, 14});

/// K_a(w) for Re w > 0.
cdouble bessel_k_complex(double a, cdouble w);

/// dK_a(w)/da for Re w > 0, from the integral representation.
cdouble dk_da_complex(double a, cdouble w);

/// d/da ln K_a(w).  Scale-free, so valid where K_a(w) under/overflows.
cdouble log_derivative_k(double a, cdouble w);

/// Order derivatives of J and Y by Richardson-extrapolated central
/// differences, step h = 1e-4 max(1, |a|).
struct JYOrderDerivatives {
    double j;
    double y;
    double dj_da;
    double dy_da;
};

JYOrderDerivatives jy_order_derivatives(double a, double z);

/// ln M^2 and d/da ln M^2 for M^2 = J_a^2 + Y_a^2, from the Nicholson-Watson
/// integral (8/pi^2) int_0^inf K_0(2z sinh t) cosh(2at) dt.
struct WatsonModulus {
    double log_m2;
    double dlog_m2_da;
};

WatsonModulus watson_modulus(double a, double z, const quadrature::QuadratureSpec& spec = {1e-13, 10});

/// Continuous phase theta of J_a(z) + i Y_a(z): increasing in z, tends to
/// -pi/2 as z -> 0+ and to z - (a/2 + 1/4) pi as z -> inf.
double bessel_phase(double a, double z);

/// Amplitude/phase data at (a, z).
struct JYAux {
    double m2;         ///< J^2 + Y^2 via the Watson integral
    double m2_direct;  ///< J^2 + Y^2 from the J, Y evaluations
    double dm2_da;     ///< order derivative of M^2 via the Watson integral
    double log_m2;
    double dlog_m2_da;
    double theta;      ///< continuous arg(J + iY)
    double dtheta_da;  ///< Richardson central difference of theta in a
};

JYAux jy_aux(double a, double z);

/// Step used for order derivatives at order a.
inline double order_step(double a) { return 1e-4 * std::max(1.0, std::abs(a)); }

/// Richardson-extrapolated central difference of f at a with step h.
template <class F>
auto richardson_derivative(F&& f, double a, double h) {
    // Explicit value type: Eigen expressions must not outlive their operands.
    using R = std::decay_t<decltype(f(a))>;
    const R d1 = (f(a + h) - f(a - h)) / (2.0 * h);
    const R d2 = (f(a + 0.5 * h) - f(a - 0.5 * h)) / h;
    return R((4.0 * d2 - d1) / 3.0);
}

}  // namespace stieltjes::specfun
