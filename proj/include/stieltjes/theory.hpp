#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "stieltjes/cfrac.hpp"
#include "stieltjes/coeffs.hpp"

namespace stieltjes::theory {

using cdouble = std::complex<double>;
using coeffs::GammaParams;

struct LyapunovValue {
    enum class Path { InteriorK, BoundaryJY };
    cdouble value;
    Path path;
};

/// Lambda(t) = d/da ln K_a(2 sqrt(t)/b) for gamma(a, b) coefficients.
/// Interior points only; boundary points throw DomainError (see boundary_lyapunov).
LyapunovValue lyapunov_gamma(const GammaParams& params, const cfrac::CutPoint& t);

/// Lambda(-1/lambda + i0+) from J_a, Y_a and their order derivatives at
/// z = 2/(b sqrt(lambda)):
///   Re = (J dJ + Y dY)/M^2,  Im = -pi/2 + (Y dJ - J dY)/M^2.
/// The lower side i0- is the complex conjugate.  Throws DomainError for lambda <= 0.
LyapunovValue boundary_lyapunov(const GammaParams& params, double lambda,
                                cfrac::CutPoint::Side side = cfrac::CutPoint::Side::Upper);

/// Either of the above, by the kind of t.
LyapunovValue lyapunov(const GammaParams& params, const cfrac::CutPoint& t);

struct DosValue {
    double value;        ///< -(2/pi) Im Lambda(-1/lambda + i0+)
    double phase_route;  ///< 1 + (2/pi) d/da arg(J_a + i Y_a)
    double discrepancy;  ///< |value - phase_route|
};

/// Integrated density of states N(lambda).  Throws ConsistencyError if the
/// two routes differ by more than 1e-4 and DomainError for lambda <= 0.
DosValue integrated_dos(const GammaParams& params, double lambda);

/// rho(lambda) = (2/(pi^2 lambda M^2)) d/da ln M^2 at z = 2/(b sqrt(lambda)),
/// with M^2 and its order derivative from the Watson integral.
double dos_density(const GammaParams& params, double lambda);

/// Asymptotic Pade error rate -2 Re Lambda(t) (interior t).
double pade_rate(const GammaParams& params, const cfrac::CutPoint& t);

/// Closed forms for the constant coefficient stream s_n = 1.
namespace baseline {

/// S(t) = 2/(1 + sqrt(1 + 4t)).
cdouble stieltjes(cdouble t);
/// Lambda(t) = ln((sqrt(1/t + 4) + 1/sqrt(t))/2).
cdouble lyapunov(cdouble t);
/// N(lambda) = 1 - (2/pi) acos(sqrt(lambda)/2) on (0, 4), 1 above.
double integrated_dos(double lambda);

struct DensityValue {
    double value;
    bool band_edge;  ///< lambda == 4, where the density is infinite
};
/// rho(lambda) = 1/(pi sqrt(lambda (4 - lambda))) on (0, 4), 0 above.
DensityValue dos_density(double lambda);

/// Distribution function of sigma(dx) = (1/(2 pi)) sqrt(4/x - 1) dx on (0, 4).
double measure_cdf(double x);

/// Coefficient c in Lambda_a(t) ~ Lambda(t) + c/a for gamma(a, 1/a), as printed:
/// (1 + 8t)/(2(1 + 4t)).
cdouble lyapunov_correction_printed(cdouble t);
/// The coefficient obtained from the Debye expansion of K: -1/(2(1 + 4t)).
cdouble lyapunov_correction(cdouble t);
/// Coefficient c in rho_a ~ rho + c/a^2 for gamma(a, 1/a), beta = acos(sqrt(lambda)/2):
/// -(cos beta/(32 pi sin^3 beta)) (13 + 38 cot^2 beta + 25 cot^4 beta).
double density_correction(double lambda);

}  // namespace baseline

/// Shape p, scale s and half-angle alpha of the stationary law of the
/// forward iterates Z' = 1/(Z + e^{i alpha} x), x ~ gamma(p, s).
struct InvariantDensityParams {
    double p;
    double s;
    double alpha;
};

/// Parameters for gamma(a, b) coefficients at interior t: s = b/sqrt|t|, alpha = -arg(t)/2.
InvariantDensityParams invariant_params(const GammaParams& params, cdouble t);

/// Closed-form stationary density f_alpha on the sector |arg z| < |alpha|
/// (density with respect to area).
class InvariantDensity {
public:
    /// Throws ParameterError unless p > 0, s > 0 and 0 < |alpha| < pi/2.
    explicit InvariantDensity(const InvariantDensityParams& params);

    const InvariantDensityParams& params() const { return params_; }

    double operator()(cdouble z) const;
    double polar(double r, double theta) const;

    /// Integral of f over the sector (should be 1).
    double normalization() const;
    /// -integral of log(z) f: real part uses ln|z|, imaginary part arg z.
    cdouble log_moment() const;
    /// The value those moments should take: d/dp K_p(w)/K_p(w) at w = (2/s) e^{-i alpha}.
    cdouble log_moment_closed_form() const;

    /// P(|Z| <= r) for each r in `radii` (ascending), by cumulative
    /// integration of the radial marginal on a logarithmic grid.
    std::vector<double> radial_cdf(const std::vector<double>& radii) const;

    /// Gauss-Legendre nodes used across the sector.
    static constexpr int angular_order = 96;

private:
    InvariantDensityParams params_;
    double log_prefactor_;
};

/// Forward iterates Z_n = u_{n-1}/u_n of the scaled recurrence after `burn_in`
/// steps, keeping every `thin`-th one.
std::vector<cdouble> forward_iterates(coeffs::CoefficientStream stream, const cfrac::CutPoint& t, std::size_t count,
                                      std::size_t burn_in = 1000, std::size_t thin = 10);

/// Two-sided Kolmogorov-Smirnov statistic from the model CDF evaluated at
/// the sorted sample.
double ks_statistic(const std::vector<double>& cdf_at_sorted_sample);

}  // namespace stieltjes::theory
