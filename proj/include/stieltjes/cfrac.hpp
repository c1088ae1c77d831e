#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "stieltjes/coeffs.hpp"

namespace stieltjes::cfrac {

using cdouble = std::complex<double>;

/// A point t of C \ (-inf, 0], or a boundary value t = -x + i0+- on the cut.
class CutPoint {
public:
    enum class Side { Upper, Lower };

    /// Interior point; throws DomainError for t on (-inf, 0] other than t = 0.
    static CutPoint interior(cdouble t);
    /// t = -x + i0+ (Upper) or -x + i0- (Lower); throws DomainError unless x > 0.
    static CutPoint boundary(double x, Side side);
    /// t = -1/lambda + i0+, the point attached to spectral parameter lambda.
    static CutPoint spectral(double lambda) { return boundary(1.0 / lambda, Side::Upper); }

    bool on_cut() const { return on_cut_; }
    Side side() const { return side_; }

    /// The value of t (for boundary points, the real number -x).
    cdouble value() const { return t_; }

    /// sqrt(t) with non-negative real part; on the cut the one-sided limit +-i sqrt(x).
    cdouble sqrt() const { return sqrt_t_; }

private:
    cdouble t_;
    cdouble sqrt_t_;
    bool on_cut_ = false;
    Side side_ = Side::Upper;
};

/// Scaled solutions of u_{n+1} = u_{n-1} + (s_{n+1}/sqrt t) u_n, with
/// Q_n = (sqrt t)^n u_n, together with w_n for P_n = (sqrt t)^n w_n.
///
/// The stored pairs are (u_{n-1}, u_n) e^{-log_scale} and the same for w;
/// both share the scale, so S_n = w_n/u_n needs no rescaling.  log_u is the
/// sum of principal logs of u_k/u_{k-1} since the start plus the principal
/// log of u_0, so its imaginary part is a continuous argument of u_n.
struct LogConvergentState {
    cdouble u_prev;
    cdouble u;
    cdouble w_prev;
    cdouble w;
    cdouble log_scale;
    cdouble log_u;
    std::size_t n = 0;
    cdouble inv_sqrt_t;
    int renormalize_every = 1;

    /// Starts at n = 0 with (u_{-1}, u_0) = (0, 1) and (w_{-1}, w_0) = (1/sqrt t, 0).
    static LogConvergentState start(const CutPoint& t, int renormalize_every = 1);
    /// Custom start pair for the u-sequence; u0 must be nonzero.
    static LogConvergentState start(const CutPoint& t, cdouble u_minus1, cdouble u0, int renormalize_every = 1);

    /// Consumes s_{n+1}.  Returns log(u_{n+1}/u_n) (principal branch).
    cdouble advance(double s_next);

    /// u_n reconstructed from the scaled value (overflows for large n).
    cdouble u_value() const;
    /// S_n = P_n / Q_n.  Throws PoleError when u_n = 0.
    cdouble convergent() const;
};

struct ConvergentResult {
    cdouble value;
    LogConvergentState state;
};

/// S_n(t) for the first n coefficients of `stream` (the stream is copied).
/// Throws ParameterError for n < 1 and PoleError when Q_n(t) = 0.
ConvergentResult convergent_eval(coeffs::CoefficientStream stream, std::size_t n, const CutPoint& t,
                                 int renormalize_every = 1);

/// S_n for an explicit coefficient block s_1..s_n.
cdouble convergent_eval(const Eigen::VectorXd& s, const CutPoint& t);

struct GrowthEstimate {
    cdouble value;       ///< (1/n) sum_{k=1}^n log(u_k/u_{k-1})
    double se_real;      ///< batch-means standard error of the real part
    double se_imag;      ///< batch-means standard error of the imaginary part
    std::size_t steps;
    std::size_t batches;
};

/// Estimate of lim (ln u_n)/n from n steps of the recurrence.
GrowthEstimate log_growth(coeffs::CoefficientStream stream, const CutPoint& t, std::size_t n,
                          std::size_t batches = 100);
GrowthEstimate log_growth(coeffs::CoefficientStream stream, const CutPoint& t, std::size_t n, cdouble u_minus1,
                          cdouble u0, std::size_t batches = 100);

/// ln|S_{n+1} - S_n| for n = 0..n_max, from the determinant identity
/// P_{n+1}Q_n - P_nQ_{n+1} = (-t)^n: -ln|t|/2 - ln|u_n| - ln|u_{n+1}|.
std::vector<double> log_convergent_gaps(coeffs::CoefficientStream stream, const CutPoint& t, std::size_t n_max);

struct RateFit {
    double slope;
    double intercept;
    double slope_se;      ///< standard error allowing for the random-walk residual
    double residual_rms;
    double max_abs_residual;
    std::size_t first;    ///< first n in the fit window
    std::size_t last;     ///< last n in the fit window
};

/// Least-squares slope of ln|S_{n+1} - S_n| against n over the window
/// [max(n_min, max(50, n_max/10)), n_max].  Throws ParameterError unless
/// n_max > n_min >= 1 and the window holds at least 3 points.
RateFit pade_error_rate(coeffs::CoefficientStream stream, const CutPoint& t, std::size_t n_min, std::size_t n_max);

/// Fits a line to y[first..last] (index = n) with the same diagnostics.
RateFit fit_log_gaps(const std::vector<double>& y, std::size_t first, std::size_t last);

/// Taylor coefficients m_0..m_{2n-1} of S_{2n}, where S(t) ~ sum m_j (-t)^j,
/// from positive coefficients s_1..s_{2n}.  Throws ParameterError for an odd
/// or empty block or a non-positive coefficient.
Eigen::VectorXd moments_from_coefficients(const Eigen::VectorXd& s);

struct ReferenceValue {
    cdouble value;
    double error;        ///< certificate: |S - value| <= error (bracket half-width for real t > 0)
    std::size_t terms;
};

/// S(t) to within tol.  Real t > 0: midpoint of the even/odd bracket once its
/// width is <= tol.  Otherwise: S_{n+1} once |S_{n+1} - S_n| <= tol/10.
/// Throws AccuracyError after 10^6 terms.
ReferenceValue reference_value(coeffs::CoefficientStream stream, const CutPoint& t, double tol);

}  // namespace stieltjes::cfrac
