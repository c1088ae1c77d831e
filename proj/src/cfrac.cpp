#include "stieltjes/cfrac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "stieltjes/errors.hpp"

namespace stieltjes::cfrac {

namespace {

constexpr std::size_t reference_max_terms = 1'000'000;

bool is_zero(cdouble z) { return z.real() == 0.0 && z.imag() == 0.0; }

// Standard error of the mean of equally sized batch means.
double batch_se(const std::vector<double>& means) {
    const std::size_t b = means.size();
    if (b < 2) return std::numeric_limits<double>::infinity();
    double mean = 0.0;
    for (double m : means) mean += m;
    mean /= static_cast<double>(b);
    double ss = 0.0;
    for (double m : means) ss += (m - mean) * (m - mean);
    return std::sqrt(ss / static_cast<double>(b - 1) / static_cast<double>(b));
}

}  // namespace

CutPoint CutPoint::interior(cdouble t) {
    if (!std::isfinite(t.real()) || !std::isfinite(t.imag())) throw DomainError("CutPoint: t must be finite");
    if (t.imag() == 0.0 && t.real() < 0.0) {
        throw DomainError("CutPoint: t lies on the cut (-inf, 0); use CutPoint::boundary");
    }
    CutPoint p;
    p.t_ = t;
    p.sqrt_t_ = std::sqrt(t);
    return p;
}

CutPoint CutPoint::boundary(double x, Side side) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("CutPoint: boundary point needs x > 0");
    CutPoint p;
    p.t_ = cdouble(-x, 0.0);
    p.sqrt_t_ = cdouble(0.0, side == Side::Upper ? std::sqrt(x) : -std::sqrt(x));
    p.on_cut_ = true;
    p.side_ = side;
    return p;
}

LogConvergentState LogConvergentState::start(const CutPoint& t, int renormalize_every) {
    return start(t, 0.0, 1.0, renormalize_every);
}

LogConvergentState LogConvergentState::start(const CutPoint& t, cdouble u_minus1, cdouble u0, int renormalize_every) {
    if (is_zero(t.sqrt())) throw DomainError("LogConvergentState: t = 0 has no scaled recurrence");
    if (is_zero(u0)) throw ParameterError("LogConvergentState: u_0 must be nonzero");
    if (renormalize_every < 1) throw ParameterError("LogConvergentState: renormalize_every must be >= 1");
    LogConvergentState st;
    st.inv_sqrt_t = 1.0 / t.sqrt();
    st.u_prev = u_minus1;
    st.u = u0;
    st.w_prev = st.inv_sqrt_t;
    st.w = 0.0;
    st.log_scale = 0.0;
    st.log_u = std::log(u0);
    st.renormalize_every = renormalize_every;
    return st;
}

cdouble LogConvergentState::advance(double s_next) {
    const cdouble c = s_next * inv_sqrt_t;
    const cdouble u_next = u_prev + c * u;
    const cdouble w_next = w_prev + c * w;

    cdouble increment(std::numeric_limits<double>::quiet_NaN(), 0.0);
    if (!is_zero(u) && !is_zero(u_next)) increment = std::log(u_next / u);

    u_prev = u;
    u = u_next;
    w_prev = w;
    w = w_next;
    ++n;

    // After an exact zero the continuous argument restarts from the principal value.
    if (std::isfinite(increment.real())) log_u += increment;
    else log_u = log_scale + std::log(u);

    if (n % static_cast<std::size_t>(renormalize_every) == 0) {
        if (!is_zero(u)) {
            u_prev /= u;
            w_prev /= u;
            w /= u;
            u = 1.0;
            log_scale = log_u;
        } else {
            const cdouble pivot = u_prev;
            u_prev = 1.0;
            w_prev /= pivot;
            w /= pivot;
            log_scale += std::log(pivot);
        }
    }
    return increment;
}

cdouble LogConvergentState::u_value() const { return std::exp(log_scale) * u; }

cdouble LogConvergentState::convergent() const {
    if (is_zero(u)) throw PoleError("convergent: Q_n vanishes at n = " + std::to_string(n), n);
    return w / u;
}

ConvergentResult convergent_eval(coeffs::CoefficientStream stream, std::size_t n, const CutPoint& t,
                                 int renormalize_every) {
    if (n < 1) throw ParameterError("convergent_eval: n must be >= 1");
    if (is_zero(t.value())) {
        // S_n(0) = 1/s_1 for every n.
        const double s1 = stream.next();
        return {cdouble(1.0 / s1, 0.0), LogConvergentState{}};
    }
    LogConvergentState st = LogConvergentState::start(t, renormalize_every);
    for (std::size_t k = 0; k < n; ++k) st.advance(stream.next());
    return {st.convergent(), st};
}

cdouble convergent_eval(const Eigen::VectorXd& s, const CutPoint& t) {
    if (s.size() < 1) throw ParameterError("convergent_eval: need at least one coefficient");
    if (is_zero(t.value())) return 1.0 / s(0);
    LogConvergentState st = LogConvergentState::start(t);
    for (Eigen::Index k = 0; k < s.size(); ++k) st.advance(s(k));
    return st.convergent();
}

GrowthEstimate log_growth(coeffs::CoefficientStream stream, const CutPoint& t, std::size_t n, std::size_t batches) {
    return log_growth(std::move(stream), t, n, 0.0, 1.0, batches);
}

GrowthEstimate log_growth(coeffs::CoefficientStream stream, const CutPoint& t, std::size_t n, cdouble u_minus1,
                          cdouble u0, std::size_t batches) {
    if (n < 1) throw ParameterError("log_growth: n must be >= 1");
    if (batches < 1) throw ParameterError("log_growth: batches must be >= 1");
    LogConvergentState st = LogConvergentState::start(t, u_minus1, u0);
    const cdouble log_u0 = st.log_u;

    const std::size_t b = std::min(batches, n);
    const std::size_t len = n / b;
    std::vector<double> re_means;
    std::vector<double> im_means;
    re_means.reserve(b);
    im_means.reserve(b);
    cdouble batch_sum = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        const cdouble inc = st.advance(stream.next());
        if (k <= b * len) {
            batch_sum += inc;
            if (k % len == 0) {
                re_means.push_back(batch_sum.real() / static_cast<double>(len));
                im_means.push_back(batch_sum.imag() / static_cast<double>(len));
                batch_sum = 0.0;
            }
        }
    }

    GrowthEstimate out{};
    out.value = (st.log_u - log_u0) / static_cast<double>(n);
    out.se_real = batch_se(re_means);
    out.se_imag = batch_se(im_means);
    out.steps = n;
    out.batches = b;
    return out;
}

std::vector<double> log_convergent_gaps(coeffs::CoefficientStream stream, const CutPoint& t, std::size_t n_max) {
    LogConvergentState st = LogConvergentState::start(t);
    const double half_log_abs_t = 0.5 * std::log(std::abs(t.value()));
    std::vector<double> gaps(n_max + 1);
    double log_abs_u = st.log_u.real();
    for (std::size_t n = 0; n <= n_max; ++n) {
        st.advance(stream.next());
        const double next = st.log_u.real();
        gaps[n] = -half_log_abs_t - log_abs_u - next;
        log_abs_u = next;
    }
    return gaps;
}

RateFit fit_log_gaps(const std::vector<double>& y, std::size_t first, std::size_t last) {
    if (last >= y.size() || last < first || last - first + 1 < 3) {
        throw ParameterError("pade_error_rate: fit window needs at least 3 points");
    }
    const std::size_t count = last - first + 1;
    const double m = static_cast<double>(count);
    const double xbar = 0.5 * static_cast<double>(first + last);
    double ybar = 0.0;
    for (std::size_t n = first; n <= last; ++n) ybar += y[n];
    ybar /= m;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t n = first; n <= last; ++n) {
        const double dx = static_cast<double>(n) - xbar;
        sxx += dx * dx;
        sxy += dx * (y[n] - ybar);
    }

    RateFit fit{};
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;
    fit.first = first;
    fit.last = last;
    double ss = 0.0;
    for (std::size_t n = first; n <= last; ++n) {
        const double r = y[n] - (fit.intercept + fit.slope * static_cast<double>(n));
        ss += r * r;
        fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(r));
    }
    fit.residual_rms = std::sqrt(ss / m);

    // The residual is a random walk, so the textbook OLS error is wrong.
    // slope = sum_k C_k dy_k with C_k = sum_{n >= k} c_n and dy_k = y_k - y_{k-1};
    // the long-run variance of dy comes from batch means.
    const std::size_t steps = count - 1;
    const std::size_t b = std::clamp<std::size_t>(steps / 20, 2, 50);
    const std::size_t len = steps / b;
    if (len < 1) {
        fit.slope_se = std::numeric_limits<double>::infinity();
        return fit;
    }
    std::vector<double> means;
    for (std::size_t i = 0; i < b; ++i) {
        double sum = 0.0;
        for (std::size_t k = first + 1 + i * len; k < first + 1 + (i + 1) * len; ++k) sum += y[k] - y[k - 1];
        means.push_back(sum / static_cast<double>(len));
    }
    const double se_mean = batch_se(means);
    const double long_run_var = se_mean * se_mean * static_cast<double>(b * len);
    double tail = 0.0;
    double sum_c2 = 0.0;
    for (std::size_t k = last; k > first; --k) {
        tail += (static_cast<double>(k) - xbar) / sxx;
        sum_c2 += tail * tail;
    }
    fit.slope_se = std::sqrt(long_run_var * sum_c2);
    return fit;
}

RateFit pade_error_rate(coeffs::CoefficientStream stream, const CutPoint& t, std::size_t n_min, std::size_t n_max) {
    if (n_min < 1 || n_max <= n_min) throw ParameterError("pade_error_rate: need n_max > n_min >= 1");
    const std::size_t first = std::max(n_min, std::max<std::size_t>(50, n_max / 10));
    if (first > n_max || n_max - first + 1 < 3) {
        throw ParameterError("pade_error_rate: fit window [" + std::to_string(first) + ", " + std::to_string(n_max) +
                             "] has fewer than 3 points");
    }
    const std::vector<double> y = log_convergent_gaps(std::move(stream), t, n_max);
    return fit_log_gaps(y, first, n_max);
}

Eigen::VectorXd moments_from_coefficients(const Eigen::VectorXd& s) {
    const Eigen::Index len = s.size();
    if (len < 2 || len % 2 != 0) throw ParameterError("moments_from_coefficients: need 2n coefficients, n >= 1");
    for (Eigen::Index k = 0; k < len; ++k) {
        if (!(s(k) > 0.0)) throw ParameterError("moments_from_coefficients: coefficients must be positive");
    }
    // With t = -tau, T_k = 1/(s_k - tau T_{k+1}) from the bottom up.  Every
    // series coefficient stays positive, so nothing cancels.
    Eigen::VectorXd below = Eigen::VectorXd::Zero(len);
    Eigen::VectorXd current(len);
    for (Eigen::Index k = len - 1; k >= 0; --k) {
        const double inv = 1.0 / s(k);
        current(0) = inv;
        for (Eigen::Index j = 1; j < len; ++j) {
            double acc = 0.0;
            for (Eigen::Index i = 1; i <= j; ++i) acc += below(i - 1) * current(j - i);
            current(j) = acc * inv;
        }
        below.swap(current);
    }
    return below;
}

ReferenceValue reference_value(coeffs::CoefficientStream stream, const CutPoint& t, double tol) {
    if (!(tol > 0.0)) throw ParameterError("reference_value: tol must be positive");
    if (is_zero(t.value())) return {cdouble(1.0 / stream.next(), 0.0), 0.0, 1};

    const bool bracketing = !t.on_cut() && t.value().imag() == 0.0 && t.value().real() > 0.0;
    LogConvergentState st = LogConvergentState::start(t);
    st.advance(stream.next());
    cdouble previous = st.convergent();
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t n = 2; n <= reference_max_terms; ++n) {
        st.advance(stream.next());
        if (st.u == 0.0) continue;
        const cdouble current = st.convergent();
        const double gap = std::abs(current - previous);
        if (bracketing) {
            if (gap <= tol) {
                const cdouble mid = 0.5 * (current + previous);
                return {mid, 0.5 * gap + 4.0 * eps * std::abs(mid), n};
            }
        } else if (gap <= 0.1 * tol) {
            return {current, 10.0 * gap, n};
        }
        previous = current;
    }
    throw AccuracyError("reference_value: no convergence within 10^6 terms", previous, std::abs(previous));
}

}  // namespace stieltjes::cfrac
