#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <type_traits>
#include <utility>

#include <Eigen/Core>

#include "stieltjes/errors.hpp"

namespace stieltjes::quadrature {

/// Accuracy controls for the double-exponential integrator.
struct QuadratureSpec {
    double rel_tol = 1e-12;   ///< in (0, 1e-6]
    int max_level = 10;       ///< number of step halvings allowed, >= 1
    double abs_floor = 1e-30; ///< absolute tolerance below which churn stops
    int min_level = 2;
};

inline void validate(const QuadratureSpec& spec) {
    if (!(spec.rel_tol > 0.0) || spec.rel_tol > 1e-6) throw ParameterError("QuadratureSpec: rel_tol must lie in (0, 1e-6]");
    if (spec.max_level < 1) throw ParameterError("QuadratureSpec: max_level must be >= 1");
    if (!(spec.abs_floor >= 0.0)) throw ParameterError("QuadratureSpec: abs_floor must be non-negative");
}

/// Finite interval [lo, hi]: tanh-sinh transform.
struct Interval {
    double lo;
    double hi;
};

/// Half line [lo, inf): exp-sinh transform x = lo + scale * exp(pi/2 sinh u).
struct HalfLine {
    double lo = 0.0;
    double scale = 1.0;
};

/// Whole line: sinh-sinh transform x = center + scale * sinh(pi/2 sinh u).
struct RealLine {
    double center = 0.0;
    double scale = 1.0;
};

/// Whole line, no transform.  For integrands that already decay double
/// exponentially (e.g. exp(-w cosh x)); plain trapezoid sums walk outward
/// from `center` until terms are negligible.
struct DecayingLine {
    double center = 0.0;
    double step = 0.5;
};

template <class T>
struct QuadratureResult {
    T value{};
    double error = 0.0;
    int level = 0;
    std::size_t evaluations = 0;
};

namespace detail {

inline constexpr double half_pi = std::numbers::pi / 2.0;

template <class T>
double magnitude(const T& v) {
    if constexpr (std::is_arithmetic_v<T>) {
        return std::abs(v);
    } else if constexpr (requires { std::abs(v); }) {
        return std::abs(v);
    } else {
        return v.template lpNorm<Eigen::Infinity>();
    }
}

template <class T>
T zero() {
    if constexpr (requires { T::Zero(); }) return T::Zero();
    else return T{};
}

// Abscissa/weight pair of a DE transform at parameter u.
struct Node {
    double x;
    double w;
};

inline Node node(const Interval& d, double u) {
    const double c = 0.5 * (d.hi + d.lo);
    const double r = 0.5 * (d.hi - d.lo);
    const double s = half_pi * std::sinh(u);
    const double ch = std::cosh(s);
    return {c + r * std::tanh(s), r * half_pi * std::cosh(u) / (ch * ch)};
}

inline Node node(const HalfLine& d, double u) {
    const double e = std::exp(half_pi * std::sinh(u));
    return {d.lo + d.scale * e, d.scale * half_pi * std::cosh(u) * e};
}

inline Node node(const RealLine& d, double u) {
    const double s = half_pi * std::sinh(u);
    return {d.center + d.scale * std::sinh(s), d.scale * half_pi * std::cosh(u) * std::cosh(s)};
}

inline double parameter_range(const Interval&) { return 3.2; }
inline double parameter_range(const HalfLine&) { return 4.5; }
inline double parameter_range(const RealLine&) { return 4.5; }

template <class T>
[[noreturn]] void fail(const QuadratureResult<T>& r) {
    std::complex<double> best;
    if constexpr (std::is_same_v<T, double>) best = {r.value, 0.0};
    else if constexpr (std::is_same_v<T, std::complex<double>>) best = r.value;
    else best = r.value(0);
    throw AccuracyError("integrate: no convergence within max_level (error estimate " + std::to_string(r.error) + ")",
                        best, r.error);
}

template <class T>
bool converged(const QuadratureResult<T>& r, const QuadratureSpec& spec) {
    return r.level >= spec.min_level &&
           r.error <= std::max(spec.rel_tol * magnitude(r.value), spec.abs_floor);
}

}  // namespace detail

/// Double-exponential quadrature of `f` over a transformed domain.
///
/// The step is halved until two successive levels agree to
/// max(rel_tol * |I|, abs_floor); the returned error is that difference.
/// Throws AccuracyError, carrying the best estimate, if max_level is reached.
template <class F, class Domain>
auto integrate(F&& f, const Domain& domain, const QuadratureSpec& spec = {})
    -> QuadratureResult<std::decay_t<std::invoke_result_t<F&, double>>> {
    using T = std::decay_t<std::invoke_result_t<F&, double>>;
    validate(spec);
    QuadratureResult<T> r;
    const double range = detail::parameter_range(domain);
    double h = 0.5;

    auto term = [&](double u) -> T {
        const detail::Node nd = detail::node(domain, u);
        if (!(nd.w > 0.0) || !std::isfinite(nd.w) || !std::isfinite(nd.x)) return detail::zero<T>();
        ++r.evaluations;
        const T fx = f(nd.x);
        return fx * nd.w;
    };

    T sum = term(0.0);
    for (double u = h; u <= range; u += h) sum += term(u) + term(-u);
    r.value = sum * h;

    for (int level = 1; level <= spec.max_level; ++level) {
        h *= 0.5;
        T fresh = detail::zero<T>();
        for (double u = h; u <= range; u += 2.0 * h) fresh += term(u) + term(-u);
        const T next = 0.5 * r.value + fresh * h;
        r.error = detail::magnitude(next - r.value);
        r.value = next;
        r.level = level;
        if (detail::converged(r, spec)) return r;
    }
    detail::fail(r);
}

template <class F>
auto integrate(F&& f, const DecayingLine& domain, const QuadratureSpec& spec = {})
    -> QuadratureResult<std::decay_t<std::invoke_result_t<F&, double>>> {
    using T = std::decay_t<std::invoke_result_t<F&, double>>;
    validate(spec);
    QuadratureResult<T> r;
    constexpr std::size_t max_nodes = 1u << 22;
    double peak = 0.0;

    // Sum of f(center + (offset + k*stride)) over k in Z, walking outward
    // until terms drop below 1e-20 of the largest term seen.
    auto walk = [&](double offset, double stride) -> T {
        T acc = detail::zero<T>();
        for (int dir : {+1, -1}) {
            int quiet = 0;
            for (std::size_t k = (dir > 0) ? 0 : 1;; ++k) {
                if (r.evaluations > max_nodes) detail::fail(r);
                const double x = domain.center + offset + dir * static_cast<double>(k) * stride;
                const T v = f(x);
                ++r.evaluations;
                const double m = detail::magnitude(v);
                if (!std::isfinite(m)) throw DomainError("integrate: non-finite integrand at x = " + std::to_string(x));
                peak = std::max(peak, m);
                acc += v;
                quiet = (m <= 1e-20 * peak) ? quiet + 1 : 0;
                if (quiet >= 2 && k >= 4) break;
            }
        }
        return acc;
    };

    double h = domain.step;
    r.value = walk(0.0, h) * h;
    for (int level = 1; level <= spec.max_level; ++level) {
        const T fresh = walk(0.5 * h, h);
        h *= 0.5;
        const T next = 0.5 * r.value + fresh * h;
        r.error = detail::magnitude(next - r.value);
        r.value = next;
        r.level = level;
        if (detail::converged(r, spec)) return r;
    }
    detail::fail(r);
}

/// Gauss-Legendre rule with `order` nodes on [lo, hi] (Newton iteration on P_n).
struct GaussLegendre {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

inline GaussLegendre gauss_legendre(int order, double lo = -1.0, double hi = 1.0) {
    if (order < 1) throw ParameterError("gauss_legendre: order must be >= 1");
    GaussLegendre rule{Eigen::VectorXd(order), Eigen::VectorXd(order)};
    const double c = 0.5 * (hi + lo);
    const double r = 0.5 * (hi - lo);
    for (int i = 0; i < (order + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) <= 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes(i) = c - r * x;
        rule.nodes(order - 1 - i) = c + r * x;
        rule.weights(i) = r * w;
        rule.weights(order - 1 - i) = r * w;
    }
    return rule;
}

}  // namespace stieltjes::quadrature
