#include "stieltjes/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "stieltjes/errors.hpp"

namespace stieltjes::jacobi {

namespace {

constexpr double quotient_clamp = 1e300;

// Sturm count, or -1 if a pivot vanished exactly.
Eigen::Index try_count(const JacobiMatrix& J, double lambda) {
    const Eigen::Index n = J.size();
    Eigen::Index count = 0;
    double d = J.v(0) - lambda;
    for (Eigen::Index k = 0;; ++k) {
        if (d == 0.0) return -1;
        if (d < 0.0) ++count;
        if (k + 1 == n) break;
        const double q = std::clamp(J.h(k) * J.h(k) / d, -quotient_clamp, quotient_clamp);
        d = (J.v(k + 1) - lambda) - q;
    }
    return count;
}

double bisect(const JacobiMatrix& J, Eigen::Index j, double lo, double hi, double tol) {
    for (;;) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        if (hi - lo <= tol * std::max(std::abs(lo), std::abs(hi))) break;
        if (sturm_count(J, mid) > j) hi = mid;
        else lo = mid;
    }
    return 0.5 * (lo + hi);
}

// Tridiagonal LU with partial pivoting of J - lambda I (the LAPACK gttrf scheme).
struct TridiagonalLU {
    Eigen::VectorXd dl, d, du, du2;
    std::vector<char> swapped;

    TridiagonalLU(const JacobiMatrix& J, double lambda) {
        const Eigen::Index n = J.size();
        d = J.v.array() - lambda;
        dl = J.h;
        du = J.h;
        du2 = Eigen::VectorXd::Zero(std::max<Eigen::Index>(n - 2, 0));
        swapped.assign(static_cast<std::size_t>(std::max<Eigen::Index>(n - 1, 0)), 0);
        const double norm = std::max(J.v.cwiseAbs().maxCoeff() + 2.0 * (n > 1 ? J.h.cwiseAbs().maxCoeff() : 0.0),
                                     std::numeric_limits<double>::min());
        const double tiny = std::numeric_limits<double>::epsilon() * norm;
        for (Eigen::Index i = 0; i + 1 < n; ++i) {
            if (std::abs(d(i)) >= std::abs(dl(i))) {
                if (d(i) == 0.0) d(i) = tiny;
                const double fact = dl(i) / d(i);
                dl(i) = fact;
                d(i + 1) -= fact * du(i);
            } else {
                const double fact = d(i) / dl(i);
                d(i) = dl(i);
                dl(i) = fact;
                const double temp = du(i);
                du(i) = d(i + 1);
                d(i + 1) = temp - fact * d(i + 1);
                if (i + 2 < n) {
                    du2(i) = du(i + 1);
                    du(i + 1) = -fact * du(i + 1);
                }
                swapped[static_cast<std::size_t>(i)] = 1;
            }
        }
        if (d(n - 1) == 0.0) d(n - 1) = tiny;
    }

    void solve(Eigen::VectorXd& b) const {
        const Eigen::Index n = d.size();
        for (Eigen::Index i = 0; i + 1 < n; ++i) {
            if (!swapped[static_cast<std::size_t>(i)]) {
                b(i + 1) -= dl(i) * b(i);
            } else {
                const double temp = b(i);
                b(i) = b(i + 1);
                b(i + 1) = temp - dl(i) * b(i);
            }
        }
        b(n - 1) /= d(n - 1);
        if (n > 1) b(n - 2) = (b(n - 2) - du(n - 2) * b(n - 1)) / d(n - 2);
        for (Eigen::Index i = n - 3; i >= 0; --i) b(i) = (b(i) - du(i) * b(i + 1) - du2(i) * b(i + 2)) / d(i);
    }
};

Eigen::VectorXd inverse_iterate(const JacobiMatrix& J, double lambda, const std::vector<Eigen::VectorXd>& against) {
    const Eigen::Index n = J.size();
    const TridiagonalLU lu(J, lambda);
    // Deterministic start with no special alignment to any eigenvector.
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = 1.0 + 0.5 * std::sin(1.0 + 3.0 * static_cast<double>(i));
    x.normalize();
    for (int it = 0; it < 4; ++it) {
        lu.solve(x);
        for (const auto& q : against) x -= q.dot(x) * q;
        x.normalize();
    }
    return x;
}

}  // namespace

Eigen::MatrixXd JacobiMatrix::dense() const {
    const Eigen::Index n = size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    m.diagonal() = v;
    if (n > 1) {
        m.diagonal(1) = h;
        m.diagonal(-1) = h;
    }
    return m;
}

double DiscreteMeasure::cumulative(double x) const {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < nodes.size() && nodes(j) <= x; ++j) acc += weights(j);
    return acc;
}

double DiscreteMeasure::moment(int k) const {
    return (nodes.array().pow(static_cast<double>(k)) * weights.array()).sum();
}

JacobiMatrix build_jacobi(const Eigen::VectorXd& s) {
    const Eigen::Index len = s.size();
    if (len < 2 || len % 2 != 0) throw ParameterError("build_jacobi: need exactly 2n coefficients, n >= 1");
    for (Eigen::Index k = 0; k < len; ++k) {
        if (!(s(k) > 0.0) || !std::isfinite(s(k))) throw ParameterError("build_jacobi: coefficients must be positive");
    }
    const Eigen::Index n = len / 2;
    // sc(k) is s_k in 1-based notation.
    auto sc = [&s](Eigen::Index k) { return s(k - 1); };
    JacobiMatrix J;
    J.s1 = sc(1);
    J.v.resize(n);
    J.h.resize(n - 1);
    J.v(0) = 1.0 / (sc(1) * sc(2));
    for (Eigen::Index k = 1; k < n; ++k) J.v(k) = (1.0 / sc(2 * k + 1)) * (1.0 / sc(2 * k) + 1.0 / sc(2 * k + 2));
    for (Eigen::Index k = 0; k + 1 < n; ++k) J.h(k) = 1.0 / (sc(2 * k + 2) * std::sqrt(sc(2 * k + 1) * sc(2 * k + 3)));
    return J;
}

Eigen::Index sturm_count(const JacobiMatrix& J, double lambda) {
    for (;;) {
        const Eigen::Index c = try_count(J, lambda);
        if (c >= 0) return c;
        lambda = std::nextafter(lambda, std::numeric_limits<double>::infinity());
    }
}

std::pair<double, double> gershgorin_bounds(const JacobiMatrix& J) {
    const Eigen::Index n = J.size();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (Eigen::Index i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(J.h(i - 1));
        if (i + 1 < n) r += std::abs(J.h(i));
        lo = std::min(lo, J.v(i) - r);
        hi = std::max(hi, J.v(i) + r);
    }
    // Widen slightly so the bounds strictly enclose the spectrum in floating point.
    const double pad = 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi)) +
                       std::numeric_limits<double>::min();
    return {lo - pad, hi + pad};
}

Eigen::VectorXd eigenvalues(const JacobiMatrix& J, double tol, int threads) {
    if (!(tol > 0.0)) throw ParameterError("eigenvalues: tol must be positive");
    const Eigen::Index n = J.size();
    if (n < 1) throw ParameterError("eigenvalues: empty matrix");
    const auto [lo, hi] = gershgorin_bounds(J);
    Eigen::VectorXd out(n);
    auto work = [&](Eigen::Index begin, Eigen::Index end) {
        for (Eigen::Index j = begin; j < end; ++j) out(j) = bisect(J, j, lo, hi, tol);
    };
    const int workers = static_cast<int>(std::clamp<Eigen::Index>(threads, 1, n));
    if (workers == 1) {
        work(0, n);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back(work, n * w / workers, n * (w + 1) / workers);
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

Eigen::VectorXd inverse_iteration(const JacobiMatrix& J, double lambda) { return inverse_iterate(J, lambda, {}); }

DiscreteMeasure quadrature_measure(const JacobiMatrix& J, double tol, int threads) {
    DiscreteMeasure m;
    m.nodes = eigenvalues(J, tol, threads);
    const Eigen::Index n = J.size();
    m.weights.resize(n);
    const auto [lo, hi] = gershgorin_bounds(J);
    const double cluster_gap = 1e-3 * std::max(std::abs(lo), std::abs(hi));
    std::vector<Eigen::VectorXd> cluster;
    for (Eigen::Index j = 0; j < n; ++j) {
        if (j > 0 && m.nodes(j) - m.nodes(j - 1) >= cluster_gap) cluster.clear();
        Eigen::VectorXd x = inverse_iterate(J, m.nodes(j), cluster);
        m.weights(j) = x(0) * x(0) / J.s1;
        cluster.push_back(std::move(x));
    }
    return m;
}

PsiValue orthonormal_polynomial(const JacobiMatrix& J, double lambda) {
    const Eigen::Index n = J.size();
    double prev = 0.0;
    double cur = std::sqrt(J.s1);
    double log_scale = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double off_prev = (k > 0) ? J.h(k - 1) : 0.0;
        const double off = (k + 1 < n) ? J.h(k) : 1.0;
        const double next = ((lambda - J.v(k)) * cur - off_prev * prev) / off;
        prev = cur;
        cur = next;
        const double mag = std::max(std::abs(prev), std::abs(cur));
        if (mag > 1e150) {
            prev /= mag;
            cur /= mag;
            log_scale += std::log(mag);
        }
    }
    return {cur, prev, log_scale};
}

Eigen::VectorXd christoffel_weights(const JacobiMatrix& J, const Eigen::VectorXd& nodes) {
    // At an eigenvalue psi_l solves the recurrence from both ends, but running
    // it forward alone amplifies rounding wherever the true solution decays.
    // The ratios psi_{k+1}/psi_k are taken from the top-down pivots before the
    // twist index r and from the bottom-up pivots after it; r minimises
    // |gamma_r|, gamma_r = d+_r + d-_r - (v_r - lambda).
    const Eigen::Index n = J.size();
    const double clamp = quotient_clamp;
    Eigen::VectorXd w(nodes.size());
    Eigen::VectorXd down(n);
    Eigen::VectorXd up(n);
    Eigen::VectorXd z(n);
    for (Eigen::Index j = 0; j < nodes.size(); ++j) {
        const double lambda = nodes(j);
        down(0) = J.v(0) - lambda;
        for (Eigen::Index k = 1; k < n; ++k) {
            const double prev = (down(k - 1) == 0.0) ? std::numeric_limits<double>::min() : down(k - 1);
            down(k) = (J.v(k) - lambda) - std::clamp(J.h(k - 1) * J.h(k - 1) / prev, -clamp, clamp);
        }
        up(n - 1) = J.v(n - 1) - lambda;
        for (Eigen::Index k = n - 2; k >= 0; --k) {
            const double next = (up(k + 1) == 0.0) ? std::numeric_limits<double>::min() : up(k + 1);
            up(k) = (J.v(k) - lambda) - std::clamp(J.h(k) * J.h(k) / next, -clamp, clamp);
        }
        Eigen::Index r = 0;
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index k = 0; k < n; ++k) {
            const double gamma = std::abs(down(k) + up(k) - (J.v(k) - lambda));
            if (gamma < best) {
                best = gamma;
                r = k;
            }
        }
        z(r) = 1.0;
        for (Eigen::Index k = r - 1; k >= 0; --k) z(k) = -J.h(k) * z(k + 1) / down(k);
        for (Eigen::Index k = r + 1; k < n; ++k) z(k) = -J.h(k - 1) * z(k - 1) / up(k);
        // With psi_0 = sqrt(s1), psi_l = sqrt(s1) z_l / z_0 and the weight is 1/sum psi_l^2.
        const double scale = z.cwiseAbs().maxCoeff();
        z /= scale;
        w(j) = z(0) * z(0) / (J.s1 * z.squaredNorm());
    }
    return w;
}

Eigen::VectorXd counting_measure(const Eigen::VectorXd& nodes, const Eigen::VectorXd& grid) {
    const Eigen::Index n = nodes.size();
    if (n < 1) throw ParameterError("counting_measure: no nodes");
    Eigen::VectorXd out(grid.size());
    const double* begin = nodes.data();
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const auto below = std::lower_bound(begin, begin + n, grid(i)) - begin;
        out(i) = static_cast<double>(below) / static_cast<double>(n);
    }
    return out;
}

}  // namespace stieltjes::jacobi
