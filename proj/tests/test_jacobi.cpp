#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "stieltjes/cfrac.hpp"
#include "stieltjes/errors.hpp"
#include "stieltjes/jacobi.hpp"

using namespace stieltjes;
using namespace stieltjes::jacobi;
using coeffs::GammaParams;

namespace {

Eigen::VectorXd gamma_block(std::uint64_t seed, Eigen::Index count, double a = 8.0, double b = 0.125) {
    return coeffs::make_stream(GammaParams{a, b}, seed, 0).take(count);
}

Eigen::VectorXd baseline_eigenvalues(int n) {
    Eigen::VectorXd x(n);
    for (int j = 1; j <= n; ++j) {
        const double c = std::cos(j * std::numbers::pi / (2.0 * n + 1.0));
        x(n - j) = 4.0 * c * c;
    }
    return x;
}

}  // namespace

TEST_SUITE("jacobi") {

TEST_CASE("entries of the constant stream") {
    const auto J = build_jacobi(Eigen::VectorXd::Ones(10));
    CHECK(J.v(0) == 1.0);
    for (int k = 1; k < 5; ++k) CHECK(J.v(k) == 2.0);
    for (int k = 0; k < 4; ++k) CHECK(J.h(k) == 1.0);
    CHECK(J.s1 == 1.0);
}

TEST_CASE("entries by direct substitution") {
    Eigen::VectorXd s(6);
    s << 1, 2, 4, 2, 1, 1;
    CHECK(build_jacobi(s).v(1) == doctest::Approx(0.25).epsilon(1e-15));
    Eigen::VectorXd r(4);
    r << 4, 1, 9, 1;
    CHECK(build_jacobi(r).h(0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("malformed coefficient blocks are rejected") {
    CHECK_THROWS_AS(build_jacobi(Eigen::VectorXd::Ones(5)), ParameterError);
    CHECK_THROWS_AS(build_jacobi(Eigen::VectorXd()), ParameterError);
    Eigen::VectorXd s = Eigen::VectorXd::Ones(4);
    s(2) = 0.0;
    CHECK_THROWS_AS(build_jacobi(s), ParameterError);
}

TEST_CASE("Sturm counts") {
    const auto J2 = build_jacobi(Eigen::VectorXd::Ones(4));
    CHECK(sturm_count(J2, 1.0) == 1);
    CHECK(sturm_count(J2, 0.0) == 0);
    CHECK(sturm_count(J2, gershgorin_bounds(J2).second + 1.0) == 2);

    // Exact hit: J_1 = [1] has its eigenvalue at 1.  The zero pivot moves the
    // probe up one ulp, so the hit counts like the next double above it.
    const auto J1 = build_jacobi(Eigen::VectorXd::Ones(2));
    CHECK(sturm_count(J1, 1.0) == sturm_count(J1, std::nextafter(1.0, 2.0)));
    CHECK(sturm_count(J1, 1.0) == 1);
    CHECK(sturm_count(J1, std::nextafter(1.0, 0.0)) == 0);

    const auto J = build_jacobi(gamma_block(3, 200));
    CHECK(sturm_count(J, 0.0) == 0);
    CHECK(sturm_count(J, gershgorin_bounds(J).second) == 100);
}

TEST_CASE("baseline eigenvalues for small n") {
    const auto e1 = eigenvalues(build_jacobi(Eigen::VectorXd::Ones(2)));
    CHECK(e1(0) == doctest::Approx(1.0).epsilon(1e-14));
    const auto e2 = eigenvalues(build_jacobi(Eigen::VectorXd::Ones(4)));
    CHECK(e2(0) == doctest::Approx((3 - std::sqrt(5.0)) / 2).epsilon(1e-13));
    CHECK(e2(1) == doctest::Approx((3 + std::sqrt(5.0)) / 2).epsilon(1e-13));
    const Eigen::VectorXd e64 = eigenvalues(build_jacobi(Eigen::VectorXd::Ones(128)));
    CHECK(((e64 - baseline_eigenvalues(64)).array() / baseline_eigenvalues(64).array()).abs().maxCoeff() <= 1e-10);
}

TEST_CASE("eigenvalues match Eigen's tridiagonal solver") {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto J = build_jacobi(gamma_block(seed, 200, 1.0, 1.0));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
        solver.computeFromTridiagonal(J.v, J.h, Eigen::EigenvaluesOnly);
        const Eigen::VectorXd mine = eigenvalues(J);
        const double scale = mine.maxCoeff();
        CHECK((mine - solver.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    }
}

TEST_CASE("eigenvalues are positive, ascending and consistent with Sturm counts") {
    const auto J = build_jacobi(gamma_block(4, 256));
    const Eigen::VectorXd x = eigenvalues(J);
    CHECK(x(0) > 0.0);
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        if (j > 0) CHECK(x(j) > x(j - 1));
        CHECK(sturm_count(J, x(j) * (1 + 1e-12)) == j + 1);
    }
}

TEST_CASE("nodes of J_n and J_{n+1} interlace") {
    // Constant stream: gaps are O(1/n^2), so interlacing is strict in doubles.
    const Eigen::VectorXd c = eigenvalues(build_jacobi(Eigen::VectorXd::Ones(200)));
    const Eigen::VectorXd d = eigenvalues(build_jacobi(Eigen::VectorXd::Ones(202)));
    for (Eigen::Index j = 0; j < c.size(); ++j) {
        CHECK(d(j) < c(j));
        CHECK(c(j) < d(j + 1));
    }
    // Random chains: eigenvectors localized far from the last site move by
    // less than the bisection width, so ties at that width are allowed.
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Eigen::VectorXd s = gamma_block(seed, 82, 2.0, 0.5);
        const Eigen::VectorXd a = eigenvalues(build_jacobi(s.head(80)));
        const Eigen::VectorXd b = eigenvalues(build_jacobi(s));
        for (Eigen::Index j = 0; j < a.size(); ++j) {
            CHECK(b(j) <= a(j) * (1 + 1e-13));
            CHECK(a(j) <= b(j + 1) * (1 + 1e-13));
        }
    }
}

TEST_CASE("results do not depend on the thread count") {
    const auto J = build_jacobi(gamma_block(6, 600));
    const Eigen::VectorXd one = eigenvalues(J, 1e-14, 1);
    CHECK(one == eigenvalues(J, 1e-14, 3));
    CHECK(one == eigenvalues(J, 1e-14, 8));
    const auto m1 = quadrature_measure(J, 1e-14, 1);
    const auto m4 = quadrature_measure(J, 1e-14, 4);
    CHECK(m1.nodes == m4.nodes);
    CHECK(m1.weights == m4.weights);
}

TEST_CASE("quadrature measure has mass 1/s_1 and positive weights") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Eigen::VectorXd s = gamma_block(seed, 512, 1.0 + seed, 1.0 / (1.0 + seed));
        const auto m = quadrature_measure(build_jacobi(s));
        CHECK(std::abs(m.total_mass() * s(0) - 1.0) <= 1e-10);
        CHECK(m.weights.minCoeff() > 0.0);
    }
}

TEST_CASE("Gaussian quadrature reproduces the moments") {
    for (int n : {1, 2, 5, 12, 20}) {
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const Eigen::VectorXd s = gamma_block(seed, 2 * n);
            const auto m = quadrature_measure(build_jacobi(s));
            const Eigen::VectorXd exact = cfrac::moments_from_coefficients(s);
            for (int k = 0; k < 2 * n; ++k) {
                CAPTURE(n);
                CAPTURE(k);
                CHECK(std::abs(m.moment(k) - exact(k)) <= 1e-8 * exact(k));
            }
        }
    }
}

TEST_CASE("Christoffel weights agree with eigenvector weights") {
    for (int n : {2, 10, 40, 64}) {
        const auto J = build_jacobi(gamma_block(static_cast<std::uint64_t>(n), 2 * n));
        const auto m = quadrature_measure(J);
        const Eigen::VectorXd c = christoffel_weights(J, m.nodes);
        CHECK(((c - m.weights).array() / m.weights.array()).abs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("nodes are the zeros of psi_n") {
    const auto J = build_jacobi(gamma_block(9, 100));
    const Eigen::VectorXd x = eigenvalues(J);
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double d = 1e-7 * x(j);
        const auto at = orthonormal_polynomial(J, x(j));
        const auto up = orthonormal_polynomial(J, x(j) + d);
        const auto dn = orthonormal_polynomial(J, x(j) - d);
        const double slope =
            (up.psi_n * std::exp(up.log_scale - at.log_scale) - dn.psi_n * std::exp(dn.log_scale - at.log_scale)) / (2 * d);
        CHECK(std::abs(at.psi_n / slope) <= 1e-11 * x(j));
    }
}

TEST_CASE("counting measure") {
    Eigen::VectorXd grid(3);
    grid << 0.0, 1.0, std::numeric_limits<double>::infinity();
    const Eigen::VectorXd nodes = eigenvalues(build_jacobi(Eigen::VectorXd::Ones(4)));
    const Eigen::VectorXd n = counting_measure(nodes, grid);
    CHECK(n(0) == 0.0);
    CHECK(n(1) == 0.5);
    CHECK(n(2) == 1.0);
}

TEST_CASE("discrete measure helpers") {
    DiscreteMeasure m{Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(0.5, 0.25, 0.25)};
    CHECK(m.total_mass() == 1.0);
    CHECK(m.cumulative(2.0) == 0.75);
    CHECK(m.cumulative(0.5) == 0.0);
    CHECK(m.moment(1) == doctest::Approx(1.75));
}

}
