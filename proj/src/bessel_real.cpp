// Real-order Bessel J, Y and K for positive real argument.
//
// The algorithms follow Temme (1975, 1976) for small arguments and Steed's
// method (Barnett et al. 1974) for larger ones: a continued fraction gives
// J'/J at the target order, the reduced order mu in [-1/2, 1/2] is reached
// by downward recurrence, and the Wronskian pins the normalisation.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "stieltjes/errors.hpp"
#include "stieltjes/specfun.hpp"

namespace stieltjes::specfun {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double eps = std::numeric_limits<double>::epsilon();
constexpr double fpmin = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
constexpr int max_iterations = 100000;
constexpr double small_argument = 2.0;

// Taylor coefficients of 1/Gamma(x) about 0: 1/Gamma(x) = sum_k c[k] x^k.
constexpr std::array<double, 31> rgamma_taylor = {
    0.0,
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.042002635034095235529,
    0.1665386113822914895,
    -0.042197734555544336748,
    -0.0096219715278769735621,
    0.0072189432466630995424,
    -0.0011651675918590651121,
    -0.00021524167411495097282,
    0.00012805028238811618615,
    -0.000020134854780788238656,
    -1.2504934821426706573e-6,
    1.1330272319816958824e-6,
    -2.0563384169776071035e-7,
    6.1160951044814158179e-9,
    5.0020076444692229301e-9,
    -1.1812745704870201446e-9,
    1.0434267116911005105e-10,
    7.782263439905071254e-12,
    -3.6968056186422057082e-12,
    5.100370287454475979e-13,
    -2.0583260535665067832e-14,
    -5.3481225394230179824e-15,
    1.2267786282382607902e-15,
    -1.1812593016974587695e-16,
    1.1866922547516003326e-18,
    1.4123806553180317816e-18,
    -2.2987456844353702066e-19,
    1.7144063219273374334e-20,
};

// Temme's auxiliary gamma combinations for |mu| <= 1/2:
//   gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu)
//   gam2 = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2
// evaluated from the even/odd parts of 1/Gamma(1+x) = sum_k c[k+1] x^k.
struct TemmeGammas {
    double gam1, gam2, gampl, gammi;
};

TemmeGammas temme_gammas(double mu) {
    double even = 0.0;  // sum c[k+1] mu^k, k even
    double odd = 0.0;   // sum c[k+1] mu^(k-1), k odd
    const double mu2 = mu * mu;
    for (int k = static_cast<int>(rgamma_taylor.size()) - 2; k >= 0; --k) {
        if (k % 2 == 0) even = even * mu2 + rgamma_taylor[k + 1];
        else odd = odd * mu2 + rgamma_taylor[k + 1];
    }
    // 1/Gamma(1+mu) = even + mu*odd ; 1/Gamma(1-mu) = even - mu*odd
    return {-odd, even, even + mu * odd, even - mu * odd};
}

BesselJY jy_nonnegative(double nu, double x) {
    const int nl = (x < small_argument) ? static_cast<int>(nu + 0.5)
                                        : std::max(0, static_cast<int>(nu - x + 1.5));
    const double xmu = nu - nl;
    const double xmu2 = xmu * xmu;
    const double xi = 1.0 / x;
    const double xi2 = 2.0 * xi;
    const double w = xi2 / pi;

    // CF1: J'_nu / J_nu by modified Lentz.
    int isign = 1;
    double h = nu * xi;
    if (h < fpmin) h = fpmin;
    double b = xi2 * nu;
    double d = 0.0;
    double c = h;
    int i = 1;
    for (; i <= max_iterations; ++i) {
        b += xi2;
        d = b - d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = b - 1.0 / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = c * d;
        h *= del;
        if (d < 0.0) isign = -isign;
        if (std::abs(del - 1.0) < eps) break;
    }
    if (i > max_iterations) throw AccuracyError("bessel_jy: CF1 did not converge", {}, 0.0);

    // Downward recurrence to the reduced order, rescaling to stay in range.
    double rjl = isign * 1e-30;
    double rjpl = h * rjl;
    double rjl1 = rjl;
    double rjp1 = rjpl;
    double fact = nu * xi;
    for (int l = nl; l >= 1; --l) {
        const double rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
        if (std::abs(rjl) > 1e250) {
            rjl *= 1e-250;
            rjpl *= 1e-250;
            rjl1 *= 1e-250;
            rjp1 *= 1e-250;
        }
    }
    if (rjl == 0.0) rjl = eps;
    const double f = rjpl / rjl;

    double rjmu, rymu, rymup, ry1;
    if (x < small_argument) {
        const double x2 = 0.5 * x;
        const double pimu = pi * xmu;
        const double fct = (std::abs(pimu) < eps) ? 1.0 : pimu / std::sin(pimu);
        d = -std::log(x2);
        double e = xmu * d;
        const double fct2 = (std::abs(e) < eps) ? 1.0 : std::sinh(e) / e;
        const TemmeGammas g = temme_gammas(xmu);
        double ff = 2.0 / pi * fct * (g.gam1 * std::cosh(e) + g.gam2 * fct2 * d);
        e = std::exp(e);
        double p = e / (g.gampl * pi);
        double q = 1.0 / (e * pi * g.gammi);
        const double pimu2 = 0.5 * pimu;
        const double fct3 = (std::abs(pimu2) < eps) ? 1.0 : std::sin(pimu2) / pimu2;
        const double r = pi * pimu2 * fct3 * fct3;
        c = 1.0;
        d = -x2 * x2;
        double sum = ff + r * q;
        double sum1 = p;
        for (i = 1; i <= max_iterations; ++i) {
            ff = (i * ff + p + q) / (i * static_cast<double>(i) - xmu2);
            c *= d / i;
            p /= (i - xmu);
            q /= (i + xmu);
            const double del = c * (ff + r * q);
            sum += del;
            const double del1 = c * p - i * del;
            sum1 += del1;
            if (std::abs(del) < (1.0 + std::abs(sum)) * eps) break;
        }
        if (i > max_iterations) throw AccuracyError("bessel_jy: Temme series did not converge", {}, 0.0);
        rymu = -sum;
        ry1 = -sum1 * xi2;
        rymup = xmu * xi * rymu - ry1;
        rjmu = w / (rymup - f * rymu);
    } else {
        // CF2 (Steed): p + iq = (J' + iY')/(J + iY) at the reduced order.
        double a = 0.25 - xmu2;
        double p = -0.5 * xi;
        double q = 1.0;
        const double br = 2.0 * x;
        double bi = 2.0;
        double fct = a * xi / (p * p + q * q);
        double cr = br + q * fct;
        double ci = bi + p * fct;
        double den = br * br + bi * bi;
        double dr = br / den;
        double di = -bi / den;
        double dlr = cr * dr - ci * di;
        double dli = cr * di + ci * dr;
        double temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        for (i = 2; i <= max_iterations; ++i) {
            a += 2 * (i - 1);
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if (std::abs(dr) + std::abs(di) < fpmin) dr = fpmin;
            fct = a / (cr * cr + ci * ci);
            cr = br + cr * fct;
            ci = bi - ci * fct;
            if (std::abs(cr) + std::abs(ci) < fpmin) cr = fpmin;
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (std::abs(dlr - 1.0) + std::abs(dli) < eps) break;
        }
        if (i > max_iterations) throw AccuracyError("bessel_jy: CF2 did not converge", {}, 0.0);
        const double gam = (p - f) / q;
        rjmu = std::sqrt(w / ((p - f) * gam + q));
        rjmu = std::copysign(rjmu, rjl);
        rymu = rjmu * gam;
        rymup = rymu * (p + q / gam);
        ry1 = xmu * xi * rymu - rymup;
    }

    const double scale = rjmu / rjl;
    BesselJY out{};
    out.j = rjl1 * scale;
    out.jp = rjp1 * scale;
    for (i = 1; i <= nl; ++i) {
        const double rytemp = (xmu + i) * xi2 * ry1 - rymu;
        rymu = ry1;
        ry1 = rytemp;
    }
    out.y = rymu;
    out.yp = nu * xi * rymu - ry1;
    return out;
}

// K_nu(x) e^x and K_{nu+1}(x) e^x at the reduced order, then upward recurrence.
double k_scaled_nonnegative(double nu, double x) {
    const int nl = static_cast<int>(nu + 0.5);
    const double xmu = nu - nl;
    const double xmu2 = xmu * xmu;
    const double xi = 1.0 / x;
    const double xi2 = 2.0 * xi;
    double rkmu, rk1;
    int i = 1;
    if (x < small_argument) {
        const double x2 = 0.5 * x;
        const double pimu = pi * xmu;
        const double fct = (std::abs(pimu) < eps) ? 1.0 : pimu / std::sin(pimu);
        double d = -std::log(x2);
        double e = xmu * d;
        const double fct2 = (std::abs(e) < eps) ? 1.0 : std::sinh(e) / e;
        const TemmeGammas g = temme_gammas(xmu);
        double ff = fct * (g.gam1 * std::cosh(e) + g.gam2 * fct2 * d);
        double sum = ff;
        e = std::exp(e);
        double p = 0.5 * e / g.gampl;
        double q = 0.5 / (e * g.gammi);
        double c = 1.0;
        d = x2 * x2;
        double sum1 = p;
        for (; i <= max_iterations; ++i) {
            ff = (i * ff + p + q) / (i * static_cast<double>(i) - xmu2);
            c *= d / i;
            p /= (i - xmu);
            q /= (i + xmu);
            const double del = c * ff;
            sum += del;
            const double del1 = c * (p - i * ff);
            sum1 += del1;
            if (std::abs(del) < std::abs(sum) * eps) break;
        }
        if (i > max_iterations) throw AccuracyError("bessel_k_real: Temme series did not converge", {}, 0.0);
        const double ex = std::exp(x);
        rkmu = sum * ex;
        rk1 = sum1 * xi2 * ex;
    } else {
        double b = 2.0 * (1.0 + x);
        double d = 1.0 / b;
        double h = d;
        double delh = d;
        double q1 = 0.0;
        double q2 = 1.0;
        const double a1 = 0.25 - xmu2;
        double q = a1;
        double c = a1;
        double a = -a1;
        double s = 1.0 + q * delh;
        for (; i <= max_iterations; ++i) {
            a -= 2 * i;
            c = -a * c / (i + 1.0);
            const double qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh = (b * d - 1.0) * delh;
            h += delh;
            const double dels = q * delh;
            s += dels;
            if (std::abs(dels / s) < eps) break;
        }
        if (i > max_iterations) throw AccuracyError("bessel_k_real: CF2 did not converge", {}, 0.0);
        h = a1 * h;
        rkmu = std::sqrt(pi / (2.0 * x)) / s;
        rk1 = rkmu * (xmu + x + 0.5 - h) * xi;
    }
    for (i = 1; i <= nl; ++i) {
        const double rktemp = (xmu + i) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = rktemp;
    }
    return rkmu;
}

}  // namespace

BesselJY bessel_jy_full(double a, double z) {
    if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("bessel_jy: argument must be positive, got " + std::to_string(z));
    if (!std::isfinite(a)) throw DomainError("bessel_jy: order must be finite");
    if (a >= 0.0) return jy_nonnegative(a, z);
    const double nu = -a;
    const BesselJY p = jy_nonnegative(nu, z);
    // J_{-nu} = cos(nu pi) J_nu - sin(nu pi) Y_nu ; Y_{-nu} = sin(nu pi) J_nu + cos(nu pi) Y_nu
    const double cs = std::cos(pi * nu);
    const double sn = std::sin(pi * nu);
    return {cs * p.j - sn * p.y, sn * p.j + cs * p.y, cs * p.jp - sn * p.yp, sn * p.jp + cs * p.yp};
}

std::pair<double, double> bessel_jy(double a, double z) {
    const BesselJY r = bessel_jy_full(a, z);
    return {r.j, r.y};
}

double bessel_k_real_scaled(double a, double x) {
    if (!(x > 0.0)) throw DomainError("bessel_k_real: argument must be positive");
    if (std::isinf(x)) return 0.0;
    return k_scaled_nonnegative(std::abs(a), x);
}

double bessel_k_real(double a, double x) {
    return bessel_k_real_scaled(a, x) * std::exp(-x);
}

}  // namespace stieltjes::specfun
