#pragma once

// Scalar special functions: log-Gamma (real and complex), incomplete Gamma,
// exponential integral E1, modified Bessel K of real order and the confluent
// hypergeometric U(m+1, m+1, s) used by the decode-and-forward capacity.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "plsec/errors.hpp"

namespace plsec {

inline constexpr double kEuler = 0.57721566490153286061;

namespace detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();
inline constexpr double kTiny = 1e-300;
inline constexpr int kMaxIter = 100000;

// B_{2k} / (2k (2k-1)), k = 1..8
inline constexpr std::array<double, 8> kStirling = {
    1.0 / 12.0,           -1.0 / 360.0,           1.0 / 1260.0,       -1.0 / 1680.0,
    1.0 / 1188.0,         -691.0 / 360360.0,      1.0 / 156.0,        -3617.0 / 122400.0,
};

template <typename T>
T stirling_series(T w) {
    const T inv = T(1) / w;
    const T inv2 = inv * inv;
    T corr = T(0);
    T pw = inv;
    for (double b : kStirling) {
        corr += b * pw;
        pw *= inv2;
    }
    return (w - 0.5) * std::log(w) - w + 0.5 * std::log(2.0 * std::numbers::pi) + corr;
}

// log(sin(pi z)) without overflow for large |Im z|.
inline std::complex<double> log_sin_pi(std::complex<double> z) {
    using C = std::complex<double>;
    const C i(0.0, 1.0);
    const double pi = std::numbers::pi;
    if (z.imag() >= 0.0) {
        return -i * pi * z + std::log((std::exp(2.0 * i * pi * z) - 1.0) / (2.0 * i));
    }
    return i * pi * z + std::log((1.0 - std::exp(-2.0 * i * pi * z)) / (2.0 * i));
}

}  // namespace detail

/// ln Gamma(x) for real x > 0. Reentrant (does not touch signgam).
inline double log_gamma(double x) {
    if (!(x > 0.0)) {
        if (x == std::floor(x)) throw DomainError("log_gamma: pole at non-positive integer");
        return std::log(std::abs(std::tgamma(x)));
    }
    if (x == 1.0 || x == 2.0) return 0.0;
    double prod = 1.0;
    while (x < 10.0) {
        prod *= x;
        x += 1.0;
    }
    return detail::stirling_series(x) - std::log(prod);
}

/// Principal branch of ln Gamma(z) for complex z.
inline std::complex<double> log_gamma(std::complex<double> z) {
    using C = std::complex<double>;
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) {
        throw DomainError("log_gamma: pole at non-positive integer");
    }
    if (z.real() < -20.0) {
        return std::log(std::numbers::pi) - detail::log_sin_pi(z) - log_gamma(1.0 - z);
    }
    double log_abs = 0.0;
    double arg_sum = 0.0;
    C w = z;
    while (std::abs(w) < 10.0 || w.real() < 0.0) {
        log_abs += std::log(std::abs(w));
        arg_sum += std::arg(w);
        w += 1.0;
    }
    return detail::stirling_series(w) - C(log_abs, arg_sum);
}

// ---------------------------------------------------------------------------
// Incomplete Gamma

namespace detail {

// sum_{n>=0} x^n / (a (a+1) ... (a+n)); lower gamma = e^{-x} x^a * sum
inline double lower_gamma_series(double a, double x) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int n = 0; n < kMaxIter; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * kEps) return sum;
    }
    throw AccuracyError("incomplete gamma series did not converge", sum, std::abs(del));
}

// Legendre continued fraction h with Gamma(a, x) = e^{-x} x^a h.
// Valid for any real a when x > 0; converges quickly for x >~ 1.
inline double upper_gamma_cf(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw AccuracyError("incomplete gamma continued fraction did not converge", h, 0.0);
}

}  // namespace detail

/// Regularized upper incomplete Gamma Q(a, x) = Gamma(a, x) / Gamma(a).
inline double regularized_gamma_q(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0)) throw DomainError("regularized_gamma_q: need a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    const double log_pref = -x + a * std::log(x) - log_gamma(a);
    if (x < a + 1.0) return 1.0 - std::exp(log_pref) * detail::lower_gamma_series(a, x);
    return std::exp(log_pref) * detail::upper_gamma_cf(a, x);
}

inline double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0)) throw DomainError("regularized_gamma_p: need a > 0, x >= 0");
    if (x == 0.0) return 0.0;
    const double log_pref = -x + a * std::log(x) - log_gamma(a);
    if (x < a + 1.0) return std::exp(log_pref) * detail::lower_gamma_series(a, x);
    return 1.0 - std::exp(log_pref) * detail::upper_gamma_cf(a, x);
}

/// Gamma(a, x) = int_x^inf t^{a-1} e^{-t} dt for a > 0, x >= 0.
inline double upper_incomplete_gamma(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0)) {
        throw DomainError("upper_incomplete_gamma: need a > 0, x >= 0");
    }
    if (x == 0.0) return std::tgamma(a);
    const double log_pref = -x + a * std::log(x);
    if (x < a + 1.0) return std::tgamma(a) - std::exp(log_pref) * detail::lower_gamma_series(a, x);
    return std::exp(log_pref) * detail::upper_gamma_cf(a, x);
}

// ---------------------------------------------------------------------------
// Exponential integral

/// e^s E1(s) for s > 0. Series below 1, continued fraction above.
inline double expint_e1_scaled(double s) {
    if (!(s > 0.0)) throw DomainError("expint_e1: need s > 0");
    if (s >= 1.0) return detail::upper_gamma_cf(0.0, s);
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= -s / k;
        const double add = term / k;
        sum += add;
        if (std::abs(add) < detail::kEps * std::abs(sum)) break;
    }
    return std::exp(s) * (-kEuler - std::log(s) - sum);
}

inline double expint_e1(double s) { return std::exp(-s) * expint_e1_scaled(s); }

// ---------------------------------------------------------------------------
// Modified Bessel function of the second kind

struct BesselKResult {
    double value;
    bool saturated;  // true when the result overflowed and was clamped to +inf
};

namespace detail {

// Taylor coefficients of 1/Gamma(z) = sum_{k>=1} c_k z^k
inline constexpr std::array<double, 26> kRecipGamma = {
    1.0,
    0.5772156649015329,
    -0.6558780715202538,
    -0.0420026350340952,
    0.1665386113822915,
    -0.0421977345555443,
    -0.0096219715278770,
    0.0072189432466630,
    -0.0011651675918591,
    -0.0002152416741149,
    0.0001280502823882,
    -0.0000201348547807,
    -0.0000012504934821,
    0.0000011330272320,
    -0.0000002056338417,
    0.0000000061160950,
    0.0000000050020075,
    -0.0000000011812746,
    0.0000000001043427,
    0.0000000000077823,
    -0.0000000000036968,
    0.0000000000005100,
    -0.0000000000000206,
    -0.0000000000000054,
    0.0000000000000014,
    0.0000000000000001,
};

struct TemmeGammas {
    double gam1;    // (1/G(1-mu) - 1/G(1+mu)) / (2 mu)
    double gam2;    // (1/G(1-mu) + 1/G(1+mu)) / 2
    double gampl;   // 1/G(1+mu)
    double gammi;   // 1/G(1-mu)
};

inline TemmeGammas temme_gammas(double mu) {
    double even = 0.0;  // sum over odd k (power k-1 even)
    double odd = 0.0;   // sum over even k, divided by mu
    double pw = 1.0;
    for (std::size_t k = 1; k <= kRecipGamma.size(); ++k) {
        if (k % 2 == 1) {
            even += kRecipGamma[k - 1] * pw;
        } else {
            odd += kRecipGamma[k - 1] * pw;
            pw *= mu * mu;
        }
    }
    // 1/G(1+mu) = even + mu*odd ; 1/G(1-mu) = even - mu*odd
    return {-odd, even, even + mu * odd, even - mu * odd};
}

// K_v(x), optionally times e^x. Order handled by |mu| <= 1/2 plus upward recurrence.
inline BesselKResult bessel_k_core(double v, double x, bool scaled) {
    const double pi = std::numbers::pi;
    const double nu = std::abs(v);
    const int nl = static_cast<int>(nu + 0.5);
    const double mu = nu - nl;
    const double mu2 = mu * mu;
    const double xi = 1.0 / x;
    const double xi2 = 2.0 * xi;
    double rkmu;
    double rk1;
    if (x < 2.0) {
        const double x2 = 0.5 * x;
        const double pimu = pi * mu;
        const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
        double d = -std::log(x2);
        double e = mu * d;
        const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
        const TemmeGammas g = temme_gammas(mu);
        double ff = fact * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
        double sum = ff;
        e = std::exp(e);
        double p = 0.5 * e / g.gampl;
        double q = 0.5 / (e * g.gammi);
        double c = 1.0;
        d = x2 * x2;
        double sum1 = p;
        int i = 1;
        for (; i < kMaxIter; ++i) {
            ff = (i * ff + p + q) / (i * i - mu2);
            c *= d / i;
            p /= (i - mu);
            q /= (i + mu);
            const double del = c * ff;
            sum += del;
            sum1 += c * (p - i * ff);
            if (std::abs(del) < std::abs(sum) * kEps) break;
        }
        rkmu = sum;
        rk1 = sum1 * xi2;
        if (scaled) {
            const double ex = std::exp(x);
            rkmu *= ex;
            rk1 *= ex;
        }
    } else {
        double b = 2.0 * (1.0 + x);
        double d = 1.0 / b;
        double h = d;
        double delh = d;
        double q1 = 0.0;
        double q2 = 1.0;
        const double a1 = 0.25 - mu2;
        double q = a1;
        double c = a1;
        double a = -a1;
        double s = 1.0 + q * delh;
        for (int i = 2; i < kMaxIter; ++i) {
            a -= 2 * (i - 1);
            c = -a * c / i;
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
            if (std::abs(dels / s) < kEps) break;
        }
        h = a1 * h;
        rkmu = std::sqrt(pi / (2.0 * x)) / s;
        if (!scaled) rkmu *= std::exp(-x);
        rk1 = rkmu * (mu + x + 0.5 - h) * xi;
    }
    for (int i = 1; i <= nl; ++i) {
        const double next = (mu + i) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = next;
        if (!std::isfinite(rkmu) || rkmu > std::numeric_limits<double>::max() / 4) {
            return {std::numeric_limits<double>::infinity(), true};
        }
    }
    return {rkmu, false};
}

}  // namespace detail

/// K_v(x) with an explicit overflow flag. x must be positive.
inline BesselKResult bessel_k_checked(double v, double x) {
    if (!(x > 0.0)) throw DomainError("bessel_k: need x > 0");
    return detail::bessel_k_core(v, x, false);
}

/// K_v(x); saturates to +inf on overflow (tiny x, large order).
inline double bessel_k(double v, double x) { return bessel_k_checked(v, x).value; }

/// e^x K_v(x).
inline double bessel_k_scaled(double v, double x) {
    if (!(x > 0.0)) throw DomainError("bessel_k_scaled: need x > 0");
    return detail::bessel_k_core(v, x, true).value;
}

// ---------------------------------------------------------------------------
// Tricomi U(m+1, m+1, s) = e^s Gamma(-m, s)

/// U(m+1, m+1, s), so that Gamma(m+1) * U = int_0^inf g^m e^{-s g} / (1+g) dg.
///
/// Contiguous relation U_k = (s^{-k} - U_{k-1}) / k, run upward only where it
/// is stable (k > s). Below that the value is anchored directly by the
/// continued fraction for e^s Gamma(-k, s); for s < 1 the anchor is
/// U(1,1,s) = e^s E1(s).
inline double tricomi_u_integer(int m, double s) {
    if (m < 0) throw DomainError("tricomi_u_integer: need m >= 0");
    if (!(s > 0.0)) throw DomainError("tricomi_u_integer: need s > 0");
    int k0 = 0;
    double u;
    if (s < 1.0) {
        u = expint_e1_scaled(s);
    } else {
        k0 = static_cast<int>(std::min<double>(m, std::floor(s)));
        u = std::pow(s, -k0) * detail::upper_gamma_cf(-static_cast<double>(k0), s);
    }
    for (int k = k0 + 1; k <= m; ++k) {
        u = (std::pow(s, -k) - u) / k;
    }
    return u;
}

}  // namespace plsec
