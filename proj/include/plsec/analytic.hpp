#pragma once

// Closed-form and quadrature capacity expressions for the reflecting surface,
// decode-and-forward and fixed-gain amplify-and-forward links, plus the
// average secrecy combiner max(C_L - C_E, 0).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "plsec/channels.hpp"
#include "plsec/errors.hpp"
#include "plsec/meijer.hpp"
#include "plsec/quadrature.hpp"
#include "plsec/specfun.hpp"

namespace plsec {

enum class Method { analytic, monte_carlo };

inline std::string to_string(Method m) {
    return m == Method::analytic ? "analytic" : "monte-carlo";
}

struct CapacityEstimate {
    double bits_per_sec_hz = 0.0;
    Method method = Method::analytic;
    double std_error = 0.0;
    std::int64_t samples = 0;
};

/// Average secrecy capacity max(C_L - C_E, 0). Standard errors add in quadrature.
inline CapacityEstimate secrecy_capacity(const CapacityEstimate& cl, const CapacityEstimate& ce) {
    CapacityEstimate out;
    out.bits_per_sec_hz = std::max(cl.bits_per_sec_hz - ce.bits_per_sec_hz, 0.0);
    const bool mc = cl.method == Method::monte_carlo || ce.method == Method::monte_carlo;
    out.method = mc ? Method::monte_carlo : Method::analytic;
    out.std_error = std::hypot(cl.std_error, ce.std_error);
    out.samples = mc ? std::min(cl.samples, ce.samples) : 0;
    return out;
}

namespace detail {

inline constexpr double kInvLn2 = 1.0 / std::numbers::ln2;

inline CapacityEstimate analytic_estimate(double nats_integral) {
    return {std::max(nats_integral * kInvLn2, 0.0), Method::analytic, 0.0, 0};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Reflecting surface: per-element MGF and ergodic capacity

/// Laplace transform E[exp(-z g)] of one Gamma-Gamma element SNR,
///   (beta^alpha z^-alpha / (Gamma(a1) Gamma(a2))) G^{2,1}_{1,2}(beta/z | 1-alpha; v/2, -v/2).
///
/// For beta/z > 1 the complement 1 - M(z) is taken directly from the
/// contour moved right of the pole at s = alpha, whose residue is exactly
/// the leading 1; for tiny z the moment series is used. Holds a kernel
/// cache, so use one instance per thread.
class IrsElementMgf {
public:
    explicit IrsElementMgf(const GammaGammaParams& gg, const AdaptiveContourOptions& opt = {})
        : gg_(gg),
          g_(1.0 - gg.alpha_gg, 0.5 * gg.order, -0.5 * gg.order),
          log_norm_(log_gamma(gg.shape_first()) + log_gamma(gg.shape_second())),
          opt_(opt) {
        if (!(gg.beta_gg > 0.0) || !(gg.shape_first() > 0.0) || !(gg.shape_second() > 0.0)) {
            throw DomainError("IrsElementMgf: invalid Gamma-Gamma parameters");
        }
    }

    /// M(z) in (0, 1].
    double factor(double z) const {
        check(z);
        const double x = gg_.beta_gg / z;
        if (x <= 1.0) return std::clamp(direct(x), 0.0, 1.0);
        return std::clamp(1.0 - complement(z), 0.0, 1.0);
    }

    /// 1 - M(z), accurate when M is close to one.
    double complement(double z) const {
        check(z);
        const double x = gg_.beta_gg / z;
        if (x <= 1.0) return std::clamp(1.0 - direct(x), 0.0, 1.0);
        if (const double r = moment_ratio(z); r < 1e-4) return moment_series(z);
        const double alpha = gg_.alpha_gg;
        const MeijerResult shifted = g_.integral(x, alpha + 0.5, opt_);
        const double c = -std::exp(alpha * std::log(x) - log_norm_) * shifted.value;
        return std::clamp(c, 0.0, 1.0);
    }

    const GammaGammaParams& params() const { return gg_; }

private:
    static void check(double z) {
        if (!(z > 0.0)) throw DomainError("IrsElementMgf: need z > 0");
    }

    double direct(double x) const {
        const MeijerResult g = g_.integral(x, g_.midpoint(), opt_);
        return std::exp(gg_.alpha_gg * std::log(x) - log_norm_) * g.value;
    }

    // ratio of the second to the first term of the moment series
    double moment_ratio(double z) const {
        return (gg_.shape_first() + 1.0) * (gg_.shape_second() + 1.0) * z / (2.0 * gg_.beta_gg);
    }

    // 1 - M(z) = sum_k (-1)^(k+1) E[g^k] z^k / k!,  E[g^k] = (a1)_k (a2)_k / beta^k
    double moment_series(double z) const {
        const double a1 = gg_.shape_first();
        const double a2 = gg_.shape_second();
        double term = 1.0;
        double sum = 0.0;
        for (int k = 1; k <= 8; ++k) {
            term *= -(a1 + k - 1) * (a2 + k - 1) * z / (gg_.beta_gg * k);
            sum -= term;
            if (std::abs(term) < 1e-17 * std::abs(sum)) break;
        }
        return sum;
    }

    GammaGammaParams gg_;
    MeijerG2112 g_;
    double log_norm_;
    AdaptiveContourOptions opt_;
};

/// Single-element MGF factor (convenience wrapper).
inline double mgf_irs_element(double z, const GammaGammaParams& gg) {
    return IrsElementMgf(gg).factor(z);
}

/// (1/ln 2) int_0^inf (1 - M(z)^N) e^{-z} / z dz for N i.i.d. elements.
inline CapacityEstimate ergodic_capacity_irs(const GammaGammaParams& gg, int n_elements,
                                             const QuadratureOptions& opt = {}) {
    if (n_elements < 1) throw DomainError("ergodic_capacity_irs: need at least one element");
    const IrsElementMgf mgf(gg);
    const double n = n_elements;
    auto integrand = [&](double z) {
        const double damp = std::exp(-z);
        if (damp == 0.0) return 0.0;
        const double c = mgf.complement(z);
        const double one_minus_pow = c >= 1.0 ? 1.0 : -std::expm1(n * std::log1p(-c));
        return one_minus_pow * damp / z;
    };
    return detail::analytic_estimate(integrate_semi_infinite(integrand, opt).value);
}

inline CapacityEstimate ergodic_capacity_irs(const ScenarioIrs& s, Receiver r,
                                             const QuadratureOptions& opt = {}) {
    return ergodic_capacity_irs(irs_element_params(s, r), s.n_elements, opt);
}

inline CapacityEstimate irs_secrecy(const ScenarioIrs& s, const QuadratureOptions& opt = {}) {
    return secrecy_capacity(ergodic_capacity_irs(s, Receiver::legit, opt),
                            ergodic_capacity_irs(s, Receiver::eve, opt));
}

// ---------------------------------------------------------------------------
// Decode-and-forward

/// Survival function of min(g1, gb) for integer shapes:
/// sum_j sum_p beta1^j betab^p g^(j+p) e^{-g (beta1 + betab)} / (j! p!).
inline double df_ccdf(double g, const FadingParams& f1, const FadingParams& fb) {
    const int n1 = integer_shape(f1);
    const int nb = integer_shape(fb);
    if (!(g >= 0.0)) throw DomainError("df_ccdf: need g >= 0");
    if (g == 0.0) return 1.0;
    double sum = 0.0;
    for (int j = 0; j < n1; ++j) {
        for (int p = 0; p < nb; ++p) {
            sum += std::exp(j * std::log(f1.beta * g) + p * std::log(fb.beta * g) -
                            log_gamma(j + 1.0) - log_gamma(p + 1.0));
        }
    }
    return sum * std::exp(-g * (f1.beta + fb.beta));
}

/// Closed form via int g^m e^{-s g} / (1+g) dg = m! U(m+1, m+1, s).
inline CapacityEstimate df_ergodic_capacity(const FadingParams& f1, const FadingParams& fb) {
    const int n1 = integer_shape(f1);
    const int nb = integer_shape(fb);
    const double s = f1.beta + fb.beta;
    double sum = 0.0;
    for (int j = 0; j < n1; ++j) {
        for (int p = 0; p < nb; ++p) {
            const int m = j + p;
            const double coeff = std::exp(j * std::log(f1.beta) + p * std::log(fb.beta) +
                                          log_gamma(m + 1.0) - log_gamma(j + 1.0) -
                                          log_gamma(p + 1.0));
            sum += coeff * tricomi_u_integer(m, s);
        }
    }
    return detail::analytic_estimate(sum);
}

/// Same quantity with each moment integral written as
/// s^{-m-1} G^{2,1}_{1,2}(s | 1; 1, m+1) and evaluated on the contour engine.
inline CapacityEstimate df_ergodic_capacity_mellin_barnes(const FadingParams& f1,
                                                          const FadingParams& fb) {
    const int n1 = integer_shape(f1);
    const int nb = integer_shape(fb);
    const double s = f1.beta + fb.beta;
    std::vector<double> moment(static_cast<std::size_t>(n1 + nb - 1));
    for (std::size_t m = 0; m < moment.size(); ++m) {
        const double md = static_cast<double>(m);
        moment[m] = std::pow(s, -md - 1.0) * meijer_g_2_1_1_2(s, 1.0, 1.0, md + 1.0).value;
    }
    double sum = 0.0;
    for (int j = 0; j < n1; ++j) {
        for (int p = 0; p < nb; ++p) {
            sum += std::exp(j * std::log(f1.beta) + p * std::log(fb.beta) - log_gamma(j + 1.0) -
                            log_gamma(p + 1.0)) *
                   moment[static_cast<std::size_t>(j + p)];
        }
    }
    return detail::analytic_estimate(sum);
}

/// (1/ln 2) int_0^inf CCDF(g) / (1 + g) dg with the DF survival function.
inline CapacityEstimate df_ergodic_capacity_quadrature(const FadingParams& f1,
                                                       const FadingParams& fb,
                                                       const QuadratureOptions& opt = {}) {
    integer_shape(f1);
    integer_shape(fb);
    auto integrand = [&](double g) { return df_ccdf(g, f1, fb) / (1.0 + g); };
    return detail::analytic_estimate(integrate_semi_infinite(integrand, opt).value);
}

inline CapacityEstimate df_ergodic(const ScenarioRelay& s, Receiver r) {
    return df_ergodic_capacity(relay_first_hop(s), relay_second_hop(s, r));
}

inline CapacityEstimate df_secrecy(const ScenarioRelay& s) {
    return secrecy_capacity(df_ergodic(s, Receiver::legit), df_ergodic(s, Receiver::eve));
}

// ---------------------------------------------------------------------------
// Fixed-gain amplify-and-forward, end-to-end SNR g1 gb / (g1 + l)

/// l = mean first-hop SNR + 1 (f1 already SNR-scaled).
inline double affg_snr_constant(const FadingParams& f1) {
    validate(f1);
    return f1.mean() + 1.0;
}

/// P[g1 gb / (g1 + l) > g]. Conditioning on g1 and expanding the integer-shape
/// survival function of gb gives
///   sum_{j<alpha_b} sum_{k<=j} C(j,k) l^k (beta_b g)^j beta_1^alpha_1 / (j! Gamma(alpha_1))
///   e^{-beta_b g} 2 (beta_b l g / beta_1)^{u/2} K_u(2 sqrt(g beta_1 beta_b l)),  u = alpha_1 - k.
inline double affg_ccdf(double g, const FadingParams& f1, const FadingParams& fb, double l) {
    validate(f1);
    const int nb = integer_shape(fb);
    if (!(g >= 0.0)) throw DomainError("affg_ccdf: need g >= 0");
    if (!(l > 0.0)) throw DomainError("affg_ccdf: need l > 0");
    if (g == 0.0) return 1.0;
    const double b1 = f1.beta;
    const double bb = fb.beta;
    const double a1 = f1.alpha;
    const double x = 2.0 * std::sqrt(g * b1 * bb * l);
    const double log_ratio = std::log(bb * l * g / b1);
    const double log_common = a1 * std::log(b1) - log_gamma(a1) - bb * g + std::log(2.0) - x;
    double sum = 0.0;
    for (int j = 0; j < nb; ++j) {
        for (int k = 0; k <= j; ++k) {
            const double u = a1 - k;
            const double log_binom = log_gamma(j + 1.0) - log_gamma(k + 1.0) - log_gamma(j - k + 1.0);
            const double log_term = log_common + log_binom + k * std::log(l) +
                                    j * std::log(bb * g) - log_gamma(j + 1.0) +
                                    0.5 * u * log_ratio;
            sum += std::exp(log_term) * bessel_k_scaled(u, x);
        }
    }
    return std::clamp(sum, 0.0, 1.0);
}

inline CapacityEstimate affg_ergodic_capacity(const FadingParams& f1, const FadingParams& fb,
                                              double l, const QuadratureOptions& opt = {}) {
    integer_shape(fb);
    auto integrand = [&](double g) { return affg_ccdf(g, f1, fb, l) / (1.0 + g); };
    return detail::analytic_estimate(integrate_semi_infinite(integrand, opt).value);
}

inline CapacityEstimate affg_ergodic(const ScenarioRelay& s, Receiver r,
                                     const QuadratureOptions& opt = {}) {
    const FadingParams f1 = relay_first_hop(s);
    return affg_ergodic_capacity(f1, relay_second_hop(s, r), affg_snr_constant(f1), opt);
}

inline CapacityEstimate affg_secrecy(const ScenarioRelay& s, const QuadratureOptions& opt = {}) {
    return secrecy_capacity(affg_ergodic(s, Receiver::legit, opt),
                            affg_ergodic(s, Receiver::eve, opt));
}

}  // namespace plsec
