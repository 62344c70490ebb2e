#pragma once

// Fading distributions, pathloss/SNR scaling, scenario descriptions and
// random samplers for the reflecting-surface and relay links.
//
// Convention: a squared channel gain |g|^2 ~ Gamma(alpha, beta) with alpha
// the shape and beta the rate, i.e. density beta^alpha x^(alpha-1) e^(-beta x) / Gamma(alpha).

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>

#include "plsec/errors.hpp"
#include "plsec/specfun.hpp"

namespace plsec {

struct FadingParams {
    double alpha = 1.0;  // shape
    double beta = 1.0;   // rate

    double mean() const { return alpha / beta; }
};

inline void validate(const FadingParams& p) {
    if (!(p.alpha > 0.0) || !(p.beta > 0.0) || !std::isfinite(p.alpha) || !std::isfinite(p.beta)) {
        throw DomainError("FadingParams: alpha and beta must be positive and finite");
    }
}

inline bool has_integer_shape(const FadingParams& p) {
    return p.alpha >= 1.0 && p.alpha == std::floor(p.alpha) && p.alpha < 1e6;
}

/// Shape as an integer; throws ParameterError for the series forms that need one.
inline int integer_shape(const FadingParams& p) {
    if (!has_integer_shape(p)) {
        throw ParameterError("series CDF form requires a positive integer shape, got alpha = " +
                             std::to_string(p.alpha));
    }
    return static_cast<int>(p.alpha);
}

struct Geometry {
    double d_source_node = 10.0;     // T -> surface / relay
    double d_node_legit = 10.0;      // surface / relay -> L
    double d_node_eve = 20.0;        // surface / relay -> E
    double pathloss_exponent = 2.0;  // zeta
};

enum class Receiver { legit, eve };

struct NoisePowers {
    double relay = 1.0;
    double legit = 1.0;
    double eve = 1.0;

    double at(Receiver r) const { return r == Receiver::legit ? legit : eve; }
};

struct ScenarioIrs {
    int n_elements = 4;
    Geometry geometry;
    FadingParams fading_ts;  // T -> surface
    FadingParams fading_sl;  // surface -> L
    FadingParams fading_se;  // surface -> E
    double tx_power_db = 20.0;
    NoisePowers noise;
};

enum class RelayGainMode { fixed };

struct ScenarioRelay {
    Geometry geometry;
    FadingParams fading_1;  // T -> R
    FadingParams fading_2;  // R -> L
    FadingParams fading_3;  // R -> E
    double tx_power_db = 20.0;
    NoisePowers noise;
    RelayGainMode gain_mode = RelayGainMode::fixed;
};

/// Distribution of a product of two independent Gamma variables.
struct GammaGammaParams {
    double alpha_gg = 1.0;  // (alpha_first + alpha_second) / 2
    double beta_gg = 1.0;   // beta_first * beta_second (after SNR folding)
    double order = 0.0;     // alpha_first - alpha_second

    double shape_first() const { return alpha_gg + 0.5 * order; }
    double shape_second() const { return alpha_gg - 0.5 * order; }
    double mean() const { return shape_first() * shape_second() / beta_gg; }
};

// ---------------------------------------------------------------------------
// Pathloss and SNR scaling

inline double pathloss(double d, double zeta) {
    if (!(d > 0.0)) throw DomainError("pathloss: distance must be positive");
    return std::pow(d, -zeta);
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// If X ~ Gamma(alpha, beta) then scale * X ~ Gamma(alpha, beta / scale).
inline FadingParams snr_scaled_params(const FadingParams& fading, double scale) {
    if (!(scale > 0.0)) throw DomainError("snr_scaled_params: scale must be positive");
    return {fading.alpha, fading.beta / scale};
}

inline GammaGammaParams gamma_gamma_params(const FadingParams& first, const FadingParams& second,
                                           double scale = 1.0) {
    validate(first);
    validate(second);
    if (!(scale > 0.0)) throw DomainError("gamma_gamma_params: scale must be positive");
    return {0.5 * (first.alpha + second.alpha), first.beta * second.beta / scale,
            first.alpha - second.alpha};
}

/// P_S d_TS^-zeta d_Si^-zeta / w_i, the factor multiplying |g_T g_i|^2 per element.
inline double irs_snr_scale(const ScenarioIrs& s, Receiver r) {
    const auto& g = s.geometry;
    const double d_i = r == Receiver::legit ? g.d_node_legit : g.d_node_eve;
    return db_to_linear(s.tx_power_db) * pathloss(g.d_source_node, g.pathloss_exponent) *
           pathloss(d_i, g.pathloss_exponent) / s.noise.at(r);
}

inline GammaGammaParams irs_element_params(const ScenarioIrs& s, Receiver r) {
    const FadingParams& second = r == Receiver::legit ? s.fading_sl : s.fading_se;
    return gamma_gamma_params(s.fading_ts, second, irs_snr_scale(s, r));
}

inline double relay_first_hop_scale(const ScenarioRelay& s) {
    return db_to_linear(s.tx_power_db) *
           pathloss(s.geometry.d_source_node, s.geometry.pathloss_exponent) / s.noise.relay;
}

inline double relay_second_hop_scale(const ScenarioRelay& s, Receiver r) {
    const double d = r == Receiver::legit ? s.geometry.d_node_legit : s.geometry.d_node_eve;
    return db_to_linear(s.tx_power_db) * pathloss(d, s.geometry.pathloss_exponent) /
           s.noise.at(r);
}

/// First-hop SNR distribution (T -> R).
inline FadingParams relay_first_hop(const ScenarioRelay& s) {
    validate(s.fading_1);
    return snr_scaled_params(s.fading_1, relay_first_hop_scale(s));
}

/// Second-hop SNR distribution (R -> L or R -> E).
inline FadingParams relay_second_hop(const ScenarioRelay& s, Receiver r) {
    const FadingParams& f = r == Receiver::legit ? s.fading_2 : s.fading_3;
    validate(f);
    return snr_scaled_params(f, relay_second_hop_scale(s, r));
}

// ---------------------------------------------------------------------------
// Gamma family

inline double gamma_pdf(double g, const FadingParams& p) {
    if (!(g >= 0.0)) throw DomainError("gamma_pdf: need g >= 0");
    if (g == 0.0) {
        if (p.alpha > 1.0) return 0.0;
        if (p.alpha == 1.0) return p.beta;
        return std::numeric_limits<double>::infinity();
    }
    return std::exp(p.alpha * std::log(p.beta) + (p.alpha - 1.0) * std::log(g) - p.beta * g -
                    log_gamma(p.alpha));
}

inline double gamma_cdf(double g, const FadingParams& p) {
    if (!(g >= 0.0)) throw DomainError("gamma_cdf: need g >= 0");
    return regularized_gamma_p(p.alpha, p.beta * g);
}

inline double gamma_ccdf(double g, const FadingParams& p) {
    if (!(g >= 0.0)) throw DomainError("gamma_ccdf: need g >= 0");
    return regularized_gamma_q(p.alpha, p.beta * g);
}

/// sum_{j < alpha} (beta g)^j e^{-beta g} / j!  (integer shapes only).
inline double gamma_ccdf_series(double g, const FadingParams& p) {
    const int n = integer_shape(p);
    if (!(g >= 0.0)) throw DomainError("gamma_ccdf_series: need g >= 0");
    const double bg = p.beta * g;
    double term = 1.0;
    double sum = 1.0;
    for (int j = 1; j < n; ++j) {
        term *= bg / j;
        sum += term;
    }
    return sum * std::exp(-bg);
}

/// Density of the Gamma-Gamma product:
/// 2 beta^alpha g^(alpha-1) K_v(2 sqrt(g beta)) / (Gamma(a1) Gamma(a2)).
inline double gamma_gamma_pdf(double g, const GammaGammaParams& gg) {
    if (!(g >= 0.0)) throw DomainError("gamma_gamma_pdf: need g >= 0");
    const double a1 = gg.shape_first();
    const double a2 = gg.shape_second();
    const double log_norm = log_gamma(a1) + log_gamma(a2);
    if (g == 0.0) {
        const double lo = std::min(a1, a2);
        const double nu = std::abs(gg.order);
        if (lo > 1.0) return 0.0;
        if (lo == 1.0 && nu > 0.0) {
            // g^(lo-1) K_nu(2 sqrt(g beta)) -> Gamma(nu)/2 (g beta)^(-nu/2)
            return std::exp(lo * std::log(gg.beta_gg) + log_gamma(nu) - log_norm);
        }
        throw DomainError("gamma_gamma_pdf: density unbounded at 0 for these shapes");
    }
    const double x = 2.0 * std::sqrt(g * gg.beta_gg);
    const double log_k = std::log(bessel_k_scaled(gg.order, x)) - x;
    return std::exp(std::log(2.0) + gg.alpha_gg * std::log(gg.beta_gg) +
                    (gg.alpha_gg - 1.0) * std::log(g) + log_k - log_norm);
}

// ---------------------------------------------------------------------------
// Sampling

/// Independent, reproducible random stream identified by (master seed, index).
class RandomStream {
public:
    RandomStream(std::uint64_t master_seed, std::uint64_t stream_index) {
        std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                          static_cast<std::uint32_t>(master_seed >> 32),
                          static_cast<std::uint32_t>(stream_index),
                          static_cast<std::uint32_t>(stream_index >> 32), 0x5eedu};
        engine_.seed(seq);
    }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal by the Marsaglia polar method.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u;
        double v;
        double s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Gamma(alpha, beta) by Marsaglia-Tsang; shapes below one use the
/// Gamma(alpha + 1) * U^(1/alpha) boost.
inline double sample_gamma(const FadingParams& p, RandomStream& rng) {
    double boost = 1.0;
    double a = p.alpha;
    if (a < 1.0) {
        boost = std::pow(rng.uniform(), 1.0 / a);
        a += 1.0;
    }
    const double d = a - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2 ||
            std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
            return boost * d * v / p.beta;
        }
    }
}

inline double sample_gamma_gamma(const FadingParams& first, const FadingParams& second,
                                 RandomStream& rng) {
    const double x = sample_gamma(first, rng);
    return x * sample_gamma(second, rng);
}

}  // namespace plsec
