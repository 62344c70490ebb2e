#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "plsec/analytic.hpp"
#include "plsec/channels.hpp"
#include "plsec/quadrature.hpp"

namespace {

using namespace plsec;

constexpr double kLn2 = std::numbers::ln2;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

ScenarioIrs reference_irs(double power_db = 20.0) {
    ScenarioIrs s;
    s.fading_ts = s.fading_sl = s.fading_se = {2.0, 1.0};
    s.tx_power_db = power_db;
    return s;
}

ScenarioRelay reference_relay(double power_db = 20.0) {
    ScenarioRelay s;
    s.fading_1 = s.fading_2 = s.fading_3 = {2.0, 1.0};
    s.tx_power_db = power_db;
    return s;
}

// E[log2(1 + g)] for a single Gamma-Gamma element, straight from its density.
double single_element_capacity(const GammaGammaParams& gg) {
    auto f = [&](double g) { return g == 0.0 ? 0.0 : std::log1p(g) * gamma_gamma_pdf(g, gg); };
    return integrate_semi_infinite(f, {1e-11, 1e-300, 400000}).value / kLn2;
}

// P[g1 gb / (g1 + l) <= g] by nested quadrature of the joint Gamma density.
double affg_cdf_double_integral(double g, const FadingParams& f1, const FadingParams& fb, double l) {
    auto outer = [&](double g1) {
        if (g1 == 0.0) return 0.0;
        const double limit = g * (g1 + l) / g1;
        auto inner = [&](double gb) { return gamma_pdf(gb, fb); };
        const double p = integrate(inner, 0.0, limit, {1e-12, 1e-300, 200000}).value;
        return gamma_pdf(g1, f1) * p;
    };
    return integrate_semi_infinite(outer, {1e-11, 1e-300, 400000}).value;
}

TEST(ElementMgf, NearOneAtOrigin) {
    const GammaGammaParams gg{2.0, 4.0, 0.0};
    EXPECT_NEAR(mgf_irs_element(1e-9, gg), 1.0, 1e-6);
    EXPECT_LE(mgf_irs_element(1e-9, gg), 1.0);
}

TEST(ElementMgf, DecreasingInZ) {
    const IrsElementMgf m(GammaGammaParams{2.5, 3.0, 1.0});
    double prev = 1.0;
    for (double z = 1e-4; z < 1e4; z *= 1.7) {
        const double v = m.factor(z);
        EXPECT_GT(v, 0.0);
        EXPECT_LT(v, prev) << z;
        prev = v;
    }
}

TEST(ElementMgf, MatchesLaplaceTransformOfDensity) {
    for (const GammaGammaParams gg : {GammaGammaParams{2.0, 4.0, 0.0}, GammaGammaParams{2.5, 1e-3, -1.0},
                                      GammaGammaParams{3.0, 50.0, 2.0}}) {
        const IrsElementMgf m(gg);
        for (double z : {0.1, 1.0, 10.0}) {
            auto f = [&](double g) { return g == 0.0 ? 0.0 : std::exp(-z * g) * gamma_gamma_pdf(g, gg); };
            const double q = integrate_semi_infinite(f, {1e-12, 1e-300, 400000}).value;
            EXPECT_LT(rel(m.factor(z), q), 1e-6) << gg.alpha_gg << " " << gg.beta_gg << " " << z;
            EXPECT_LT(rel(m.complement(z), 1.0 - q), 1e-6) << gg.alpha_gg << " " << gg.beta_gg << " " << z;
        }
    }
}

TEST(ElementMgf, FactorAndComplementAddToOne) {
    const IrsElementMgf m(GammaGammaParams{2.0, 1e-4, 0.0});
    for (double z : {1e-9, 1e-6, 1e-4, 1e-3, 1.0, 100.0}) {
        EXPECT_NEAR(m.factor(z) + m.complement(z), 1.0, 1e-12) << z;
    }
}

TEST(ElementMgf, SmallZComplementIsMeanTimesZ) {
    // 1 - M(z) ~ E[g] z
    const GammaGammaParams gg{2.0, 0.5, 0.0};
    const IrsElementMgf m(gg);
    EXPECT_LT(rel(m.complement(1e-9), gg.mean() * 1e-9), 1e-6);
}

TEST(ElementMgf, RejectsBadInput) {
    EXPECT_THROW(mgf_irs_element(0.0, GammaGammaParams{2.0, 1.0, 0.0}), DomainError);
    EXPECT_THROW(IrsElementMgf(GammaGammaParams{2.0, 0.0, 0.0}), DomainError);
}

TEST(IrsCapacity, SingleElementMatchesDirectExpectation) {
    for (const GammaGammaParams gg : {GammaGammaParams{2.0, 4.0, 0.0}, GammaGammaParams{2.0, 1e-2, 0.0},
                                      GammaGammaParams{2.5, 0.3, 1.0}}) {
        const double c = ergodic_capacity_irs(gg, 1).bits_per_sec_hz;
        EXPECT_LT(rel(c, single_element_capacity(gg)), 1e-7) << gg.beta_gg;
    }
}

TEST(IrsCapacity, MoreElementsMoreCapacity) {
    const GammaGammaParams gg{2.0, 4.0, 0.0};
    double prev = 0.0;
    for (int n : {1, 2, 4, 16, 64}) {
        const double c = ergodic_capacity_irs(gg, n).bits_per_sec_hz;
        EXPECT_GT(c, prev) << n;
        prev = c;
    }
}

TEST(IrsCapacity, VanishesWithoutPower) {
    ScenarioIrs s = reference_irs(-200.0);
    EXPECT_LT(ergodic_capacity_irs(s, Receiver::legit).bits_per_sec_hz, 1e-9);
    EXPECT_EQ(ergodic_capacity_irs(s, Receiver::legit).method, Method::analytic);
}

TEST(IrsCapacity, RejectsEmptySurface) {
    EXPECT_THROW(ergodic_capacity_irs(GammaGammaParams{2.0, 1.0, 0.0}, 0), DomainError);
}

TEST(SecrecyCombiner, Arithmetic) {
    const CapacityEstimate a{2.0, Method::analytic, 0.0, 0};
    const CapacityEstimate b{0.5, Method::analytic, 0.0, 0};
    EXPECT_DOUBLE_EQ(secrecy_capacity(a, b).bits_per_sec_hz, 1.5);
    EXPECT_DOUBLE_EQ(secrecy_capacity(b, a).bits_per_sec_hz, 0.0);
    EXPECT_DOUBLE_EQ(secrecy_capacity(a, a).bits_per_sec_hz, 0.0);
}

TEST(SecrecyCombiner, StandardErrorsInQuadrature) {
    const CapacityEstimate a{2.0, Method::monte_carlo, 0.03, 1000};
    const CapacityEstimate b{1.0, Method::monte_carlo, 0.04, 1000};
    const auto s = secrecy_capacity(a, b);
    EXPECT_NEAR(s.std_error, 0.05, 1e-15);
    EXPECT_EQ(s.method, Method::monte_carlo);
    EXPECT_EQ(s.samples, 1000);
}

TEST(DfSurvival, BasicForms) {
    const FadingParams f1{1.0, 0.4};
    const FadingParams fb{1.0, 0.6};
    EXPECT_EQ(df_ccdf(0.0, f1, fb), 1.0);
    for (double g : {0.1, 1.0, 5.0}) EXPECT_NEAR(df_ccdf(g, f1, fb), std::exp(-g), 1e-15);
    EXPECT_THROW(df_ccdf(1.0, {2.5, 1.0}, fb), ParameterError);
}

TEST(DfSurvival, ProductOfHopSurvivals) {
    for (int a1 = 1; a1 <= 4; ++a1) {
        for (int ab = 1; ab <= 4; ++ab) {
            const FadingParams f1{double(a1), 0.7};
            const FadingParams fb{double(ab), 2.0};
            for (double g : {0.0, 0.05, 0.5, 2.0, 10.0}) {
                EXPECT_NEAR(df_ccdf(g, f1, fb), gamma_ccdf_series(g, f1) * gamma_ccdf_series(g, fb), 1e-12);
            }
        }
    }
}

TEST(DfCapacity, ExponentialClosedForm) {
    const double expect = std::exp(1.0) * expint_e1(1.0) / kLn2;
    const auto c = df_ergodic_capacity({1.0, 0.3}, {1.0, 0.7});
    EXPECT_NEAR(c.bits_per_sec_hz, expect, 1e-12);
    EXPECT_NEAR(c.bits_per_sec_hz, 0.86034, 1e-5);
}

TEST(DfCapacity, ThreeEvaluationRoutesAgree) {
    for (int a1 = 1; a1 <= 3; ++a1) {
        for (int ab = 1; ab <= 3; ++ab) {
            for (double b : {0.5, 1.0, 5.0}) {
                const FadingParams f1{double(a1), b};
                const FadingParams fb{double(ab), 0.5 * b};
                const double u = df_ergodic_capacity(f1, fb).bits_per_sec_hz;
                const double mb = df_ergodic_capacity_mellin_barnes(f1, fb).bits_per_sec_hz;
                const double q = df_ergodic_capacity_quadrature(f1, fb, {1e-11, 1e-300, 200000}).bits_per_sec_hz;
                EXPECT_LT(rel(u, q), 1e-8) << a1 << " " << ab << " " << b;
                EXPECT_LT(rel(u, mb), 1e-7) << a1 << " " << ab << " " << b;
            }
        }
    }
}

TEST(DfCapacity, WeakerSecondHopLowersCapacity) {
    double prev = 1e300;
    for (double bb = 0.1; bb < 20.0; bb *= 1.5) {
        const double c = df_ergodic_capacity({2.0, 1.0}, {3.0, bb}).bits_per_sec_hz;
        EXPECT_LT(c, prev);
        prev = c;
    }
}

TEST(DfSecrecy, SymmetricReceiversGiveZero) {
    ScenarioRelay s = reference_relay();
    s.geometry.d_node_eve = s.geometry.d_node_legit;
    EXPECT_EQ(df_secrecy(s).bits_per_sec_hz, 0.0);
}

TEST(DfSecrecy, PlateausAtHighPower) {
    // equal high-SNR slopes at L and E: the difference settles
    const double a = df_secrecy(reference_relay(80.0)).bits_per_sec_hz;
    const double b = df_secrecy(reference_relay(100.0)).bits_per_sec_hz;
    const double c = df_secrecy(reference_relay(120.0)).bits_per_sec_hz;
    EXPECT_LT(std::abs(c - b), std::abs(b - a) + 1e-6);
    EXPECT_LT(std::abs(c - b), 1e-3);
}

TEST(AffgConstant, MeanPlusOne) {
    EXPECT_DOUBLE_EQ(affg_snr_constant({2.0, 2.0}), 2.0);
    EXPECT_NEAR(affg_snr_constant({2.0, 1e12}), 1.0, 1e-11);
    const double base = affg_snr_constant({3.0, 1.5}) - 1.0;
    const double scaled = affg_snr_constant(snr_scaled_params({3.0, 1.5}, 10.0)) - 1.0;
    EXPECT_NEAR(scaled, 10.0 * base, 1e-12);
}

TEST(AffgSurvival, OriginAndRange) {
    const FadingParams f1{2.0, 0.5};
    const FadingParams fb{3.0, 1.0};
    EXPECT_EQ(affg_ccdf(0.0, f1, fb, 5.0), 1.0);
    double prev = 1.0;
    for (double g = 0.01; g < 100.0; g *= 2.0) {
        const double v = affg_ccdf(g, f1, fb, 5.0);
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, prev);
        prev = v;
    }
    EXPECT_THROW(affg_ccdf(1.0, f1, {2.5, 1.0}, 5.0), ParameterError);
    EXPECT_THROW(affg_ccdf(1.0, f1, fb, 0.0), DomainError);
}

TEST(AffgSurvival, MatchesDoubleIntegral) {
    struct Case {
        FadingParams f1, fb;
    };
    for (const Case c : {Case{{2, 1}, {2, 1}}, Case{{1, 0.2}, {3, 0.5}}, Case{{3, 2}, {1, 0.1}}, Case{{2.5, 1}, {2, 4}}}) {
        const double l = affg_snr_constant(c.f1);
        for (double g : {0.1, 1.0, 5.0}) {
            const double expect = 1.0 - affg_cdf_double_integral(g, c.f1, c.fb, l);
            EXPECT_NEAR(affg_ccdf(g, c.f1, c.fb, l), expect, 1e-6) << c.f1.alpha << " " << c.fb.alpha << " " << g;
        }
    }
}

TEST(AffgSurvival, MatchesEmpiricalSurvival) {
    const FadingParams f1{2.0, 0.5};
    const FadingParams fb{2.0, 0.25};
    const double l = affg_snr_constant(f1);
    const std::vector<double> points{0.1, 1.0, 5.0};
    std::vector<double> above(points.size(), 0.0);
    RandomStream rng(2024, 0);
    const int n = 2'000'000;
    for (int i = 0; i < n; ++i) {
        const double g1 = sample_gamma(f1, rng);
        const double gb = sample_gamma(fb, rng);
        const double g = g1 * gb / (g1 + l);
        for (std::size_t k = 0; k < points.size(); ++k) above[k] += g > points[k];
    }
    for (std::size_t k = 0; k < points.size(); ++k) {
        const double p = above[k] / n;
        const double se = std::sqrt(p * (1.0 - p) / n);
        EXPECT_NEAR(affg_ccdf(points[k], f1, fb, l), p, 3.0 * se + 1e-12) << points[k];
    }
}

TEST(AffgCapacity, SymmetricReceiversGiveZero) {
    ScenarioRelay s = reference_relay();
    s.geometry.d_node_eve = s.geometry.d_node_legit;
    EXPECT_EQ(affg_secrecy(s).bits_per_sec_hz, 0.0);
}

TEST(AffgCapacity, NeverAboveDecodeAndForward) {
    for (double p = 0.0; p <= 60.0; p += 5.0) {
        const ScenarioRelay s = reference_relay(p);
        for (Receiver r : {Receiver::legit, Receiver::eve}) {
            EXPECT_LE(affg_ergodic(s, r).bits_per_sec_hz, df_ergodic(s, r).bits_per_sec_hz) << p;
        }
    }
}

TEST(AffgCapacity, LargeConstantDrivesCapacityToZero) {
    const FadingParams f1{2.0, 0.5};
    const FadingParams fb{2.0, 0.5};
    double prev = 1e300;
    for (double l : {1.0, 1e2, 1e4, 1e8}) {
        const double c = affg_ergodic_capacity(f1, fb, l).bits_per_sec_hz;
        EXPECT_LT(c, prev);
        prev = c;
    }
    EXPECT_LT(prev, 1e-6);
}

TEST(AllArchitectures, NondecreasingInPower) {
    double prev[6] = {0, 0, 0, 0, 0, 0};
    for (double p = -10.0; p <= 60.0; p += 5.0) {
        const ScenarioIrs si = reference_irs(p);
        const ScenarioRelay sr = reference_relay(p);
        const double now[6] = {ergodic_capacity_irs(si, Receiver::legit).bits_per_sec_hz,
                               ergodic_capacity_irs(si, Receiver::eve).bits_per_sec_hz,
                               df_ergodic(sr, Receiver::legit).bits_per_sec_hz,
                               df_ergodic(sr, Receiver::eve).bits_per_sec_hz,
                               affg_ergodic(sr, Receiver::legit).bits_per_sec_hz,
                               affg_ergodic(sr, Receiver::eve).bits_per_sec_hz};
        for (int k = 0; k < 6; ++k) {
            EXPECT_GE(now[k], 0.0);
            EXPECT_GE(now[k], prev[k]) << k << " at " << p;
            prev[k] = now[k];
        }
    }
}

TEST(AllArchitectures, SnrPreservingRescaleLeavesSecrecyUnchanged) {
    ScenarioIrs si = reference_irs(17.0);
    ScenarioRelay sr = reference_relay(17.0);
    const double base[3] = {irs_secrecy(si).bits_per_sec_hz, df_secrecy(sr).bits_per_sec_hz,
                            affg_secrecy(sr).bits_per_sec_hz};
    si.tx_power_db += 10.0;
    sr.tx_power_db += 10.0;
    si.noise = {10.0, 10.0, 10.0};
    sr.noise = {10.0, 10.0, 10.0};
    const double scaled[3] = {irs_secrecy(si).bits_per_sec_hz, df_secrecy(sr).bits_per_sec_hz,
                              affg_secrecy(sr).bits_per_sec_hz};
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(scaled[k], base[k], 1e-9) << k;
}

TEST(AllArchitectures, SecrecyIsCombinerOfErgodics) {
    const ScenarioIrs si = reference_irs(30.0);
    const ScenarioRelay sr = reference_relay(30.0);
    EXPECT_EQ(irs_secrecy(si).bits_per_sec_hz,
              secrecy_capacity(ergodic_capacity_irs(si, Receiver::legit), ergodic_capacity_irs(si, Receiver::eve))
                  .bits_per_sec_hz);
    EXPECT_EQ(df_secrecy(sr).bits_per_sec_hz,
              secrecy_capacity(df_ergodic(sr, Receiver::legit), df_ergodic(sr, Receiver::eve)).bits_per_sec_hz);
    EXPECT_EQ(affg_secrecy(sr).bits_per_sec_hz,
              secrecy_capacity(affg_ergodic(sr, Receiver::legit), affg_ergodic(sr, Receiver::eve))
                  .bits_per_sec_hz);
}

TEST(AllArchitectures, SymmetricSurfaceGivesZero) {
    ScenarioIrs s = reference_irs();
    s.geometry.d_node_eve = s.geometry.d_node_legit;
    EXPECT_EQ(irs_secrecy(s).bits_per_sec_hz, 0.0);
}

}  // namespace
