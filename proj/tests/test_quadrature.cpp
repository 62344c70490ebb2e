#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "plsec/quadrature.hpp"
#include "plsec/specfun.hpp"

namespace {

using namespace plsec;
using C = std::complex<double>;

TEST(SemiInfinite, Exponential) {
    const auto r = integrate_semi_infinite([](double x) { return std::exp(-x); });
    EXPECT_NEAR(r.value, 1.0, 1e-12);
    EXPECT_GE(r.abs_error_estimate, 0.0);
    EXPECT_LE(r.abs_error_estimate, 1e-8 * r.value);
    EXPECT_GT(r.evaluations, 0);
}

TEST(SemiInfinite, ExponentialOverOnePlusX) {
    const auto r = integrate_semi_infinite([](double x) { return std::exp(-x) / (1.0 + x); });
    EXPECT_NEAR(r.value, tricomi_u_integer(0, 1.0), 1e-10);
    EXPECT_NEAR(r.value, 0.5963474, 1e-7);
}

TEST(SemiInfinite, GaussianMoment) {
    const auto r = integrate_semi_infinite([](double x) { return x * std::exp(-x * x); });
    EXPECT_NEAR(r.value, 0.5, 1e-10);
}

TEST(SemiInfinite, IntegrableEndpointSingularity) {
    // int x^-1/2 e^-x = sqrt(pi)
    const auto r = integrate_semi_infinite([](double x) { return std::exp(-x) / std::sqrt(x); },
                                           1e-10, 200000);
    EXPECT_NEAR(r.value, std::sqrt(std::numbers::pi), 1e-8);
}

TEST(SemiInfinite, RemovableSingularityNeverEvaluatedAtZero) {
    // (1 - e^{-z}) e^{-z} / z integrates to ln 2; evaluating at 0 would give NaN.
    const auto r = integrate_semi_infinite([](double z) {
        EXPECT_GT(z, 0.0);
        return -std::expm1(-z) * std::exp(-z) / z;
    });
    EXPECT_NEAR(r.value, std::numbers::ln2, 1e-10);
}

TEST(SemiInfinite, SlowAlgebraicTail) {
    // int 1/(1+x)^2 = 1
    const auto r = integrate_semi_infinite([](double x) { return 1.0 / ((1.0 + x) * (1.0 + x)); });
    EXPECT_NEAR(r.value, 1.0, 1e-10);
}

TEST(SemiInfinite, BudgetExhaustionCarriesEstimate) {
    auto f = [](double x) { return std::abs(std::sin(50.0 * x)) * std::exp(-x); };
    try {
        integrate_semi_infinite(f, 1e-14, 200);
        FAIL() << "expected AccuracyError";
    } catch (const AccuracyError& e) {
        EXPECT_TRUE(std::isfinite(e.estimate()));
        EXPECT_GT(e.estimate(), 0.0);
        EXPECT_GT(e.error_estimate(), 0.0);
    }
}

TEST(SemiInfinite, EvaluationsWithinBudget) {
    const auto r = integrate_semi_infinite([](double x) { return std::exp(-3.0 * x) * std::cos(x); },
                                           1e-10, 5000);
    EXPECT_LE(r.evaluations, 5000);
    EXPECT_NEAR(r.value, 3.0 / 10.0, 1e-10);
}

TEST(Finite, PolynomialIsExact) {
    const auto r = integrate([](double x) { return 3.0 * x * x; }, 0.0, 2.0);
    EXPECT_NEAR(r.value, 8.0, 1e-13);
}

TEST(Finite, ReversedLimitsNegate) {
    auto f = [](double x) { return std::exp(x); };
    EXPECT_NEAR(integrate(f, 1.0, 0.0).value, -(std::exp(1.0) - 1.0), 1e-12);
}

TEST(Finite, LinearityIsExact) {
    auto f = [](double x) { return std::log1p(x) * std::cos(3.0 * x); };
    const double k = 3.75;
    const auto a = integrate(f, 0.0, 4.0);
    const auto b = integrate([&](double x) { return k * f(x); }, 0.0, 4.0);
    EXPECT_EQ(b.evaluations, a.evaluations);
    EXPECT_NEAR(b.value, k * a.value, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(k * a.value));
}

TEST(Contour, CahenMellin) {
    // 1/(2 pi i) int Gamma(s) x^-s ds = e^-x
    for (double x : {0.2, 1.0, 3.0}) {
        auto k = [&](C s) { return std::exp(log_gamma(s) - s * std::log(x)); };
        const auto r = integrate_vertical_contour_adaptive(k, 0.5);
        EXPECT_NEAR(r.value.real(), std::exp(-x), 1e-8 * std::exp(-x)) << x;
        EXPECT_LE(std::abs(r.value.imag()), 1e-12 * std::abs(r.value.real()));
    }
}

TEST(Contour, FixedSpecCahenMellin) {
    auto k = [](C s) { return std::exp(log_gamma(s)); };
    const C v = integrate_vertical_contour(k, {0.5, 40.0, 4097});
    EXPECT_NEAR(v.real(), std::exp(-1.0), 1e-10);
}

TEST(Contour, DoublingHeightLeavesConvergedValue) {
    auto k = [](C s) { return std::exp(log_gamma(s) - s * std::log(2.0)); };
    const auto r = integrate_vertical_contour_adaptive(k, 0.5);
    ContourSpec taller = r.spec;
    taller.half_height *= 2.0;
    taller.nodes = 2 * taller.nodes - 1;
    const C v = integrate_vertical_contour(k, taller);
    EXPECT_NEAR(v.real(), r.value.real(), 1e-10 * std::abs(r.value.real()));
}

TEST(Contour, GrowingKernelDiverges) {
    auto k = [](C s) { return std::exp(0.5 * std::abs(s.imag())) + 0.0 * s; };
    EXPECT_THROW(integrate_vertical_contour(k, {0.0, 30.0, 257}), DivergenceError);
}

TEST(Contour, SpecValidation) {
    auto k = [](C s) { return std::exp(log_gamma(s)); };
    EXPECT_THROW(integrate_vertical_contour(k, {0.5, 0.0, 257}), ParameterError);
    EXPECT_THROW(integrate_vertical_contour(k, {0.5, 10.0, 63}), ParameterError);
}

}  // namespace
