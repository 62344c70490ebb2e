#pragma once

// Meijer G instances evaluated as Mellin-Barnes integrals on a vertical line:
//
//   G^{2,1}_{1,2}(x | a1; b1, b2) = 1/(2 pi i) int G(b1+s) G(b2+s) G(1-a1-s) x^{-s} ds
//   G^{2,0}_{0,2}(x | -; b1, b2)  = 1/(2 pi i) int G(b1+s) G(b2+s) x^{-s} ds
//
// The line must separate the left poles (of G(b+s)) from the right ones
// (of G(1-a-s)).

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <memory>
#include <vector>

#include "plsec/errors.hpp"
#include "plsec/quadrature.hpp"
#include "plsec/specfun.hpp"

namespace plsec {

struct MeijerResult {
    double value = 0.0;
    double error_estimate = 0.0;  // absolute
};

/// Kernel prod_j G(b_j + s) * prod_k G(1 - a_k - s) * x^{-s}.
///
/// The Gamma product does not depend on x, so it is memoized on the dyadic
/// node grid the adaptive trapezoid rule visits. An instance is therefore
/// not safe to share between threads; give each task its own copy.
class MellinBarnesKernel {
public:
    MellinBarnesKernel(std::vector<double> left, std::vector<double> right)
        : left_(std::move(left)), right_(std::move(right)) {
        if (left_.empty()) throw ParameterError("MellinBarnesKernel: need at least one G(b+s)");
    }

    /// Open strip (lower, upper) free of poles; upper is +inf without right factors.
    double strip_lower() const {
        return -*std::min_element(left_.begin(), left_.end());
    }
    double strip_upper() const {
        if (right_.empty()) return std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        for (double a : right_) hi = std::min(hi, 1.0 - a);
        return hi;
    }

    std::complex<double> log_gamma_part(std::complex<double> s) const {
        std::complex<double> acc = 0.0;
        for (double b : left_) acc += log_gamma(b + s);
        for (double a : right_) acc += log_gamma(1.0 - a - s);
        return acc;
    }

    /// Evaluate the kernel at s for argument x, reusing memoized Gamma products.
    std::complex<double> operator()(std::complex<double> s, double log_x) const {
        return std::exp(cached_log_gamma_part(s) - s * log_x);
    }

private:
    static constexpr double kGrid = 1024.0;  // cache resolution in Im(s)

    std::complex<double> cached_log_gamma_part(std::complex<double> s) const {
        const double scaled = std::abs(s.imag()) * kGrid;
        const double idx_f = std::nearbyint(scaled);
        if (idx_f != scaled || idx_f > 1e7) return log_gamma_part(s);
        auto& table = tables_[s.real()];
        const auto idx = static_cast<std::size_t>(idx_f);
        if (idx >= table.size()) {
            table.resize(std::max(idx + 1, 2 * table.size()),
                         std::complex<double>(std::numeric_limits<double>::quiet_NaN(), 0.0));
        }
        auto& slot = table[idx];
        if (std::isnan(slot.real())) {
            slot = log_gamma_part(std::complex<double>(s.real(), std::abs(s.imag())));
        }
        // real parameters: the Gamma product is conjugate-symmetric in Im(s)
        return s.imag() < 0.0 ? std::conj(slot) : slot;
    }

    std::vector<double> left_;
    std::vector<double> right_;
    mutable std::map<double, std::vector<std::complex<double>>> tables_;
};

namespace detail {

inline MeijerResult real_contour_value(const ContourResult& r) {
    const double re = r.value.real();
    const double im = r.value.imag();
    if (std::abs(im) > 1e-9 * std::abs(re) + 1e-300) {
        throw AccuracyError("Meijer G: non-negligible imaginary residue", re, std::abs(im));
    }
    return {re, r.error_estimate};
}

}  // namespace detail

/// G^{2,1}_{1,2}(x | a1; b1, b2) for x > 0 with a reusable kernel cache.
class MeijerG2112 {
public:
    MeijerG2112(double a1, double b1, double b2) : kernel_({b1, b2}, {a1}) {
        if (!(kernel_.strip_lower() < kernel_.strip_upper())) {
            throw ParameterError("meijer_g_2_1_1_2: no separating contour (need -min(b1,b2) < 1-a1)");
        }
    }

    double strip_lower() const { return kernel_.strip_lower(); }
    double strip_upper() const { return kernel_.strip_upper(); }
    double midpoint() const { return 0.5 * (strip_lower() + strip_upper()); }

    /// Contour integral at an arbitrary abscissa (which may lie outside the
    /// fundamental strip; the caller accounts for crossed residues).
    MeijerResult integral(double x, double abscissa, const AdaptiveContourOptions& opt = {}) const {
        if (!(x > 0.0)) throw DomainError("meijer_g_2_1_1_2: need x > 0");
        const double log_x = std::log(x);
        auto f = [&](std::complex<double> s) { return kernel_(s, log_x); };
        return detail::real_contour_value(integrate_vertical_contour_adaptive(f, abscissa, opt));
    }

    /// Line through the saddle of |kernel| on the real axis, which keeps the
    /// integrand from dwarfing the result when x is far from 1. Snapped to
    /// 1/64 of the strip so the kernel cache is reused across nearby x.
    double saddle_abscissa(double x) const {
        const double lo = strip_lower();
        const double width = strip_upper() - lo;
        const double log_x = std::log(x);
        auto f = [&](double c) { return kernel_.log_gamma_part({c, 0.0}).real() - c * log_x; };
        // the real log-magnitude is convex in c inside the strip
        double a = lo + width / 64.0;
        double b = lo + 63.0 * width / 64.0;
        constexpr double kInvPhi = 0.6180339887498949;
        double c1 = b - kInvPhi * (b - a);
        double c2 = a + kInvPhi * (b - a);
        double f1 = f(c1);
        double f2 = f(c2);
        while (b - a > width / 256.0) {
            if (f1 < f2) {
                b = c2;
                c2 = c1;
                f2 = f1;
                c1 = b - kInvPhi * (b - a);
                f1 = f(c1);
            } else {
                a = c1;
                c1 = c2;
                f1 = f2;
                c2 = a + kInvPhi * (b - a);
                f2 = f(c2);
            }
        }
        const double k = std::clamp(std::round((0.5 * (a + b) - lo) / width * 64.0), 1.0, 63.0);
        return lo + k * width / 64.0;
    }

    MeijerResult operator()(double x, const AdaptiveContourOptions& opt = {}) const {
        if (!(x > 0.0)) throw DomainError("meijer_g_2_1_1_2: need x > 0");
        return integral(x, saddle_abscissa(x), opt);
    }

    const MellinBarnesKernel& kernel() const { return kernel_; }

private:
    MellinBarnesKernel kernel_;
};

/// G^{2,1}_{1,2}(x | a1; b1, b2) on the saddle-point line of the pole-free strip.
inline MeijerResult meijer_g_2_1_1_2(double x, double a1, double b1, double b2) {
    return MeijerG2112(a1, b1, b2)(x);
}

/// G^{2,0}_{0,2}(x | -; b1, b2); the line sits one unit right of the left poles.
inline MeijerResult meijer_g_2_0_0_2(double x, double b1, double b2) {
    if (!(x > 0.0)) throw DomainError("meijer_g_2_0_0_2: need x > 0");
    MellinBarnesKernel kernel({b1, b2}, {});
    const double log_x = std::log(x);
    auto f = [&](std::complex<double> s) { return kernel(s, log_x); };
    return detail::real_contour_value(
        integrate_vertical_contour_adaptive(f, kernel.strip_lower() + 1.0));
}

}  // namespace plsec
