#pragma once

// Adaptive integration on finite and semi-infinite intervals (globally
// adaptive Gauss-Kronrod 7/15), and trapezoidal integration along vertical
// lines in the complex plane for Mellin-Barnes integrals.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

#include "plsec/errors.hpp"

namespace plsec {

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::int64_t evaluations = 0;
};

struct QuadratureOptions {
    double tol_rel = 1e-8;
    double tol_abs = 1e-300;
    std::int64_t budget = 200000;
};

namespace detail {

// Gauss-Kronrod 15-point abscissae (positive half, descending) and weights.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

// One Gauss-Kronrod panel with the QUADPACK error heuristic. Nodes are
// interior, so integrable endpoint singularities are never sampled.
template <typename F>
Segment gk15(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::abs(resk);
    std::array<double, 7> f1{};
    std::array<double, 7> f2{};
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        f1[j] = f(center - dx);
        f2[j] = f(center + dx);
        const double sum = f1[j] + f2[j];
        resk += kWgk[j] * sum;
        resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) resg += kWg[j / 2] * sum;
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) {
        resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
    }
    resk *= half;
    resg *= half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs(resk - resg);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    const double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
        err = std::max(50.0 * eps * resabs, err);
    }
    return {a, b, resk, err};
}

}  // namespace detail

/// Integrate f over [a, b] by global adaptive bisection.
/// Throws AccuracyError (carrying the best estimate) when the evaluation
/// budget runs out before the tolerance is met.
template <typename F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
    constexpr std::int64_t kPanel = 15;
    if (opt.budget < kPanel) throw DomainError("integrate: budget below one panel");
    if (a == b) return {0.0, 0.0, 0};
    std::priority_queue<detail::Segment> heap;
    auto first = detail::gk15(f, a, b);
    std::int64_t evals = kPanel;
    double total = first.value;
    double total_err = first.error;
    heap.push(first);
    auto converged = [&] {
        return total_err <= std::max(opt.tol_rel * std::abs(total), opt.tol_abs);
    };
    while (!converged()) {
        if (evals + 2 * kPanel > opt.budget) {
            throw AccuracyError("integrate: evaluation budget exhausted", total, total_err);
        }
        const detail::Segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b))) {
            // interval cannot be split further in double precision
            throw AccuracyError("integrate: roundoff limits subdivision", total, total_err);
        }
        heap.pop();
        const auto left = detail::gk15(f, worst.a, mid);
        const auto right = detail::gk15(f, mid, worst.b);
        evals += 2 * kPanel;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed accumulated cancellation from the running updates.
    double value = 0.0;
    double err = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    return {value, err, evals};
}

/// Integrate f over (0, inf) through x = t / (1 - t), t in (0, 1). The rule
/// never evaluates f at 0, so removable or integrable singularities there are fine.
template <typename F>
QuadratureResult integrate_semi_infinite(F&& f, const QuadratureOptions& opt = {}) {
    auto mapped = [&f](double t) {
        const double one_minus = 1.0 - t;
        const double x = t / one_minus;
        const double jac = 1.0 / (one_minus * one_minus);
        const double fx = f(x);
        if (fx == 0.0) return 0.0;
        return fx * jac;
    };
    return integrate(mapped, 0.0, 1.0, opt);
}

template <typename F>
QuadratureResult integrate_semi_infinite(F&& f, double tol_rel, std::int64_t budget) {
    QuadratureOptions opt;
    opt.tol_rel = tol_rel;
    opt.budget = budget;
    return integrate_semi_infinite(std::forward<F>(f), opt);
}

// ---------------------------------------------------------------------------
// Vertical contours

/// Truncated vertical line Re(s) = abscissa, |Im(s)| <= half_height,
/// sampled at `nodes` equally spaced points (odd count, centre included).
struct ContourSpec {
    double abscissa = 0.0;
    double half_height = 16.0;
    int nodes = 257;
};

inline void validate(const ContourSpec& spec) {
    if (!(spec.half_height > 0.0)) throw ParameterError("ContourSpec: half_height must be positive");
    if (spec.nodes < 64) throw ParameterError("ContourSpec: at least 64 nodes required");
}

/// (1 / 2 pi i) * integral of kernel(s) ds along the line described by spec,
/// by the trapezoidal rule. Nodes c + i t and c - i t are summed together.
/// Throws DivergenceError when the kernel grows towards the truncation points.
template <typename K>
std::complex<double> integrate_vertical_contour(K&& kernel, const ContourSpec& spec) {
    using C = std::complex<double>;
    validate(spec);
    const int half_nodes = (spec.nodes - 1) / 2;
    const double h = spec.half_height / half_nodes;
    const double c = spec.abscissa;
    C sum = kernel(C(c, 0.0));
    double peak = std::abs(sum);
    double tail_inner = 0.0;
    double tail_outer = 0.0;
    const int inner_index = (3 * half_nodes) / 4;
    for (int k = 1; k <= half_nodes; ++k) {
        const double t = k * h;
        const C up = kernel(C(c, t));
        const C down = kernel(C(c, -t));
        const double mag = std::abs(up) + std::abs(down);
        peak = std::max(peak, mag);
        if (k == inner_index) tail_inner = mag;
        if (k == half_nodes) tail_outer = mag;
        // endpoint nodes carry half weight
        sum += (k == half_nodes ? 0.5 : 1.0) * (up + down);
    }
    if (!std::isfinite(std::abs(sum)) ||
        (tail_outer > tail_inner && tail_outer > 1e-6 * peak)) {
        throw DivergenceError("integrate_vertical_contour: kernel does not decay along the line");
    }
    // ds = i dt, so (1/2 pi i) * i * sum * h
    return sum * h / (2.0 * std::numbers::pi);
}

struct ContourResult {
    std::complex<double> value;
    double error_estimate = 0.0;  // absolute
    ContourSpec spec;             // final refinement used
};

struct AdaptiveContourOptions {
    double tol_rel = 1e-10;        // step refinement target
    double tail_tol_rel = 1e-10;   // truncation target
    double tol_abs = 1e-300;
    double initial_half_height = 8.0;
    int initial_nodes = 129;
    int max_nodes = 1 << 16;
    double max_half_height = 256.0;
};

/// Trapezoidal contour integral with the step halved until successive sums
/// agree, then the half-height doubled (same step) until the added tail is
/// negligible. Throws AccuracyError with the last estimate if limits are hit.
template <typename K>
ContourResult integrate_vertical_contour_adaptive(K&& kernel, double abscissa,
                                                  const AdaptiveContourOptions& opt = {}) {
    ContourSpec spec{abscissa, opt.initial_half_height, opt.initial_nodes};
    auto prev = integrate_vertical_contour(kernel, spec);
    double err = std::numeric_limits<double>::infinity();
    for (;;) {
        // refine step
        ContourSpec fine{spec.abscissa, spec.half_height, 2 * spec.nodes - 1};
        if (fine.nodes > opt.max_nodes) {
            throw AccuracyError("contour: step refinement limit reached", prev.real(), err);
        }
        const auto cur = integrate_vertical_contour(kernel, fine);
        err = std::abs(cur - prev);
        spec = fine;
        prev = cur;
        if (err <= std::max(opt.tol_rel * std::abs(cur), opt.tol_abs)) break;
    }
    for (;;) {
        ContourSpec tall{spec.abscissa, 2.0 * spec.half_height, 2 * spec.nodes - 1};
        if (tall.half_height > opt.max_half_height || tall.nodes > opt.max_nodes) {
            throw AccuracyError("contour: truncation limit reached", prev.real(), err);
        }
        const auto cur = integrate_vertical_contour(kernel, tall);
        const double tail = std::abs(cur - prev);
        spec = tall;
        prev = cur;
        err = std::max(err, tail);
        if (tail <= std::max(opt.tail_tol_rel * std::abs(cur), opt.tol_abs)) break;
    }
    return {prev, err, spec};
}

}  // namespace plsec
