#pragma once

// Parameter sweeps over a scenario, CSV emission/reading, the
// analytic-vs-simulation consistency report, and the figure presets.

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <thread>
#include <vector>

#include "plsec/analytic.hpp"
#include "plsec/channels.hpp"
#include "plsec/errors.hpp"
#include "plsec/montecarlo.hpp"

namespace plsec {

enum class SweepVariable { tx_power_dbm, eve_distance_m, n_elements, source_surface_distance_m };

inline std::string to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::tx_power_dbm: return "tx_power_dbm";
        case SweepVariable::eve_distance_m: return "eve_distance_m";
        case SweepVariable::n_elements: return "n_elements";
        case SweepVariable::source_surface_distance_m: return "source_surface_distance_m";
    }
    return "?";
}

inline std::optional<SweepVariable> parse_sweep_variable(std::string_view s) {
    for (auto v : {SweepVariable::tx_power_dbm, SweepVariable::eve_distance_m,
                   SweepVariable::n_elements, SweepVariable::source_surface_distance_m}) {
        if (s == to_string(v)) return v;
    }
    return std::nullopt;
}

inline std::optional<Architecture> parse_architecture(std::string_view s) {
    if (s == "irs") return Architecture::irs;
    if (s == "df") return Architecture::df;
    if (s == "affg") return Architecture::affg;
    return std::nullopt;
}

/// Accepts "analytic", "monte-carlo" and the short form "mc".
inline std::optional<Method> parse_method(std::string_view s) {
    if (s == "analytic") return Method::analytic;
    if (s == "monte-carlo" || s == "mc") return Method::monte_carlo;
    return std::nullopt;
}

struct SweepSpec {
    std::optional<SweepVariable> variable;  // none: evaluate the base scenario only
    double from = 0.0;
    double to = 0.0;
    double step = 1.0;
    std::vector<Architecture> architectures{Architecture::irs, Architecture::df,
                                            Architecture::affg};
    std::vector<Method> methods{Method::analytic};
};

inline bool is_positive_integer(double x) { return x >= 1.0 && x == std::floor(x) && x < 1e9; }

inline void validate(const SweepSpec& s) {
    if (s.architectures.empty()) throw ParameterError("SweepSpec: no architectures selected");
    if (s.methods.empty()) throw ParameterError("SweepSpec: no methods selected");
    if (!s.variable) return;
    if (!std::isfinite(s.from) || !std::isfinite(s.to)) throw DomainError("SweepSpec: from/to must be finite");
    if (!(s.from <= s.to)) throw DomainError("SweepSpec: need from <= to");
    if (!(s.step > 0.0) || !std::isfinite(s.step)) throw DomainError("SweepSpec: step must be positive");
    if (*s.variable == SweepVariable::n_elements &&
        (!is_positive_integer(s.from) || !is_positive_integer(s.step))) {
        throw DomainError("SweepSpec: n_elements sweeps need positive integer from and step");
    }
}

/// from, from + step, ... up to `to` (inclusive, with a small slack for rounding).
inline std::vector<double> sweep_grid(const SweepSpec& s) {
    validate(s);
    if (!s.variable) return {0.0};
    const auto count = static_cast<std::int64_t>(std::floor((s.to - s.from) / s.step + 1e-9)) + 1;
    if (count > 1'000'000) throw DomainError("SweepSpec: grid too large");
    std::vector<double> grid(static_cast<std::size_t>(count));
    for (std::int64_t k = 0; k < count; ++k) {
        grid[static_cast<std::size_t>(k)] = s.from + static_cast<double>(k) * s.step;
    }
    return grid;
}

/// The scenario objects a sweep may draw on; either may be absent.
struct Scenarios {
    std::optional<ScenarioIrs> irs;
    std::optional<ScenarioRelay> relay;
};

inline Scenarios apply_sweep_value(Scenarios sc, std::optional<SweepVariable> var, double x) {
    if (!var) return sc;
    auto set_geometry = [&](Geometry& g) {
        if (*var == SweepVariable::eve_distance_m) g.d_node_eve = x;
        if (*var == SweepVariable::source_surface_distance_m) g.d_source_node = x;
    };
    if (sc.irs) {
        set_geometry(sc.irs->geometry);
        if (*var == SweepVariable::tx_power_dbm) sc.irs->tx_power_db = x;
        if (*var == SweepVariable::n_elements) sc.irs->n_elements = static_cast<int>(x);
    }
    if (sc.relay) {
        set_geometry(sc.relay->geometry);
        if (*var == SweepVariable::tx_power_dbm) sc.relay->tx_power_db = x;
    }
    return sc;
}

/// Legitimate, eavesdropper and secrecy estimates at one scenario.
struct PointEstimate {
    CapacityEstimate legit;
    CapacityEstimate eve;
    CapacityEstimate secrecy;
};

inline PointEstimate evaluate_point(const Scenarios& sc, Architecture arch, Method method,
                                    const McConfig& mc) {
    if (arch == Architecture::irs && !sc.irs) throw ParameterError("no reflecting-surface scenario configured");
    if (arch != Architecture::irs && !sc.relay) throw ParameterError("no relay scenario configured");
    if (method == Method::monte_carlo) {
        const McSecrecyResult r = arch == Architecture::irs ? mc_secrecy(*sc.irs, mc)
                                                            : mc_secrecy(*sc.relay, arch, mc);
        return {r.legit, r.eve, r.secrecy};
    }
    PointEstimate p;
    switch (arch) {
        case Architecture::irs:
            p.legit = ergodic_capacity_irs(*sc.irs, Receiver::legit);
            p.eve = ergodic_capacity_irs(*sc.irs, Receiver::eve);
            break;
        case Architecture::df:
            p.legit = df_ergodic(*sc.relay, Receiver::legit);
            p.eve = df_ergodic(*sc.relay, Receiver::eve);
            break;
        case Architecture::affg:
            p.legit = affg_ergodic(*sc.relay, Receiver::legit);
            p.eve = affg_ergodic(*sc.relay, Receiver::eve);
            break;
    }
    p.secrecy = secrecy_capacity(p.legit, p.eve);
    return p;
}

namespace detail {

// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = hardware);
// the first exception is rethrown after all workers stop.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    if (threads == 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = static_cast<int>(std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1, std::max<std::size_t>(n, 1)));
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr failure;
    auto worker = [&] {
        try {
            for (std::size_t i = next++; i < n && !failed; i = next++) fn(i);
        } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
}

inline std::string one_line(std::string s) {
    for (char& c : s) {
        if (c == ',') c = ';';
        if (c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

}  // namespace detail

struct SweepRow {
    std::string variable;
    double value = 0.0;
    std::string architecture;  // "irs", "df", "affg", optionally with a "/series" suffix
    Method method = Method::analytic;
    double secrecy_bps_hz = 0.0;
    double ergodic_l = 0.0;
    double ergodic_e = 0.0;
    double std_error = 0.0;  // of the secrecy estimate; 0 for analytic rows
    std::string status = "ok";
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

/// Evaluates every grid point x architecture x method. Points run
/// concurrently; each simulation runs single-threaded inside its task, so
/// rows are identical for any `threads`. A failing point is reported in
/// its row's status instead of aborting the sweep.
inline SweepResult run_sweep(const SweepSpec& spec, const Scenarios& base, const McConfig& mc,
                             int threads = 0, const std::string& series = "") {
    const std::vector<double> grid = sweep_grid(spec);
    std::vector<Architecture> archs = spec.architectures;
    std::vector<Method> methods = spec.methods;
    std::sort(archs.begin(), archs.end());
    archs.erase(std::unique(archs.begin(), archs.end()), archs.end());
    std::sort(methods.begin(), methods.end());
    methods.erase(std::unique(methods.begin(), methods.end()), methods.end());
    validate(mc);

    McConfig task_mc = mc;
    task_mc.threads = 1;
    const std::string var_name = spec.variable ? to_string(*spec.variable) : "none";
    const std::size_t per_point = archs.size() * methods.size();
    SweepResult out;
    out.rows.resize(grid.size() * per_point);
    detail::parallel_for(out.rows.size(), threads, [&](std::size_t i) {
        const double x = grid[i / per_point];
        const Architecture arch = archs[(i % per_point) / methods.size()];
        const Method method = methods[i % methods.size()];
        SweepRow& row = out.rows[i];
        row.variable = var_name;
        row.value = x;
        row.architecture = series.empty() ? to_string(arch) : to_string(arch) + "/" + series;
        row.method = method;
        try {
            const PointEstimate p =
                evaluate_point(apply_sweep_value(base, spec.variable, x), arch, method, task_mc);
            row.secrecy_bps_hz = p.secrecy.bits_per_sec_hz;
            row.ergodic_l = p.legit.bits_per_sec_hz;
            row.ergodic_e = p.eve.bits_per_sec_hz;
            row.std_error = p.secrecy.std_error;
        } catch (const std::exception& e) {
            row.secrecy_bps_hz = row.ergodic_l = row.ergodic_e = std::nan("");
            row.status = "error: " + detail::one_line(e.what());
        }
    });
    return out;
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr std::string_view kCsvHeader =
    "variable,value,architecture,method,secrecy_bps_hz,ergodic_L,ergodic_E,std_error,status";

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

inline std::optional<double> parse_double(std::string_view s) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

inline void write_csv(std::ostream& os, const SweepResult& r) {
    os << kCsvHeader << '\n';
    for (const auto& row : r.rows) {
        os << row.variable << ',' << format_double(row.value) << ',' << row.architecture << ','
           << to_string(row.method) << ',' << format_double(row.secrecy_bps_hz) << ','
           << format_double(row.ergodic_l) << ',' << format_double(row.ergodic_e) << ','
           << format_double(row.std_error) << ',' << detail::one_line(row.status) << '\n';
    }
}

inline std::string to_csv(const SweepResult& r) {
    std::ostringstream os;
    write_csv(os, r);
    return os.str();
}

/// Reads a file produced by write_csv; throws ParameterError on malformed lines.
inline SweepResult read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader) throw ParameterError("csv: missing or unexpected header");
    SweepResult out;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
        const std::string where = "csv line " + std::to_string(lineno);
        if (f.size() != 9) throw ParameterError(where + ": expected 9 fields");
        auto num = [&](const std::string& s) {
            const auto v = parse_double(s);
            if (!v) throw ParameterError(where + ": bad number '" + s + "'");
            return *v;
        };
        const auto method = parse_method(f[3]);
        if (!method) throw ParameterError(where + ": bad method '" + f[3] + "'");
        out.rows.push_back({f[0], num(f[1]), f[2], *method, num(f[4]), num(f[5]), num(f[6]),
                            num(f[7]), f[8]});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Analytic vs simulation consistency

struct ValidationCheck {
    double value = 0.0;  // grid coordinate
    Architecture architecture = Architecture::irs;
    std::string quantity;  // ergodic_L, ergodic_E or secrecy
    double analytic = 0.0;
    double monte_carlo = 0.0;
    double std_error = 0.0;
    double z = 0.0;
    bool pass = false;
    std::string status = "ok";
};

struct ValidationReport {
    std::string variable;
    std::vector<ValidationCheck> checks;

    bool passed() const {
        return !checks.empty() &&
               std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
    }
};

struct ValidateOptions {
    int threads = 0;
    double analytic_bias = 0.0;  // added to every analytic value; exercises the report
};

/// |a - m| <= max(3 s.e., 1% of |a|), with a 1e-12 floor for values that vanish.
inline bool consistent(double analytic, double mc, double se) {
    return std::abs(analytic - mc) <= std::max({3.0 * se, 0.01 * std::abs(analytic), 1e-12});
}

inline ValidationReport validate_sweep(const SweepSpec& spec, const Scenarios& base,
                                       const McConfig& mc, const ValidateOptions& opt = {}) {
    const std::vector<double> grid = sweep_grid(spec);
    std::vector<Architecture> archs = spec.architectures;
    std::sort(archs.begin(), archs.end());
    archs.erase(std::unique(archs.begin(), archs.end()), archs.end());
    validate(mc);
    McConfig task_mc = mc;
    task_mc.threads = 1;

    const std::size_t n_tasks = grid.size() * archs.size();
    ValidationReport report;
    report.variable = spec.variable ? to_string(*spec.variable) : "none";
    report.checks.resize(3 * n_tasks);
    detail::parallel_for(n_tasks, opt.threads, [&](std::size_t i) {
        const double x = grid[i / archs.size()];
        const Architecture arch = archs[i % archs.size()];
        ValidationCheck* out = &report.checks[3 * i];
        const char* names[3] = {"ergodic_L", "ergodic_E", "secrecy"};
        for (int q = 0; q < 3; ++q) {
            out[q].value = x;
            out[q].architecture = arch;
            out[q].quantity = names[q];
        }
        try {
            const Scenarios sc = apply_sweep_value(base, spec.variable, x);
            const PointEstimate a = evaluate_point(sc, arch, Method::analytic, task_mc);
            const PointEstimate m = evaluate_point(sc, arch, Method::monte_carlo, task_mc);
            const CapacityEstimate* pa[3] = {&a.legit, &a.eve, &a.secrecy};
            const CapacityEstimate* pm[3] = {&m.legit, &m.eve, &m.secrecy};
            for (int q = 0; q < 3; ++q) {
                auto& c = out[q];
                c.analytic = pa[q]->bits_per_sec_hz + opt.analytic_bias;
                c.monte_carlo = pm[q]->bits_per_sec_hz;
                c.std_error = pm[q]->std_error;
                c.z = c.std_error > 0.0 ? (c.analytic - c.monte_carlo) / c.std_error : 0.0;
                c.pass = consistent(c.analytic, c.monte_carlo, c.std_error);
            }
        } catch (const std::exception& e) {
            for (int q = 0; q < 3; ++q) {
                out[q].pass = false;
                out[q].status = "error: " + detail::one_line(e.what());
            }
        }
    });
    return report;
}

inline void write_report(std::ostream& os, const ValidationReport& r) {
    os << r.variable << ",architecture,quantity,analytic,monte_carlo,std_error,z,result\n";
    for (const auto& c : r.checks) {
        os << format_double(c.value) << ',' << to_string(c.architecture) << ',' << c.quantity << ','
           << format_double(c.analytic) << ',' << format_double(c.monte_carlo) << ','
           << format_double(c.std_error) << ',' << format_double(c.z) << ','
           << (c.pass ? "pass" : (c.status == "ok" ? "FAIL" : "FAIL " + c.status)) << '\n';
    }
    os << (r.passed() ? "overall: pass" : "overall: FAIL") << '\n';
}

// ---------------------------------------------------------------------------
// Reference scenario and figure presets

/// T->node 10 m, node->L 10 m, node->E 20 m, zeta = 2, unit rates and noise,
/// common shape on every hop, N = 4, 20 dB.
inline Scenarios reference_scenarios(double shape = 2.0) {
    const FadingParams f{shape, 1.0};
    Scenarios sc;
    sc.irs = ScenarioIrs{4, Geometry{}, f, f, f, 20.0, NoisePowers{}};
    sc.relay = ScenarioRelay{Geometry{}, f, f, f, 20.0, NoisePowers{}, RelayGainMode::fixed};
    return sc;
}

struct FigureSeries {
    std::string label;
    SweepSpec spec;
    Scenarios scenarios;
};

inline std::vector<FigureSeries> figure_preset(int id) {
    using A = Architecture;
    const std::vector<A> all{A::irs, A::df, A::affg};
    std::vector<FigureSeries> out;
    switch (id) {
        case 3:  // secrecy against transmit power, two shape settings
            for (double shape : {2.0, 3.0}) {
                out.push_back({"alpha=" + format_double(shape),
                               {SweepVariable::tx_power_dbm, 0.0, 50.0, 2.0, all, {Method::analytic}},
                               reference_scenarios(shape)});
            }
            break;
        case 4:  // relay ergodic and secrecy capacities against power
            out.push_back({"alpha=2", {SweepVariable::tx_power_dbm, 0.0, 50.0, 1.0, {A::df, A::affg}, {Method::analytic}},
                           reference_scenarios(2.0)});
            break;
        case 5:  // eavesdropper distance at two powers
            for (double p : {10.0, 20.0}) {
                Scenarios sc = reference_scenarios(2.0);
                sc.irs->tx_power_db = p;
                sc.relay->tx_power_db = p;
                out.push_back({"P=" + format_double(p) + "dB",
                               {SweepVariable::eve_distance_m, 1.0, 40.0, 1.0, all, {Method::analytic}}, sc});
            }
            break;
        case 6:  // surface size against source-surface distance
            for (int n : {2, 8, 32, 64}) {
                Scenarios sc = reference_scenarios(2.0);
                sc.relay.reset();
                sc.irs->n_elements = n;
                sc.irs->tx_power_db = 10.0;
                out.push_back({"N=" + std::to_string(n),
                               {SweepVariable::source_surface_distance_m, 1.0, 30.0, 1.0, {A::irs}, {Method::analytic}},
                               sc});
            }
            break;
        default:
            throw ParameterError("figure id must be one of 3, 4, 5, 6");
    }
    return out;
}

/// Runs every series of a preset with the given methods and concatenates
/// the rows in series order.
inline SweepResult run_figure(int id, const std::vector<Method>& methods, const McConfig& mc,
                              int threads = 0) {
    SweepResult all;
    for (FigureSeries& s : figure_preset(id)) {
        s.spec.methods = methods;
        SweepResult part = run_sweep(s.spec, s.scenarios, mc, threads, s.label);
        all.rows.insert(all.rows.end(), part.rows.begin(), part.rows.end());
    }
    return all;
}

}  // namespace plsec
