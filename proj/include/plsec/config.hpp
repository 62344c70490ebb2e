#pragma once

// Scenario files: one `key = value` per line, dotted section keys, `#`
// starts a comment. Every problem found is collected and reported together.
//
//   geometry.d_source_node = 10
//   fading.node_eve.alpha  = 2
//   sweep.architectures    = irs, df

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "plsec/channels.hpp"
#include "plsec/montecarlo.hpp"
#include "plsec/sweep.hpp"

namespace plsec {

struct ConfigIssue {
    std::string key;  // empty when the line could not be split into a key
    int line = 0;     // 0 when the key is missing altogether
    std::string message;
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<ConfigIssue> issues)
        : std::runtime_error(render(issues)), issues_(std::move(issues)) {}

    const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

private:
    static std::string render(const std::vector<ConfigIssue>& issues) {
        std::string s = "invalid configuration (" + std::to_string(issues.size()) + " problem" +
                        (issues.size() == 1 ? "" : "s") + ")";
        for (const auto& i : issues) {
            s += "\n  ";
            if (i.line > 0) s += "line " + std::to_string(i.line) + ": ";
            if (!i.key.empty()) s += i.key + ": ";
            s += i.message;
        }
        return s;
    }

    std::vector<ConfigIssue> issues_;
};

struct ScenarioConfig {
    Scenarios scenarios;
    SweepSpec sweep;
    McConfig mc;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline const std::set<std::string, std::less<>>& known_config_keys() {
    static const std::set<std::string, std::less<>> keys = {
        "geometry.d_source_node", "geometry.d_node_legit", "geometry.d_node_eve",
        "geometry.pathloss_exponent", "power.tx_power_db", "noise.relay", "noise.legit",
        "noise.eve", "irs.n_elements", "relay.gain_mode",
        "fading.source_node.alpha", "fading.source_node.beta",
        "fading.node_legit.alpha", "fading.node_legit.beta",
        "fading.node_eve.alpha", "fading.node_eve.beta",
        "sweep.variable", "sweep.from", "sweep.to", "sweep.step", "sweep.architectures",
        "sweep.methods", "mc.samples", "mc.seed", "mc.chunk_size",
    };
    return keys;
}

struct Entry {
    std::string value;
    int line;
};

class ConfigReader {
public:
    explicit ConfigReader(std::string_view text) {
        std::istringstream in{std::string(text)};
        std::string raw;
        int lineno = 0;
        while (std::getline(in, raw)) {
            ++lineno;
            std::string_view line = raw;
            if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) {
                issue("", lineno, "expected 'key = value'");
                continue;
            }
            const std::string key(trim(line.substr(0, eq)));
            const std::string value(trim(line.substr(eq + 1)));
            if (key.empty()) {
                issue("", lineno, "empty key");
            } else if (!known_config_keys().contains(key)) {
                issue(key, lineno, "unknown key");
            } else if (const auto it = entries_.find(key); it != entries_.end()) {
                issue(key, lineno, "duplicate key (first set on line " + std::to_string(it->second.line) + ")");
            } else if (value.empty()) {
                issue(key, lineno, "missing value");
                entries_.emplace(key, Entry{value, lineno});
                bad_.insert(key);
            } else {
                entries_.emplace(key, Entry{value, lineno});
            }
        }
    }

    bool has(const std::string& key) const { return entries_.contains(key); }

    std::optional<std::string> text(const std::string& key) const {
        const auto it = entries_.find(key);
        if (it == entries_.end() || bad_.contains(key)) return std::nullopt;
        return it->second.value;
    }

    int line_of(const std::string& key) const {
        const auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    /// Required real value; records an issue and returns nullopt on failure.
    std::optional<double> real(const std::string& key, bool required = true) {
        if (!has(key)) {
            if (required) issue(key, 0, "missing required key");
            return std::nullopt;
        }
        const auto t = text(key);
        if (!t) return std::nullopt;
        const auto v = parse_double(*t);
        if (!v || !std::isfinite(*v)) {
            issue(key, line_of(key), "not a finite number: '" + *t + "'");
            return std::nullopt;
        }
        return v;
    }

    std::optional<double> positive(const std::string& key, bool required = true) {
        const auto v = real(key, required);
        if (v && !(*v > 0.0)) {
            issue(key, line_of(key), "must be positive, got " + format_double(*v));
            return std::nullopt;
        }
        return v;
    }

    std::optional<std::int64_t> integer(const std::string& key, std::int64_t min_value) {
        const auto v = real(key, false);
        if (!v) return std::nullopt;
        if (*v != std::floor(*v) || *v < static_cast<double>(min_value) || *v > 9.0e15) {
            issue(key, line_of(key), "must be an integer >= " + std::to_string(min_value));
            return std::nullopt;
        }
        return static_cast<std::int64_t>(*v);
    }

    std::vector<std::string> list(const std::string& key) const {
        std::vector<std::string> out;
        const auto t = text(key);
        if (!t) return out;
        std::stringstream ss(*t);
        for (std::string item; std::getline(ss, item, ',');) {
            const auto v = trim(item);
            if (!v.empty()) out.emplace_back(v);
        }
        return out;
    }

    void issue(std::string key, int line, std::string message) {
        issues_.push_back({std::move(key), line, std::move(message)});
    }

    std::vector<ConfigIssue>& issues() { return issues_; }

private:
    std::map<std::string, Entry, std::less<>> entries_;
    std::set<std::string, std::less<>> bad_;
    std::vector<ConfigIssue> issues_;
};

}  // namespace detail

/// Parses and validates a scenario; throws ConfigError listing every violation.
inline ScenarioConfig parse_config_text(std::string_view text) {
    detail::ConfigReader r(text);
    ScenarioConfig cfg;

    // which architectures (and hence which scenario objects) are needed
    std::vector<Architecture> archs{Architecture::irs, Architecture::df, Architecture::affg};
    if (r.has("sweep.architectures")) {
        archs.clear();
        for (const auto& a : r.list("sweep.architectures")) {
            if (const auto p = parse_architecture(a)) {
                archs.push_back(*p);
            } else {
                r.issue("sweep.architectures", r.line_of("sweep.architectures"),
                        "unknown architecture '" + a + "' (expected irs, df or affg)");
            }
        }
        if (archs.empty()) r.issue("sweep.architectures", r.line_of("sweep.architectures"), "empty list");
    }
    const bool want_irs = std::find(archs.begin(), archs.end(), Architecture::irs) != archs.end();
    const bool want_relay = std::find_if(archs.begin(), archs.end(), [](Architecture a) {
                                return a != Architecture::irs;
                            }) != archs.end();
    cfg.sweep.architectures = archs;

    Geometry g;
    auto set = [](auto& dst, const auto& v) {
        if (v) dst = *v;
    };
    set(g.d_source_node, r.positive("geometry.d_source_node"));
    set(g.d_node_legit, r.positive("geometry.d_node_legit"));
    set(g.d_node_eve, r.positive("geometry.d_node_eve"));
    set(g.pathloss_exponent, r.positive("geometry.pathloss_exponent"));

    double power = 0.0;
    set(power, r.real("power.tx_power_db"));

    NoisePowers noise;
    set(noise.legit, r.positive("noise.legit"));
    set(noise.eve, r.positive("noise.eve"));
    set(noise.relay, r.positive("noise.relay", want_relay));

    const char* hops[3] = {"fading.source_node", "fading.node_legit", "fading.node_eve"};
    FadingParams fading[3];
    for (int h = 0; h < 3; ++h) {
        const std::string base = hops[h];
        const auto alpha = r.positive(base + ".alpha");
        set(fading[h].alpha, alpha);
        set(fading[h].beta, r.positive(base + ".beta"));
        if (alpha && want_relay && !has_integer_shape(fading[h])) {
            r.issue(base + ".alpha", r.line_of(base + ".alpha"),
                    "relay architectures need a positive integer shape for the series survival "
                    "function, got " + format_double(*alpha));
        }
    }

    int n_elements = 0;
    if (want_irs) {
        if (!r.has("irs.n_elements")) {
            r.issue("irs.n_elements", 0, "missing required key");
        } else if (const auto n = r.integer("irs.n_elements", 1)) {
            if (*n > 100000) {
                r.issue("irs.n_elements", r.line_of("irs.n_elements"), "at most 100000 elements");
            } else {
                n_elements = static_cast<int>(*n);
            }
        }
    }

    if (const auto mode = r.text("relay.gain_mode"); mode && *mode != "fixed") {
        r.issue("relay.gain_mode", r.line_of("relay.gain_mode"), "only 'fixed' is supported");
    }

    // sweep
    SweepSpec& sw = cfg.sweep;
    if (const auto v = r.text("sweep.variable")) {
        sw.variable = parse_sweep_variable(*v);
        if (!sw.variable) {
            r.issue("sweep.variable", r.line_of("sweep.variable"),
                    "unknown variable '" + *v +
                        "' (expected tx_power_dbm, eve_distance_m, n_elements or source_surface_distance_m)");
        }
        const auto from = r.real("sweep.from");
        const auto to = r.real("sweep.to");
        const auto step = r.positive("sweep.step");
        set(sw.from, from);
        set(sw.to, to);
        set(sw.step, step);
        if (from && to && *from > *to) r.issue("sweep.to", r.line_of("sweep.to"), "must be >= sweep.from");
        if (sw.variable == SweepVariable::n_elements) {
            if (from && !is_positive_integer(*from)) {
                r.issue("sweep.from", r.line_of("sweep.from"), "n_elements sweeps need a positive integer start");
            }
            if (step && !is_positive_integer(*step)) {
                r.issue("sweep.step", r.line_of("sweep.step"), "n_elements sweeps need a positive integer step");
            }
        }
        if (sw.variable == SweepVariable::eve_distance_m ||
            sw.variable == SweepVariable::source_surface_distance_m) {
            if (from && !(*from > 0.0)) r.issue("sweep.from", r.line_of("sweep.from"), "distances must be positive");
        }
    } else {
        for (const char* k : {"sweep.from", "sweep.to", "sweep.step"}) {
            if (r.has(k)) r.issue(k, r.line_of(k), "sweep.variable is not set");
        }
    }
    if (r.has("sweep.methods")) {
        sw.methods.clear();
        for (const auto& m : r.list("sweep.methods")) {
            if (const auto p = parse_method(m)) {
                sw.methods.push_back(*p);
            } else {
                r.issue("sweep.methods", r.line_of("sweep.methods"),
                        "unknown method '" + m + "' (expected analytic or monte-carlo)");
            }
        }
        if (sw.methods.empty()) r.issue("sweep.methods", r.line_of("sweep.methods"), "empty list");
    }

    // simulation
    if (const auto n = r.integer("mc.samples", 1000)) cfg.mc.samples = *n;
    if (const auto n = r.integer("mc.chunk_size", 1)) cfg.mc.chunk_size = *n;
    if (const auto t = r.text("mc.seed")) {
        std::uint64_t seed = 0;
        const auto res = std::from_chars(t->data(), t->data() + t->size(), seed);
        if (res.ec != std::errc() || res.ptr != t->data() + t->size()) {
            r.issue("mc.seed", r.line_of("mc.seed"), "must be an unsigned 64-bit integer");
        } else {
            cfg.mc.master_seed = seed;
        }
    }

    if (!r.issues().empty()) throw ConfigError(std::move(r.issues()));

    if (want_irs) cfg.scenarios.irs = ScenarioIrs{n_elements, g, fading[0], fading[1], fading[2], power, noise};
    if (want_relay) {
        cfg.scenarios.relay =
            ScenarioRelay{g, fading[0], fading[1], fading[2], power, noise, RelayGainMode::fixed};
    }
    return cfg;
}

inline ScenarioConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({{"", 0, "cannot open '" + path + "'"}});
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace plsec
