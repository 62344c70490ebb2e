#pragma once

// Monte Carlo oracle: sample channel gains, form the instantaneous SNR of
// each architecture and estimate ergodic and secrecy capacities.
//
// Work is split into fixed-size chunks; chunk c draws from
// RandomStream(master_seed, c) and chunk statistics are merged in chunk
// order, so results do not depend on the number of threads.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "plsec/analytic.hpp"
#include "plsec/channels.hpp"

namespace plsec {

enum class Architecture { irs, df, affg };

inline std::string to_string(Architecture a) {
    switch (a) {
        case Architecture::irs: return "irs";
        case Architecture::df: return "df";
        case Architecture::affg: return "affg";
    }
    return "?";
}

struct McConfig {
    std::int64_t samples = 1'000'000;
    std::uint64_t master_seed = 1;
    std::int64_t chunk_size = 1 << 15;
    int threads = 1;                // 0 = hardware concurrency
    bool couple_common_hop = true;  // L and E share the source-side draw
};

inline void validate(const McConfig& cfg) {
    if (cfg.samples < 1000) throw DomainError("McConfig: at least 1000 samples required");
    if (cfg.chunk_size < 1) throw DomainError("McConfig: chunk_size must be positive");
    if (cfg.threads < 0) throw DomainError("McConfig: threads must be >= 0");
}

/// Ergodic estimates at both receivers and the secrecy estimate from one run.
struct McSecrecyResult {
    CapacityEstimate legit;
    CapacityEstimate eve;
    CapacityEstimate secrecy;
};

namespace detail {

// Welford accumulator, mergeable (Chan et al.).
struct RunningStats {
    std::int64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void push(double x) {
        ++n;
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }

    void merge(const RunningStats& o) {
        if (o.n == 0) return;
        const std::int64_t total = n + o.n;
        const double delta = o.mean - mean;
        mean += delta * static_cast<double>(o.n) / static_cast<double>(total);
        m2 += o.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(o.n) /
                         static_cast<double>(total);
        n = total;
    }

    double std_error() const {
        if (n < 2) return 0.0;
        return std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
    }
};

struct PairStats {
    RunningStats legit;
    RunningStats eve;
    RunningStats diff;

    void push(double snr_legit, double snr_eve) {
        const double cl = std::log2(1.0 + snr_legit);
        const double ce = std::log2(1.0 + snr_eve);
        legit.push(cl);
        eve.push(ce);
        diff.push(cl - ce);
    }

    void merge(const PairStats& o) {
        legit.merge(o.legit);
        eve.merge(o.eve);
        diff.merge(o.diff);
    }
};

// Runs draw(stream, stats, count) per chunk and merges in chunk order.
template <typename Draw>
PairStats run_chunks(const McConfig& cfg, Draw&& draw) {
    validate(cfg);
    const std::int64_t n_chunks = (cfg.samples + cfg.chunk_size - 1) / cfg.chunk_size;
    std::vector<PairStats> parts(static_cast<std::size_t>(n_chunks));
    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        try {
            for (std::int64_t c = next++; c < n_chunks && !failed; c = next++) {
                RandomStream rng(cfg.master_seed, static_cast<std::uint64_t>(c));
                const std::int64_t count = std::min(cfg.chunk_size, cfg.samples - c * cfg.chunk_size);
                draw(rng, parts[static_cast<std::size_t>(c)], count);
            }
        } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
        }
    };
    int threads = cfg.threads == 0 ? static_cast<int>(std::thread::hardware_concurrency())
                                   : cfg.threads;
    threads = static_cast<int>(std::clamp<std::int64_t>(threads, 1, n_chunks));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    PairStats total;
    for (const auto& p : parts) total.merge(p);
    return total;
}

inline McSecrecyResult to_result(const PairStats& st) {
    auto est = [](const RunningStats& r) {
        return CapacityEstimate{r.mean, Method::monte_carlo, r.std_error(), r.n};
    };
    McSecrecyResult out{est(st.legit), est(st.eve), {}};
    out.secrecy = {std::max(st.diff.mean, 0.0), Method::monte_carlo, st.diff.std_error(),
                   st.diff.n};
    return out;
}

}  // namespace detail

/// IRS: per-element SNR P d_TS^-z d_Si^-z / w_i |g_T g_i|^2, summed over N elements.
inline McSecrecyResult mc_secrecy_irs(const ScenarioIrs& s, const McConfig& cfg) {
    validate(s.fading_ts);
    validate(s.fading_sl);
    validate(s.fading_se);
    if (s.n_elements < 1) throw DomainError("mc_secrecy_irs: need at least one element");
    const double scale_l = irs_snr_scale(s, Receiver::legit);
    const double scale_e = irs_snr_scale(s, Receiver::eve);
    const bool coupled = cfg.couple_common_hop;
    auto draw = [&](RandomStream& rng, detail::PairStats& st, std::int64_t count) {
        for (std::int64_t i = 0; i < count; ++i) {
            double sum_l = 0.0;
            double sum_e = 0.0;
            for (int n = 0; n < s.n_elements; ++n) {
                const double x = sample_gamma(s.fading_ts, rng);
                const double x_e = coupled ? x : sample_gamma(s.fading_ts, rng);
                sum_l += x * sample_gamma(s.fading_sl, rng);
                sum_e += x_e * sample_gamma(s.fading_se, rng);
            }
            st.push(scale_l * sum_l, scale_e * sum_e);
        }
    };
    return detail::to_result(detail::run_chunks(cfg, draw));
}

namespace detail {

template <typename Combine>
McSecrecyResult mc_relay(const ScenarioRelay& s, const McConfig& cfg, Combine&& combine) {
    validate(s.fading_1);
    validate(s.fading_2);
    validate(s.fading_3);
    const double c1 = relay_first_hop_scale(s);
    const double cl = relay_second_hop_scale(s, Receiver::legit);
    const double ce = relay_second_hop_scale(s, Receiver::eve);
    const bool coupled = cfg.couple_common_hop;
    auto draw = [&](RandomStream& rng, PairStats& st, std::int64_t count) {
        for (std::int64_t i = 0; i < count; ++i) {
            const double g1 = c1 * sample_gamma(s.fading_1, rng);
            const double g1_e = coupled ? g1 : c1 * sample_gamma(s.fading_1, rng);
            const double gl = cl * sample_gamma(s.fading_2, rng);
            const double ge = ce * sample_gamma(s.fading_3, rng);
            st.push(combine(g1, gl), combine(g1_e, ge));
        }
    };
    return to_result(run_chunks(cfg, draw));
}

}  // namespace detail

/// DF: min(g1, gb).
inline McSecrecyResult mc_secrecy_df(const ScenarioRelay& s, const McConfig& cfg) {
    return detail::mc_relay(s, cfg, [](double g1, double gb) { return std::min(g1, gb); });
}

/// AFFG: g1 gb / (g1 + l) with l = mean first-hop SNR + 1.
inline McSecrecyResult mc_secrecy_affg(const ScenarioRelay& s, const McConfig& cfg) {
    const double l = affg_snr_constant(relay_first_hop(s));
    return detail::mc_relay(s, cfg, [l](double g1, double gb) { return g1 * gb / (g1 + l); });
}

inline CapacityEstimate mc_ergodic_irs(const ScenarioIrs& s, Receiver r, const McConfig& cfg) {
    const auto res = mc_secrecy_irs(s, cfg);
    return r == Receiver::legit ? res.legit : res.eve;
}

inline CapacityEstimate mc_ergodic_df(const ScenarioRelay& s, Receiver r, const McConfig& cfg) {
    const auto res = mc_secrecy_df(s, cfg);
    return r == Receiver::legit ? res.legit : res.eve;
}

inline CapacityEstimate mc_ergodic_affg(const ScenarioRelay& s, Receiver r, const McConfig& cfg) {
    const auto res = mc_secrecy_affg(s, cfg);
    return r == Receiver::legit ? res.legit : res.eve;
}

/// Secrecy max(C_L - C_E, 0) for the relay architectures (df or affg).
inline McSecrecyResult mc_secrecy(const ScenarioRelay& s, Architecture arch, const McConfig& cfg) {
    if (arch == Architecture::df) return mc_secrecy_df(s, cfg);
    if (arch == Architecture::affg) return mc_secrecy_affg(s, cfg);
    throw ParameterError("mc_secrecy: relay scenario needs the df or affg architecture");
}

inline McSecrecyResult mc_secrecy(const ScenarioIrs& s, const McConfig& cfg) {
    return mc_secrecy_irs(s, cfg);
}

}  // namespace plsec
