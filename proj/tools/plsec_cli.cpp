// plsec: secrecy-capacity sweeps, figure presets and analytic/simulation
// cross-validation.
//
// Exit status: 0 success, 1 bad input, 2 validation failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plsec/config.hpp"
#include "plsec/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitValidation = 2;

std::vector<plsec::Method> methods_for(const std::string& m) {
    if (m == "analytic") return {plsec::Method::analytic};
    if (m == "mc") return {plsec::Method::monte_carlo};
    return {plsec::Method::analytic, plsec::Method::monte_carlo};
}

void write_to(const std::string& path, const plsec::SweepResult& r) {
    if (path == "-") {
        plsec::write_csv(std::cout, r);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    plsec::write_csv(out, r);
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::size_t failed_rows(const plsec::SweepResult& r) {
    std::size_t n = 0;
    for (const auto& row : r.rows) n += row.status != "ok";
    return n;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Average secrecy capacity of reflecting-surface and relay links"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string method;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
    int threads = 0;
    int figure_id = 0;

    auto add_common = [&](CLI::App* sub, bool with_method) {
        sub->add_option("--samples", samples, "Monte Carlo samples per point")
            ->check(CLI::Range(std::int64_t{1000}, std::int64_t{1} << 40));
        sub->add_option("--seed", seed, "Master seed for the random streams");
        sub->add_option("--threads", threads, "Worker threads (0 = all cores)")
            ->check(CLI::NonNegativeNumber);
        if (with_method) {
            sub->add_option("--method", method, "Evaluation method")
                ->check(CLI::IsMember({"analytic", "mc", "both"}));
        }
    };

    auto* sweep = app.add_subcommand("sweep", "Evaluate the sweep described in a config file");
    sweep->add_option("--config", config_path, "Scenario file")->required()->check(CLI::ExistingFile);
    sweep->add_option("--out", out_path, "Output CSV ('-' for stdout)")->required();
    add_common(sweep, true);

    auto* validate = app.add_subcommand("validate", "Compare analytic and Monte Carlo estimates");
    validate->add_option("--config", config_path, "Scenario file")->required()->check(CLI::ExistingFile);
    validate->add_option("--out", out_path, "Also write the report to this file");
    add_common(validate, false);

    auto* figure = app.add_subcommand("figure", "Reference-scenario preset sweeps");
    figure->add_option("--id", figure_id, "Preset")->required()->check(CLI::IsMember({3, 4, 5, 6}));
    figure->add_option("--out", out_path, "Output CSV ('-' for stdout)")->required();
    add_common(figure, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (figure->parsed()) {
            plsec::McConfig mc;
            if (samples > 0) mc.samples = samples;
            if (figure->count("--seed")) mc.master_seed = seed;
            const auto result =
                plsec::run_figure(figure_id, methods_for(method.empty() ? "analytic" : method), mc, threads);
            write_to(out_path, result);
            std::cerr << result.rows.size() << " rows";
            if (const auto bad = failed_rows(result)) std::cerr << ", " << bad << " with errors";
            std::cerr << '\n';
            return kExitOk;
        }

        plsec::ScenarioConfig cfg = plsec::parse_config(config_path);
        if (samples > 0) cfg.mc.samples = samples;
        if ((sweep->parsed() && sweep->count("--seed")) || (validate->parsed() && validate->count("--seed"))) {
            cfg.mc.master_seed = seed;
        }

        if (sweep->parsed()) {
            if (!method.empty()) cfg.sweep.methods = methods_for(method);
            const auto result = plsec::run_sweep(cfg.sweep, cfg.scenarios, cfg.mc, threads);
            write_to(out_path, result);
            std::cerr << result.rows.size() << " rows";
            if (const auto bad = failed_rows(result)) std::cerr << ", " << bad << " with errors";
            std::cerr << '\n';
            return kExitOk;
        }

        const auto report = plsec::validate_sweep(cfg.sweep, cfg.scenarios, cfg.mc, {threads, 0.0});
        plsec::write_report(std::cout, report);
        if (!out_path.empty()) {
            std::ofstream out(out_path);
            if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
            plsec::write_report(out, report);
        }
        return report.passed() ? kExitOk : kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
}
