// Command-line front end: oscillent <command> [flags]

#include "oscillent/config.hpp"
#include "oscillent/errors.hpp"
#include "oscillent/report.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

namespace {

// Flag, config key, help. Values are kept as text and overlaid on the config file.
struct ValueFlag {
    const char* flag;
    const char* key;
    const char* help;
};

const ValueFlag kValueFlags[] = {
    {"--omega", "omega", "slow oscillator frequency"},
    {"--Omega", "Omega", "fast oscillator frequency"},
    {"--C", "C", "bilinear coupling, |C| < omega * Omega"},
    {"--hbar", "hbar", "reduced Planck constant (default 1)"},
    {"--delta-cell", "delta_cell", "phase-space cell size (default pi * hbar)"},
    {"--n", "n", "slow-mode quantum number"},
    {"--m", "m", "fast-mode quantum number"},
    {"--E1", "E1", "slow-mode energy; overrides --n"},
    {"--E2", "E2", "fast-mode energy; overrides --m"},
    {"--method", "method", "restrict to one entropy method"},
    {"--samples", "samples", "Monte Carlo sample count"},
    {"--seed", "seed", "random seed"},
    {"--grid-points", "grid_points", "kernel grid points along x (0 = automatic)"},
    {"--jobs", "jobs", "worker threads (0 = all cores)"},
    {"--out", "out", "directory for report.json, CSV and SVG output"},
};
const ValueFlag kSweepFlags[] = {
    {"--vary", "vary", "parameter to sweep: C, omega, Omega, E1 or E2"},
    {"--from", "from", "first value"},
    {"--to", "to", "last value"},
    {"--points", "points", "number of log-spaced points"}};
const ValueFlag kTrajectoryFlags[] = {
    {"--steps", "steps", "integration steps"},
    {"--dt", "dt", "time step (0 = 0.01 / omega2)"},
    {"--stride", "stride", "keep every stride-th step"}};

struct Invocation {
    std::map<std::string, std::string> values;  // config key -> text
    std::string config_path;
    bool strict = false;
    bool json = false;
    bool no_cache = false;
};

void add_flags(CLI::App* sub, Invocation& inv, std::map<std::string, CLI::Option*>& opts) {
    auto add = [&](const ValueFlag& f) { opts[f.key] = sub->add_option(f.flag, inv.values[f.key], f.help); };
    for (const ValueFlag& f : kValueFlags) add(f);
    if (sub->get_name() == "sweep") {
        for (const ValueFlag& f : kSweepFlags) add(f);
    }
    if (sub->get_name() == "trajectory" || sub->get_name() == "compare" || sub->get_name() == "classical") {
        for (const ValueFlag& f : kTrajectoryFlags) add(f);
    }
    sub->add_option("--config", inv.config_path, "flat key = value file; flags override it");
    sub->add_flag("--strict", inv.strict, "exit with status 2 when regime checks fail");
    sub->add_flag("--json", inv.json, "print the JSON report instead of text");
    sub->add_flag("--no-cache", inv.no_cache, "do not read or write the kernel cache");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entanglement entropy of two coupled oscillators: classical, exact quantum and WKB"};
    app.require_subcommand(1);
    Invocation inv;
    std::map<std::string, std::map<std::string, CLI::Option*>> options;
    const char* commands[][2] = {
        {"modes", "normal modes and regime checks"},
        {"classical", "classical entropy: closed form, quadrature, torus Monte Carlo, trajectory"},
        {"quantum", "exact reduced density kernel entropy and spectrum"},
        {"wkb", "semiclassical Schmidt spectrum and entropy"},
        {"ground", "ground-state entanglement, closed form and exact"},
        {"compare", "all engines at one parameter point"},
        {"sweep", "entropy over a log-spaced parameter range"},
        {"trajectory", "time-average entropy and conservation along one trajectory"},
    };
    for (const auto& [name, help] : commands) add_flags(app.add_subcommand(name, help), inv, options[name]);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        const std::string command = app.get_subcommands().front()->get_name();
        oscillent::KeyValues kv;
        if (!inv.config_path.empty()) kv = oscillent::read_key_value_file(inv.config_path);
        const auto& opts = options[command];
        const bool flag_quanta = opts.at("n")->count() > 0 || opts.at("m")->count() > 0;
        const bool flag_energies = opts.at("E1")->count() > 0 || opts.at("E2")->count() > 0;
        if (flag_quanta && !flag_energies) {
            kv.erase("E1");
            kv.erase("E2");
        }
        for (const auto& [key, opt] : opts) {
            if (opt->count() > 0) kv[key] = inv.values[key];
        }
        if (inv.strict) kv["strict"] = "1";
        if (inv.no_cache) kv["cache"] = "0";
        oscillent::RunConfig config = oscillent::run_config_from_key_values(kv);
        config.command = oscillent::command_from_string(command);

        const oscillent::ComparisonReport report = oscillent::run(config);
        if (inv.json) {
            std::cout << oscillent::to_json_report(report).dump(2) << '\n';
        } else {
            std::cout << oscillent::format_text_report(report);
        }
        return oscillent::exit_code(report);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
