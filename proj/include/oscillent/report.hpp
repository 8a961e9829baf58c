#pragma once

// Command runner shared by the CLI and the tests: each command evaluates one or
// more engines and collects the results, their pairwise deltas, and pass/fail
// verdicts against fixed tolerances into a ComparisonReport.

#include "oscillent/config.hpp"
#include "oscillent/entropy_result.hpp"
#include "oscillent/model.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace oscillent {

enum class Command { modes, classical, quantum, wkb, ground, compare, sweep, trajectory };

std::string_view to_string(Command c);
/// Throws FormatError for an unknown name.
Command command_from_string(std::string_view name);

struct RunConfig {
    Command command = Command::compare;
    ModelParams params;
    StateSpec state;
    /// Engine selector: "all" or one EntropyMethod name.
    std::string method = "all";
    std::size_t samples = 1'000'000;  // torus Monte Carlo sample count
    std::uint64_t seed = 1;
    std::size_t grid_points = 0;      // 0: automatic grid; else slow-axis point count
    unsigned jobs = 0;
    bool strict = false;
    std::string out_dir;              // empty: no files written
    bool use_cache = true;

    // sweep
    std::string vary = "C";
    double from = 0.05;
    double to = 0.5;
    std::size_t points = 10;

    // trajectory
    std::size_t steps = 1'000'000;
    double dt = 0.0;                  // 0: 0.01 / omega2
    std::size_t stride = 1;

    /// Reference configuration: omega = 1, Omega^2 = 10, C = 0.3, E1 = 20, E2 = 200, hbar = 1, Delta = h/2.
    static RunConfig reference();
};

/// Flat key/value form: model keys plus method, samples, seed, grid_points, jobs,
/// strict, out, vary, from, to, points, steps, dt, stride, cache.
RunConfig run_config_from_key_values(const KeyValues& kv, RunConfig base = RunConfig::reference());
KeyValues to_key_values(const RunConfig& config);

struct PairDelta {
    std::string a;
    std::string b;
    double delta = 0.0;  // value(a) - value(b)
};

struct Verdict {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct ComparisonReport {
    Command command = Command::compare;
    RunConfig config;
    NormalModes modes;
    RegimeReport regime;
    std::vector<EntropyResult> results;
    std::vector<PairDelta> deltas;
    std::vector<Verdict> verdicts;
    nlohmann::json data = nlohmann::json::object();
    std::vector<std::string> files;     // artifacts written under out_dir
    std::vector<std::string> warnings;
    double seconds = 0.0;

    [[nodiscard]] const EntropyResult* find(EntropyMethod m) const;
};

nlohmann::json to_json_report(const ComparisonReport& report);
std::string format_text_report(const ComparisonReport& report);

/// 0 on success; 2 when strict and the regime checks fail.
int exit_code(const ComparisonReport& report);

/// Deterministic given (config, seed) apart from the `seconds` field.
/// Throws on computation errors.
ComparisonReport run(const RunConfig& config);

} // namespace oscillent
