#include "oscillent/report.hpp"

#include "oscillent/classical_entropy.hpp"
#include "oscillent/errors.hpp"
#include "oscillent/kernel_cache.hpp"
#include "oscillent/knn_entropy.hpp"
#include "oscillent/marginal.hpp"
#include "oscillent/parallel.hpp"
#include "oscillent/quantum.hpp"
#include "oscillent/rng.hpp"
#include "oscillent/sampling.hpp"
#include "oscillent/svg.hpp"
#include "oscillent/trajectory.hpp"
#include "oscillent/wkb.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace oscillent {

namespace {

constexpr std::pair<Command, std::string_view> kCommandNames[] = {
    {Command::modes, "modes"},     {Command::classical, "classical"}, {Command::quantum, "quantum"},
    {Command::wkb, "wkb"},         {Command::ground, "ground"},       {Command::compare, "compare"},
    {Command::sweep, "sweep"},     {Command::trajectory, "trajectory"},
};

// Tolerances of the method-versus-closed-form checks.
struct Tolerance {
    EntropyMethod method;
    double value;
};
constexpr Tolerance kTolerances[] = {
    {EntropyMethod::quadrature, 1e-3},     {EntropyMethod::torus_mc, 0.05},
    {EntropyMethod::trajectory, 0.1},      {EntropyMethod::exact_kernel, 0.15},
    {EntropyMethod::wkb_closed_form, 1e-12}, {EntropyMethod::wkb_spectrum_quadrature, 1e-6},
    {EntropyMethod::wkb_kernel, 0.1},
};

bool wants(const RunConfig& c, EntropyMethod m) { return c.method == "all" || c.method == to_string(m); }

std::string out_path(const RunConfig& c, const std::string& name) {
    return (std::filesystem::path(c.out_dir) / name).string();
}

void add_closed_form_deltas(ComparisonReport& r) {
    const EntropyResult* ref = r.find(EntropyMethod::closed_form);
    if (ref == nullptr) return;
    for (const EntropyResult& e : r.results) {
        if (e.method == EntropyMethod::closed_form) continue;
        const double d = e.value - ref->value;
        r.deltas.push_back({std::string(to_string(e.method)), "closed_form", d});
        for (const Tolerance& t : kTolerances) {
            if (t.method == e.method) {
                r.verdicts.push_back({std::string(to_string(e.method)) + "_vs_closed_form", std::abs(d), t.value,
                                      std::abs(d) <= t.value});
            }
        }
    }
}

KernelGridSpec exact_start_grid(const RunConfig& c, const StateSpec& state, const ModelParams& params) {
    KernelGridSpec spec = default_grid_spec(state, params);
    if (c.grid_points > 1) {
        const double ratio = static_cast<double>(spec.Ny) / static_cast<double>(spec.Nx);
        spec.Nx = c.grid_points;
        spec.Ny = std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(ratio * static_cast<double>(c.grid_points))));
    }
    return spec;
}

ConvergedEntropy exact_entropy(const RunConfig& c, const StateSpec& state, const ModelParams& params) {
    std::optional<KernelCache> cache;
    if (c.use_cache) cache = KernelCache::from_environment();
    KernelOptions opts;
    opts.jobs = c.jobs;
    return converged_kernel_entropy(
        [&](const KernelGridSpec& spec) {
            return cached_reduced_density_kernel(cache ? &*cache : nullptr, state, params, spec, opts);
        },
        exact_start_grid(c, state, params));
}

EntropyResult wkb_kernel_entropy(const RunConfig& c, const StateSpec& state, const ModelParams& params) {
    const Grid grid = wkb_kernel_grid(state, params, c.grid_points);
    WkbKernelOptions opts;
    opts.jobs = c.jobs;
    const SchmidtSpectrum s = schmidt_spectrum(wkb_reduced_density(state, params, grid, opts));
    EntropyResult r;
    r.method = EntropyMethod::wkb_kernel;
    r.value = s.entropy;
    r.metadata = {{"grid_points", grid.size()}, {"trace", s.trace}, {"effective_rank", s.effective_rank()}};
    return r;
}

struct TrajectoryOutcome {
    EntropyResult entropy;
    Trajectory trajectory;
};

TrajectoryOutcome trajectory_entropy(const RunConfig& c, const StateSpec& state, const ModelParams& params) {
    const NormalModes nm = normal_modes(params);
    CounterRng rng(c.seed, 0x7472616aULL);
    const double phi1 = 2.0 * std::numbers::pi * rng.uniform();
    const double phi2 = 2.0 * std::numbers::pi * rng.uniform();
    const double dt = c.dt > 0.0 ? c.dt : 0.01 / std::max(nm.omega1, nm.omega2);
    TrajectoryOutcome out;
    out.trajectory = integrate_trajectory(torus_point(state, nm, phi1, phi2), params, dt, c.steps, c.stride);
    KnnOptions ko;
    ko.seed = c.seed;
    ko.jobs = c.jobs;
    ko.min_samples = std::min<std::size_t>(ko.min_samples, out.trajectory.samples.size());
    out.entropy = entropy_knn(out.trajectory.samples, params.delta_cell, ko);
    out.entropy.method = EntropyMethod::trajectory;
    const DriftReport& d = out.trajectory.drift;
    out.entropy.metadata["steps"] = d.steps;
    out.entropy.metadata["dt"] = d.dt;
    out.entropy.metadata["stride"] = c.stride;
    out.entropy.metadata["max_rel_dev_E_plus"] = d.max_rel_dev_E_plus;
    out.entropy.metadata["max_rel_dev_E_minus"] = d.max_rel_dev_E_minus;
    out.entropy.metadata["secular_drift_E_plus"] = d.secular_drift_E_plus;
    out.entropy.metadata["secular_drift_E_minus"] = d.secular_drift_E_minus;
    return out;
}

void run_classical(const RunConfig& c, ComparisonReport& r, bool include_trajectory) {
    const ModelParams& p = c.params;
    const StateSpec& s = c.state;
    r.results.push_back(classical_entropy_closed_form(s, p));
    if (wants(c, EntropyMethod::quadrature)) r.results.push_back(classical_entropy_quadrature(s, p));
    if (wants(c, EntropyMethod::torus_mc)) {
        const SampleSet samples = sample_torus(s, p, c.samples, c.seed, c.jobs);
        KnnOptions ko;
        ko.seed = c.seed;
        ko.jobs = c.jobs;
        r.results.push_back(entropy_knn(samples, p.delta_cell, ko));
        if (!c.out_dir.empty()) {
            write_sample_file(out_path(c, "torus_samples.bin"), samples, content_hash(p, s));
            r.files.push_back("torus_samples.bin");
        }
    }
    if (include_trajectory && wants(c, EntropyMethod::trajectory)) {
        r.results.push_back(trajectory_entropy(c, s, p).entropy);
    }
    if (!c.out_dir.empty()) {
        // W(x, px) heatmap over the bounding box of the outer band edge.
        const MarginalDensity w(p, s);
        const double A = 2.0 * std::abs(p.C) / (p.Omega * p.Omega) * 2.0 * std::sqrt(s.E1 * s.E2);
        const double rmax = 1.05 * std::sqrt(2.0 * s.E1 + A);
        const std::size_t rows = 120, cols = 160;
        std::vector<double> values(rows * cols);
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < cols; ++j) {
                const double px = -rmax + 2.0 * rmax * (static_cast<double>(i) + 0.5) / rows;
                const double x = (-rmax + 2.0 * rmax * (static_cast<double>(j) + 0.5) / cols) / p.omega;
                const DensityValue v = w(x, px);
                values[i * cols + j] = v.on_boundary ? 0.0 : v.value;
            }
        }
        if (write_heatmap_svg(out_path(c, "marginal_heatmap.svg"), values, rows, cols, -rmax / p.omega,
                              rmax / p.omega, -rmax, rmax,
                              {"Marginal phase-space density W(x, px)", "x [length]", "px [momentum]"})) {
            r.files.push_back("marginal_heatmap.svg");
        }
    }
}

void spectrum_figure(const RunConfig& c, ComparisonReport& r, const SchmidtSpectrum& spec, double dn_max) {
    if (c.out_dir.empty()) return;
    Series exact{"exact kernel eigenvalues", {}, {}, true};
    for (std::size_t k = 0; k < spec.eigenvalues.size() && spec.eigenvalues[k] >= 1e-4; ++k) {
        exact.x.push_back(static_cast<double>(k / 2) + 0.5);
        exact.y.push_back(spec.eigenvalues[k]);
    }
    Series arcsine{"arcsine lambda(dn)", {}, {}, false};
    const LambdaSpectrum ls{dn_max, {}};
    for (int i = 0; i < 200; ++i) {
        const double dn = dn_max * std::sin(0.5 * std::numbers::pi * (i + 0.5) / 200.0);
        arcsine.x.push_back(dn);
        arcsine.y.push_back(ls.density(dn));
    }
    if (write_line_plot_svg(out_path(c, "schmidt_spectrum.svg"), {exact, arcsine},
                            {"Schmidt spectrum", "dn [quanta]", "probability per mode [1]"})) {
        r.files.push_back("schmidt_spectrum.svg");
    } else {
        r.warnings.push_back("spectrum figure skipped: no data");
    }
}

void run_quantum(const RunConfig& c, ComparisonReport& r) {
    const ModelParams& p = c.params;
    const StateSpec& s = c.state;
    r.results.push_back(classical_entropy_closed_form(s, p));
    const ConvergedEntropy ce = exact_entropy(c, s, p);
    r.results.push_back(ce.result);
    const double dn_max = lambda_spectrum(s, p).dn_max;
    const std::vector<double> cells = arcsine_cell_masses(std::max(dn_max, 1e-12));
    // Leading eigenvalues only; the tail below 1e-12 is round-off.
    std::vector<double> top;
    for (double v : ce.spectrum.eigenvalues) {
        if (v < 1e-12 || top.size() == 64) break;
        top.push_back(v);
    }
    r.data["spectrum"] = top;
    r.data["refinement_change"] = ce.refinement_change;
    r.data["occupied_modes"] = ce.spectrum.effective_rank();
    r.data["max_over_median"] = ce.spectrum.max_over_median();
    r.data["dn_max"] = dn_max;
    r.data["arcsine_tv_distance"] = total_variation(ce.spectrum.eigenvalues, cells);
    if (s.n == 0 && s.m == 0) r.results.push_back(ground_state_entropy_smallC(p));
    try {
        const LowExcitationResult le = low_excitation_entropy(s, p);
        r.results.push_back(le.entropy);
    } catch (const RegimeError& e) {
        r.warnings.push_back(e.what());
    }
    spectrum_figure(c, r, ce.spectrum, dn_max);
}

void run_wkb(const RunConfig& c, ComparisonReport& r) {
    const ModelParams& p = c.params;
    const StateSpec& s = c.state;
    r.results.push_back(classical_entropy_closed_form(s, p));
    r.results.push_back(wkb_entropy(s, p));
    r.results.push_back(wkb_entropy_quadrature(s, p));
    if (wants(c, EntropyMethod::wkb_kernel)) r.results.push_back(wkb_kernel_entropy(c, s, p));
    const LambdaSpectrum ls = lambda_spectrum(s, p);
    r.data["dn_max"] = ls.dn_max;
    for (const std::string& w : ls.warnings) r.warnings.push_back(w);
    if (!c.out_dir.empty() && ls.dn_max > 0.0) {
        std::ofstream csv(out_path(c, "lambda_spectrum.csv"));
        write_spectrum_csv(csv, ls);
        r.files.push_back("lambda_spectrum.csv");
    }
}

void run_ground(const RunConfig& c, ComparisonReport& r) {
    const ModelParams& p = c.params;
    const EntropyResult approx = ground_state_entropy_smallC(p);
    r.results.push_back(approx);
    const StateSpec vac = StateSpec::from_quanta(0, 0, p);
    RunConfig cc = c;
    EntropyResult exact = exact_entropy(cc, vac, p).result;
    r.results.push_back(exact);
    const double rel = approx.value > 0.0 ? (exact.value - approx.value) / approx.value : 0.0;
    r.data["f"] = approx.metadata["f"];
    r.data["relative_deviation"] = rel;
    r.verdicts.push_back({"exact_vs_small_coupling_relative", std::abs(rel), 0.10, std::abs(rel) <= 0.10});
}

void run_modes(const RunConfig& c, ComparisonReport& r) {
    const NormalModes& nm = r.modes;
    r.data = {{"alpha", nm.alpha},
              {"beta", nm.beta},
              {"omega1", nm.omega1},
              {"omega2", nm.omega2},
              {"alpha2_plus_beta2", nm.alpha * nm.alpha + nm.beta * nm.beta},
              {"dn_max", lambda_spectrum(c.state, c.params).dn_max},
              {"E_plus", c.state.E_plus()},
              {"E_minus", c.state.E_minus()}};
}

void run_trajectory_cmd(const RunConfig& c, ComparisonReport& r) {
    r.results.push_back(classical_entropy_closed_form(c.state, c.params));
    TrajectoryOutcome t = trajectory_entropy(c, c.state, c.params);
    r.results.push_back(t.entropy);
    const DriftReport& d = t.trajectory.drift;
    r.data = {{"max_rel_dev_E_plus", d.max_rel_dev_E_plus},
              {"max_rel_dev_E_minus", d.max_rel_dev_E_minus},
              {"secular_drift_E_plus", d.secular_drift_E_plus},
              {"secular_drift_E_minus", d.secular_drift_E_minus},
              {"steps", d.steps},
              {"dt", d.dt},
              {"samples", t.trajectory.samples.size()}};
    if (!c.out_dir.empty()) {
        write_sample_file(out_path(c, "trajectory_samples.bin"), t.trajectory.samples,
                          content_hash(c.params, c.state));
        r.files.push_back("trajectory_samples.bin");
    }
}

struct SweepRow {
    double value = 0.0;
    double closed = 0.0;
    double quadrature = 0.0;
    double wkb = 0.0;
    double exact = std::numeric_limits<double>::quiet_NaN();
    double dn_max = 0.0;
};

void run_sweep(const RunConfig& c, ComparisonReport& r) {
    if (c.points < 2) throw DomainError("sweep: need at least 2 points");
    if (!(c.from > 0.0) || !(c.to > 0.0)) throw DomainError("sweep: range must be positive");
    static const char* const kVary[] = {"C", "omega", "Omega", "E1", "E2"};
    if (std::find(std::begin(kVary), std::end(kVary), c.vary) == std::end(kVary)) {
        throw DomainError("sweep: --vary must be one of C, omega, Omega, E1, E2");
    }
    const bool exact = c.method == "all" || c.method == "exact_kernel";
    std::vector<SweepRow> rows(c.points);
    // Points run concurrently; each writes only its own row.
    parallel_for(c.points, c.jobs, [&](std::size_t i) {
        const double t = static_cast<double>(i) / static_cast<double>(c.points - 1);
        const double v = c.from * std::pow(c.to / c.from, t);
        ModelParams p = c.params;
        double E1 = c.state.E1, E2 = c.state.E2;
        if (c.vary == "C") p.C = v;
        if (c.vary == "omega") p.omega = v;
        if (c.vary == "Omega") p.Omega = v;
        if (c.vary == "E1") E1 = v;
        if (c.vary == "E2") E2 = v;
        const StateSpec s = StateSpec::from_energies(E1, E2, p);
        SweepRow& row = rows[i];
        row.value = v;
        row.closed = classical_entropy_closed_form(s, p).value;
        row.quadrature = classical_entropy_quadrature(s, p).value;
        row.wkb = wkb_entropy(s, p).value;
        row.dn_max = lambda_spectrum(s, p).dn_max;
        if (exact) {
            RunConfig single = c;
            single.jobs = 1;
            row.exact = exact_entropy(single, s, p).result.value;
        }
    });

    nlohmann::json table = nlohmann::json::array();
    for (const SweepRow& row : rows) {
        table.push_back({{c.vary, row.value},
                         {"S_CE", row.closed},
                         {"S_quadrature", row.quadrature},
                         {"S_WKB", row.wkb},
                         {"S_exact", exact ? nlohmann::json(row.exact) : nlohmann::json(nullptr)},
                         {"dn_max", row.dn_max}});
    }
    r.data = {{"vary", c.vary}, {"rows", table}};
    if (c.out_dir.empty()) return;

    std::ofstream csv(out_path(c, "sweep.csv"));
    csv << c.vary << ",ln_" << c.vary << ",S_CE,S_quadrature,S_WKB,S_exact,dn_max\n";
    for (const SweepRow& row : rows) {
        csv << format_double(row.value) << ',' << format_double(std::log(row.value)) << ','
            << format_double(row.closed) << ',' << format_double(row.quadrature) << ',' << format_double(row.wkb)
            << ',' << (exact ? format_double(row.exact) : std::string()) << ',' << format_double(row.dn_max)
            << '\n';
    }
    r.files.push_back("sweep.csv");

    Series ce{"classical closed form", {}, {}, false};
    Series wk{"WKB", {}, {}, true};
    Series ex{"exact kernel", {}, {}, true};
    for (const SweepRow& row : rows) {
        const double lv = std::log(row.value);
        ce.x.push_back(lv);
        ce.y.push_back(row.closed);
        wk.x.push_back(lv);
        wk.y.push_back(row.wkb);
        if (exact) {
            ex.x.push_back(lv);
            ex.y.push_back(row.exact);
        }
    }
    std::vector<Series> series{ce, wk};
    if (exact) series.push_back(ex);
    if (write_line_plot_svg(out_path(c, "entropy_vs_log.svg"), series,
                            {"Entanglement entropy sweep", "ln " + c.vary + " [ln of model units]", "S [nats]"})) {
        r.files.push_back("entropy_vs_log.svg");
    }
}

void run_compare(const RunConfig& c, ComparisonReport& r) {
    run_classical(c, r, true);
    const ModelParams& p = c.params;
    const StateSpec& s = c.state;
    if (wants(c, EntropyMethod::exact_kernel)) {
        const ConvergedEntropy ce = exact_entropy(c, s, p);
        r.results.push_back(ce.result);
        const double dn_max = lambda_spectrum(s, p).dn_max;
        r.data["occupied_modes"] = ce.spectrum.effective_rank();
        r.data["arcsine_tv_distance"] = total_variation(ce.spectrum.eigenvalues, arcsine_cell_masses(std::max(dn_max, 1e-12)));
        spectrum_figure(c, r, ce.spectrum, dn_max);
    }
    if (wants(c, EntropyMethod::wkb_kernel)) r.results.push_back(wkb_kernel_entropy(c, s, p));
    r.results.push_back(wkb_entropy(s, p));
}

} // namespace

std::string_view to_string(Command c) {
    for (const auto& [cmd, name] : kCommandNames) {
        if (cmd == c) return name;
    }
    return "unknown";
}

Command command_from_string(std::string_view name) {
    for (const auto& [cmd, n] : kCommandNames) {
        if (n == name) return cmd;
    }
    throw FormatError("unknown command: " + std::string(name));
}

RunConfig RunConfig::reference() {
    RunConfig c;
    c.params.omega = 1.0;
    c.params.Omega = std::sqrt(10.0);
    c.params.C = 0.3;
    c.params.hbar = 1.0;
    c.params.delta_cell = std::numbers::pi;
    c.state = StateSpec::from_energies(20.0, 200.0, c.params);
    return c;
}

RunConfig run_config_from_key_values(const KeyValues& kv, RunConfig base) {
    RunConfig c = base;
    // A new hbar without an explicit cell moves the cell to pi*hbar.
    ModelParams p = c.params;
    if (kv.count("hbar") != 0 && kv.count("delta_cell") == 0) {
        p.hbar = get_double(kv, "hbar", p.hbar);
        p.delta_cell = std::numbers::pi * p.hbar;
    }
    c.params = params_from_key_values(kv, p);
    c.params.validate();
    if (kv.count("E1") != 0 || kv.count("E2") != 0 || kv.count("n") != 0 || kv.count("m") != 0) {
        StateSpec s = c.state;
        if (kv.count("E1") == 0 && kv.count("E2") == 0) {
            s = StateSpec::from_quanta(get_int(kv, "n", s.n), get_int(kv, "m", s.m), c.params);
        } else {
            s = StateSpec::from_energies(get_double(kv, "E1", s.E1), get_double(kv, "E2", s.E2), c.params);
        }
        c.state = s;
    } else {
        c.state = StateSpec::from_energies(c.state.E1, c.state.E2, c.params);
    }
    if (auto v = get_string(kv, "command")) c.command = command_from_string(*v);
    if (auto v = get_string(kv, "method")) c.method = *v;
    if (auto v = get_string(kv, "out")) c.out_dir = *v;
    if (auto v = get_string(kv, "vary")) c.vary = *v;
    c.samples = static_cast<std::size_t>(get_int(kv, "samples", static_cast<std::int64_t>(c.samples)));
    c.seed = static_cast<std::uint64_t>(get_int(kv, "seed", static_cast<std::int64_t>(c.seed)));
    c.grid_points = static_cast<std::size_t>(get_int(kv, "grid_points", static_cast<std::int64_t>(c.grid_points)));
    c.jobs = static_cast<unsigned>(get_int(kv, "jobs", c.jobs));
    c.strict = get_int(kv, "strict", c.strict ? 1 : 0) != 0;
    c.use_cache = get_int(kv, "cache", c.use_cache ? 1 : 0) != 0;
    c.from = get_double(kv, "from", c.from);
    c.to = get_double(kv, "to", c.to);
    c.points = static_cast<std::size_t>(get_int(kv, "points", static_cast<std::int64_t>(c.points)));
    c.steps = static_cast<std::size_t>(get_int(kv, "steps", static_cast<std::int64_t>(c.steps)));
    c.dt = get_double(kv, "dt", c.dt);
    c.stride = static_cast<std::size_t>(get_int(kv, "stride", static_cast<std::int64_t>(c.stride)));
    return c;
}

KeyValues to_key_values(const RunConfig& c) {
    KeyValues kv = to_key_values(c.params);
    for (const auto& [k, v] : to_key_values(c.state)) kv[k] = v;
    kv["command"] = std::string(to_string(c.command));
    kv["method"] = c.method;
    kv["samples"] = std::to_string(c.samples);
    kv["seed"] = std::to_string(c.seed);
    kv["grid_points"] = std::to_string(c.grid_points);
    kv["strict"] = c.strict ? "1" : "0";
    kv["cache"] = c.use_cache ? "1" : "0";
    kv["vary"] = c.vary;
    kv["from"] = format_double(c.from);
    kv["to"] = format_double(c.to);
    kv["points"] = std::to_string(c.points);
    kv["steps"] = std::to_string(c.steps);
    kv["dt"] = format_double(c.dt);
    kv["stride"] = std::to_string(c.stride);
    return kv;
}

const EntropyResult* ComparisonReport::find(EntropyMethod m) const {
    for (const EntropyResult& r : results) {
        if (r.method == m) return &r;
    }
    return nullptr;
}

nlohmann::json to_json_report(const ComparisonReport& r) {
    nlohmann::json deltas = nlohmann::json::array();
    for (const PairDelta& d : r.deltas) deltas.push_back({{"a", d.a}, {"b", d.b}, {"delta", d.delta}});
    nlohmann::json verdicts = nlohmann::json::array();
    for (const Verdict& v : r.verdicts) {
        verdicts.push_back({{"name", v.name}, {"value", v.value}, {"tolerance", v.tolerance}, {"pass", v.pass}});
    }
    nlohmann::json config = {{"method", r.config.method},  {"samples", r.config.samples},
                             {"seed", r.config.seed},      {"grid_points", r.config.grid_points},
                             {"strict", r.config.strict}};
    if (r.command == Command::sweep) {
        config["vary"] = r.config.vary;
        config["from"] = r.config.from;
        config["to"] = r.config.to;
        config["points"] = r.config.points;
    }
    if (r.command == Command::trajectory || r.command == Command::compare) {
        config["steps"] = r.config.steps;
        config["dt"] = r.config.dt;
        config["stride"] = r.config.stride;
    }
    return {{"schema_version", 1},
            {"command", std::string(to_string(r.command))},
            {"params", r.config.params},
            {"state", r.config.state},
            {"normal_modes", r.modes},
            {"regime", r.regime},
            {"config", config},
            {"results", r.results},
            {"deltas", deltas},
            {"verdicts", verdicts},
            {"data", r.data},
            {"files", r.files},
            {"warnings", r.warnings},
            {"timing", {{"seconds", r.seconds}}}};
}

std::string format_text_report(const ComparisonReport& r) {
    std::ostringstream out;
    const ModelParams& p = r.config.params;
    const StateSpec& s = r.config.state;
    out << fmt::format("command   {}\n", to_string(r.command));
    out << fmt::format("params    omega={} Omega={} C={} hbar={} delta_cell={}\n", p.omega, p.Omega, p.C, p.hbar,
                       p.delta_cell);
    out << fmt::format("state     n={} m={} E1={} E2={}\n", s.n, s.m, s.E1, s.E2);
    out << fmt::format("modes     alpha={:.6f} beta={:.6f} omega1={:.6f} omega2={:.6f}\n", r.modes.alpha,
                       r.modes.beta, r.modes.omega1, r.modes.omega2);
    out << fmt::format("regime    weak_coupling={} classicality={} hierarchy={} entropy_positive={}\n",
                       r.regime.weak_coupling_ok, r.regime.classicality_ok, r.regime.hierarchy_ok,
                       r.regime.entropy_positive);
    for (const EntropyResult& e : r.results) {
        out << fmt::format("entropy   {:<24} {:>12.6f}", to_string(e.method), e.value);
        if (e.uncertainty > 0.0) out << fmt::format(" +- {:.2e}", e.uncertainty);
        out << '\n';
    }
    for (const PairDelta& d : r.deltas) out << fmt::format("delta     {} - {} = {:+.6f}\n", d.a, d.b, d.delta);
    for (const Verdict& v : r.verdicts) {
        out << fmt::format("verdict   {:<40} {} ({:.3e} vs {:.1e})\n", v.name, v.pass ? "PASS" : "FAIL", v.value,
                           v.tolerance);
    }
    if (!r.data.empty()) out << "data      " << r.data.dump() << '\n';
    for (const std::string& f : r.files) out << "file      " << f << '\n';
    for (const std::string& w : r.warnings) out << "warning   " << w << '\n';
    return out.str();
}

int exit_code(const ComparisonReport& r) { return r.config.strict && !r.regime.all_ok() ? 2 : 0; }

ComparisonReport run(const RunConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    config.params.validate();
    ComparisonReport r;
    r.command = config.command;
    r.config = config;
    r.modes = normal_modes(config.params);
    r.regime = validate_regime(config.params, config.state);
    for (const std::string& v : r.regime.violations()) r.warnings.push_back("regime: " + v);
    if (!config.out_dir.empty()) std::filesystem::create_directories(config.out_dir);

    switch (config.command) {
    case Command::modes: run_modes(config, r); break;
    case Command::classical: run_classical(config, r, true); break;
    case Command::quantum: run_quantum(config, r); break;
    case Command::wkb: run_wkb(config, r); break;
    case Command::ground: run_ground(config, r); break;
    case Command::compare: run_compare(config, r); break;
    case Command::sweep: run_sweep(config, r); break;
    case Command::trajectory: run_trajectory_cmd(config, r); break;
    }
    add_closed_form_deltas(r);
    for (const EntropyResult& e : r.results) {
        for (const std::string& w : e.warnings) r.warnings.push_back(std::string(to_string(e.method)) + ": " + w);
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!config.out_dir.empty()) {
        std::ofstream json(out_path(config, "report.json"));
        json << to_json_report(r).dump(2) << '\n';
    }
    return r;
}

} // namespace oscillent
