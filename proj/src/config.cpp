#include "oscillent/config.hpp"

#include "oscillent/errors.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace oscillent {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

} // namespace

KeyValues parse_key_values(std::istream& in) {
    KeyValues kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto hash = body.find('#');
        if (hash != std::string::npos) body = trim(body.substr(0, hash));
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw FormatError("config line " + std::to_string(lineno) + ": expected `key = value`");
        }
        std::string key = trim(body.substr(0, eq));
        std::string value = trim(body.substr(eq + 1));
        if (key.empty()) {
            throw FormatError("config line " + std::to_string(lineno) + ": empty key");
        }
        kv[std::move(key)] = std::move(value);
    }
    return kv;
}

KeyValues read_key_value_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot read config file: " + path);
    return parse_key_values(in);
}

void write_key_values(std::ostream& out, const KeyValues& kv) {
    for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
}

double get_double(const KeyValues& kv, const std::string& key, double fallback) {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        std::size_t used = 0;
        const double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument(key);
        return v;
    } catch (const std::exception&) {
        throw FormatError("config key `" + key + "`: not a number: " + it->second);
    }
}

std::int64_t get_int(const KeyValues& kv, const std::string& key, std::int64_t fallback) {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    std::int64_t v = 0;
    const auto& s = it->second;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw FormatError("config key `" + key + "`: not an integer: " + s);
    }
    return v;
}

std::optional<std::string> get_string(const KeyValues& kv, const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
}

ModelParams params_from_key_values(const KeyValues& kv, ModelParams base) {
    const bool cell_given = kv.count("delta_cell") > 0;
    base.omega = get_double(kv, "omega", base.omega);
    base.Omega = get_double(kv, "Omega", base.Omega);
    base.C = get_double(kv, "C", base.C);
    base.hbar = get_double(kv, "hbar", base.hbar);
    base.delta_cell = cell_given ? get_double(kv, "delta_cell", base.delta_cell)
                                 : std::numbers::pi * base.hbar;
    base.validate();
    return base;
}

StateSpec state_from_key_values(const KeyValues& kv, const ModelParams& params, StateSpec base) {
    if (kv.count("E1") || kv.count("E2")) {
        return StateSpec::from_energies(get_double(kv, "E1", base.E1), get_double(kv, "E2", base.E2),
                                        params);
    }
    if (kv.count("n") || kv.count("m")) {
        return StateSpec::from_quanta(get_int(kv, "n", base.n), get_int(kv, "m", base.m), params);
    }
    return base;
}

KeyValues to_key_values(const ModelParams& p) {
    return {{"omega", format_double(p.omega)},
            {"Omega", format_double(p.Omega)},
            {"C", format_double(p.C)},
            {"hbar", format_double(p.hbar)},
            {"delta_cell", format_double(p.delta_cell)}};
}

KeyValues to_key_values(const StateSpec& s) {
    return {{"n", std::to_string(s.n)},
            {"m", std::to_string(s.m)},
            {"E1", format_double(s.E1)},
            {"E2", format_double(s.E2)}};
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return buf;
    }
    return std::string(buf, ptr);
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::uint64_t content_hash(const ModelParams& p, const StateSpec& s, std::string_view extra) {
    std::string canon;
    for (const auto& [k, v] : to_key_values(p)) canon += k + "=" + v + ";";
    for (const auto& [k, v] : to_key_values(s)) canon += k + "=" + v + ";";
    canon += extra;
    return fnv1a(canon);
}

void to_json(nlohmann::json& j, const ModelParams& p) {
    j = {{"omega", p.omega}, {"Omega", p.Omega}, {"C", p.C}, {"hbar", p.hbar},
         {"delta_cell", p.delta_cell}};
}

void from_json(const nlohmann::json& j, ModelParams& p) {
    p.omega = j.at("omega").get<double>();
    p.Omega = j.at("Omega").get<double>();
    p.C = j.at("C").get<double>();
    p.hbar = j.value("hbar", 1.0);
    p.delta_cell = j.value("delta_cell", std::numbers::pi * p.hbar);
}

void to_json(nlohmann::json& j, const StateSpec& s) {
    j = {{"n", s.n},           {"m", s.m},           {"E1", s.E1},
         {"E2", s.E2},         {"E_plus", s.E_plus()}, {"E_minus", s.E_minus()}};
}

void from_json(const nlohmann::json& j, StateSpec& s) {
    s.n = j.at("n").get<std::int64_t>();
    s.m = j.at("m").get<std::int64_t>();
    s.E1 = j.at("E1").get<double>();
    s.E2 = j.at("E2").get<double>();
}

void to_json(nlohmann::json& j, const NormalModes& nm) {
    j = {{"alpha", nm.alpha},   {"beta", nm.beta},         {"omega1", nm.omega1},
         {"omega2", nm.omega2}, {"delta_freq", nm.delta_freq}};
}

void to_json(nlohmann::json& j, const RegimeReport& r) {
    const auto& q = r.ratios;
    j = {{"weak_coupling_ok", r.weak_coupling_ok},
         {"classicality_ok", r.classicality_ok},
         {"hierarchy_ok", r.hierarchy_ok},
         {"entropy_positive", r.entropy_positive},
         {"ratios",
          {{"coupling_over_omega2", q.coupling_over_omega2},
           {"omega2_over_Omega2", q.omega2_over_Omega2},
           {"mixing_over_one", q.mixing_over_one},
           {"E1_over_hbarOmega", q.E1_over_hbarOmega},
           {"E2_over_hbarOmega", q.E2_over_hbarOmega},
           {"interaction_over_hbarOmega", q.interaction_over_hbarOmega},
           {"interaction_over_min_energy", q.interaction_over_min_energy},
           {"entropy_argument", q.entropy_argument}}}};
}

} // namespace oscillent
