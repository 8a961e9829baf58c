#pragma once

// Flat `key = value` configuration files and JSON conversion of the model types.

#include "oscillent/model.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace oscillent {

using KeyValues = std::map<std::string, std::string>;

/// Parses `key = value` lines. Blank lines and lines starting with '#' are ignored;
/// a trailing `# comment` after a value is stripped. Duplicate keys: last one wins.
KeyValues parse_key_values(std::istream& in);
KeyValues read_key_value_file(const std::string& path);
void write_key_values(std::ostream& out, const KeyValues& kv);

double get_double(const KeyValues& kv, const std::string& key, double fallback);
std::int64_t get_int(const KeyValues& kv, const std::string& key, std::int64_t fallback);
std::optional<std::string> get_string(const KeyValues& kv, const std::string& key);

/// Recognized keys: omega, Omega, C, hbar, delta_cell.
ModelParams params_from_key_values(const KeyValues& kv, ModelParams base = {});
/// Recognized keys: n, m (quanta) or E1, E2 (energies). Energies win when both are given.
StateSpec state_from_key_values(const KeyValues& kv, const ModelParams& params,
                                StateSpec base = {});
KeyValues to_key_values(const ModelParams& params);
KeyValues to_key_values(const StateSpec& state);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 14695981039346656037ULL);
std::string hex64(std::uint64_t v);

/// Stable hash of the model parameters and state (used in file headers and cache keys).
std::uint64_t content_hash(const ModelParams& params, const StateSpec& state,
                           std::string_view extra = {});

void to_json(nlohmann::json& j, const ModelParams& p);
void from_json(const nlohmann::json& j, ModelParams& p);
void to_json(nlohmann::json& j, const StateSpec& s);
void from_json(const nlohmann::json& j, StateSpec& s);
void to_json(nlohmann::json& j, const NormalModes& nm);
void to_json(nlohmann::json& j, const RegimeReport& r);

} // namespace oscillent
