#pragma once

// On-disk cache of reduced density kernels. Each entry is a binary matrix dump
// `<key>.bin` plus a JSON sidecar `<key>.json` carrying the checksum of the
// binary and the inputs that produced it. Entries that fail to parse or whose
// checksum does not match are deleted and treated as misses.

#include "oscillent/quantum.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace oscillent {

class KernelCache {
public:
    explicit KernelCache(std::filesystem::path dir);

    /// Directory from $OSCILLENT_CACHE, else ./.oscillent-cache.
    static KernelCache from_environment();

    [[nodiscard]] const std::filesystem::path& directory() const { return dir_; }

    /// Key over (params, state, grid spec, kind).
    static std::uint64_t key(const ModelParams& params, const StateSpec& state, const KernelGridSpec& spec,
                             std::string_view kind);

    [[nodiscard]] std::optional<ReducedDensityMatrix> load(std::uint64_t key) const;
    void store(std::uint64_t key, const ReducedDensityMatrix& rdm, const ModelParams& params,
               std::string_view kind) const;

    /// Number of corrupted entries removed by this instance so far.
    [[nodiscard]] std::size_t invalidated() const { return invalidated_; }

private:
    std::filesystem::path dir_;
    mutable std::size_t invalidated_ = 0;
};

/// reduced_density_kernel with a read-through cache (cache may be null).
ReducedDensityMatrix cached_reduced_density_kernel(const KernelCache* cache, const StateSpec& state,
                                                   const ModelParams& params, const KernelGridSpec& spec,
                                                   const KernelOptions& options = {});

/// Binary matrix dump: magic "OSCKRNL1", u64 key, u64 grid size N, then grid
/// nodes, grid weights, grid half-width, and the N x N kernel column-major.
std::string serialize_kernel(std::uint64_t key, const ReducedDensityMatrix& rdm);
ReducedDensityMatrix deserialize_kernel(std::string_view bytes, std::uint64_t expected_key);

} // namespace oscillent
