#include "oscillent/kernel_cache.hpp"

#include "binary_io.hpp"
#include "oscillent/config.hpp"
#include "oscillent/errors.hpp"

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

namespace oscillent {

namespace {

constexpr char kKernelMagic[8] = {'O', 'S', 'C', 'K', 'R', 'N', 'L', '1'};

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

std::string serialize_kernel(std::uint64_t key, const ReducedDensityMatrix& rdm) {
    std::ostringstream out(std::ios::binary);
    out.write(kKernelMagic, 8);
    detail::put_u64(out, key);
    const std::size_t n = rdm.grid.size();
    detail::put_u64(out, n);
    detail::put_f64s(out, rdm.grid.nodes);
    detail::put_f64s(out, rdm.grid.weights);
    const double hw = rdm.grid.half_width;
    detail::put_f64s(out, std::span<const double>(&hw, 1));
    detail::put_f64s(out, std::span<const double>(rdm.kernel.data(), n * n));
    return out.str();
}

ReducedDensityMatrix deserialize_kernel(std::string_view bytes, std::uint64_t expected_key) {
    std::istringstream in(std::string(bytes), std::ios::binary);
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, kKernelMagic, 8) != 0) {
        throw FormatError("kernel file: bad magic");
    }
    if (detail::get_u64(in) != expected_key) throw FormatError("kernel file: key mismatch");
    const std::uint64_t n = detail::get_u64(in);
    if (n == 0 || bytes.size() != 24 + 8 * (2 * n + 1 + n * n)) throw FormatError("kernel file: bad size");
    ReducedDensityMatrix rdm;
    rdm.grid.nodes.resize(n);
    rdm.grid.weights.resize(n);
    detail::get_f64s(in, rdm.grid.nodes);
    detail::get_f64s(in, rdm.grid.weights);
    detail::get_f64s(in, std::span<double>(&rdm.grid.half_width, 1));
    const auto ni = static_cast<Eigen::Index>(n);
    rdm.kernel.resize(ni, ni);
    detail::get_f64s(in, std::span<double>(rdm.kernel.data(), n * n));
    return rdm;
}

KernelCache::KernelCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

KernelCache KernelCache::from_environment() {
    const char* env = std::getenv("OSCILLENT_CACHE");
    return KernelCache(env != nullptr && *env != '\0' ? std::filesystem::path(env)
                                                      : std::filesystem::path(".oscillent-cache"));
}

std::uint64_t KernelCache::key(const ModelParams& params, const StateSpec& state, const KernelGridSpec& spec,
                               std::string_view kind) {
    std::string extra(kind);
    extra += '|' + format_double(spec.Lx) + '|' + std::to_string(spec.Nx) + '|' + format_double(spec.Ly) + '|' +
             std::to_string(spec.Ny);
    return content_hash(params, state, extra);
}

std::optional<ReducedDensityMatrix> KernelCache::load(std::uint64_t key) const {
    const std::string stem = hex64(key);
    const auto bin = dir_ / (stem + ".bin");
    const auto side = dir_ / (stem + ".json");
    std::error_code ec;
    if (!std::filesystem::exists(bin, ec) && !std::filesystem::exists(side, ec)) return std::nullopt;
    try {
        const nlohmann::json meta = nlohmann::json::parse(read_file(side));
        const std::string bytes = read_file(bin);
        if (meta.at("checksum").get<std::string>() != hex64(fnv1a(bytes))) {
            throw FormatError("checksum mismatch");
        }
        ReducedDensityMatrix rdm = deserialize_kernel(bytes, key);
        rdm.state = meta.at("state").get<StateSpec>();
        return rdm;
    } catch (const std::exception&) {
        std::filesystem::remove(bin, ec);
        std::filesystem::remove(side, ec);
        ++invalidated_;
        return std::nullopt;
    }
}

void KernelCache::store(std::uint64_t key, const ReducedDensityMatrix& rdm, const ModelParams& params,
                        std::string_view kind) const {
    std::filesystem::create_directories(dir_);
    const std::string stem = hex64(key);
    const std::string bytes = serialize_kernel(key, rdm);
    nlohmann::json meta = {{"key", stem},
                           {"kind", std::string(kind)},
                           {"size", rdm.grid.size()},
                           {"checksum", hex64(fnv1a(bytes))},
                           {"params", params},
                           {"state", rdm.state}};
    // Binary first: a sidecar without a matching binary is treated as corrupt.
    const auto bin = dir_ / (stem + ".bin");
    const auto side = dir_ / (stem + ".json");
    {
        std::ofstream out(bin, std::ios::binary | std::ios::trunc);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw Error("cannot write " + bin.string());
    }
    std::ofstream out(side, std::ios::trunc);
    out << meta.dump(2) << '\n';
    if (!out) throw Error("cannot write " + side.string());
}

ReducedDensityMatrix cached_reduced_density_kernel(const KernelCache* cache, const StateSpec& state,
                                                   const ModelParams& params, const KernelGridSpec& spec,
                                                   const KernelOptions& options) {
    if (cache == nullptr) return reduced_density_kernel(state, params, spec, options);
    const std::uint64_t k = KernelCache::key(params, state, spec, "exact");
    if (auto hit = cache->load(k)) return std::move(*hit);
    ReducedDensityMatrix rdm = reduced_density_kernel(state, params, spec, options);
    cache->store(k, rdm, params, "exact");
    return rdm;
}

} // namespace oscillent
