#include "oscillent/sampling.hpp"

#include "binary_io.hpp"
#include "oscillent/errors.hpp"
#include "oscillent/parallel.hpp"
#include "oscillent/rng.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

namespace oscillent {

namespace {
constexpr char kSampleMagic[8] = {'O', 'S', 'C', 'S', 'M', 'P', 'L', '1'};
}

SampleSet sample_torus(const StateSpec& state, const ModelParams& params, std::size_t n_samples,
                       std::uint64_t seed, unsigned jobs) {
    if (n_samples < 1) throw DomainError("sample_torus: n_samples must be >= 1");
    const NormalModes nm = normal_modes(params);
    SampleSet out;
    out.x.resize(n_samples);
    out.px.resize(n_samples);
    const std::size_t chunks = (n_samples + kSampleChunk - 1) / kSampleChunk;
    constexpr double two_pi = 2.0 * std::numbers::pi;

    parallel_for(chunks, jobs, [&](std::size_t c) {
        CounterRng rng(seed, c);
        const std::size_t begin = c * kSampleChunk;
        const std::size_t end = std::min(n_samples, begin + kSampleChunk);
        for (std::size_t i = begin; i < end; ++i) {
            const double phi1 = two_pi * rng.uniform();
            const double phi2 = two_pi * rng.uniform();
            const PhasePoint p = torus_point(state, nm, phi1, phi2);
            out.x[i] = p.x;
            out.px[i] = p.px;
        }
    });
    return out;
}

void write_sample_file(const std::string& path, const SampleSet& samples, std::uint64_t params_hash) {
    if (samples.x.size() != samples.px.size()) throw FormatError("ragged sample set");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open sample file for writing: " + path);
    out.write(kSampleMagic, sizeof(kSampleMagic));
    detail::put_u64(out, params_hash);
    detail::put_u64(out, samples.size());
    detail::put_u32(out, 2);
    detail::put_u32(out, 0);
    detail::put_f64s(out, samples.x);
    detail::put_f64s(out, samples.px);
    if (!out) throw FormatError("failed writing sample file: " + path);
}

SampleFile read_sample_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open sample file: " + path);
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, kSampleMagic, 8) != 0) {
        throw FormatError("not a sample file: " + path);
    }
    SampleFile f;
    f.params_hash = detail::get_u64(in);
    const std::uint64_t count = detail::get_u64(in);
    const std::uint32_t columns = detail::get_u32(in);
    detail::get_u32(in);
    if (columns != 2) throw FormatError("sample file: expected 2 columns");
    f.samples.x.resize(count);
    f.samples.px.resize(count);
    detail::get_f64s(in, f.samples.x);
    detail::get_f64s(in, f.samples.px);
    return f;
}

} // namespace oscillent
