#pragma once

#include "oscillent/model.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace oscillent {

/// Columnar (x, px) sample set.
struct SampleSet {
    std::vector<double> x;
    std::vector<double> px;

    [[nodiscard]] std::size_t size() const { return x.size(); }
    void reserve(std::size_t n) {
        x.reserve(n);
        px.reserve(n);
    }
    void push_back(double xv, double pv) {
        x.push_back(xv);
        px.push_back(pv);
    }
};

inline constexpr std::size_t kSampleChunk = 1 << 16;

/// Draws i.i.d. points from the microcanonical (E1, E2) measure: both normal-mode
/// angles uniform on [0, 2 pi), mapped through the exact inverse rotation, and
/// keeps the (x, px) projection. Chunk c of 65536 samples uses stream c of `seed`,
/// so the output depends only on (seed, n_samples), not on `jobs`.
SampleSet sample_torus(const StateSpec& state, const ModelParams& params, std::size_t n_samples,
                       std::uint64_t seed, unsigned jobs = 0);

/// Binary sample file: 8-byte magic "OSCSMPL1", u64 params hash, u64 count,
/// u32 column count (2), u32 reserved (0), then all x values followed by all px
/// values; every field little-endian, floats as IEEE-754 binary64.
struct SampleFile {
    std::uint64_t params_hash = 0;
    SampleSet samples;
};

void write_sample_file(const std::string& path, const SampleSet& samples, std::uint64_t params_hash);
SampleFile read_sample_file(const std::string& path);

} // namespace oscillent
