#pragma once

#include "oscillent/entropy_result.hpp"
#include "oscillent/sampling.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace oscillent {

/// Static 2-D k-d tree over a point cloud, used for exact k-nearest-neighbour queries.
class KdTree2 {
public:
    KdTree2(std::span<const double> u, std::span<const double> v, std::size_t leaf_size = 12);

    [[nodiscard]] std::size_t size() const { return xs_.size(); }

    /// Distances to the k nearest other points of stored point `i` (ascending).
    /// `i` indexes the original input order.
    void nearest_excluding_self(std::size_t i, std::size_t k, std::span<double> out) const;

private:
    struct Node {
        std::uint32_t begin = 0;
        std::uint32_t end = 0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        double split = 0.0;
        int axis = 0;
    };

    std::int32_t build(std::uint32_t begin, std::uint32_t end, std::size_t leaf_size);
    void search(std::int32_t node, double qx, double qy, std::uint32_t self, std::size_t k,
                double* best) const;

    std::vector<double> xs_;
    std::vector<double> ys_;
    std::vector<std::uint32_t> order_;    // tree slot -> original index
    std::vector<std::uint32_t> slot_of_;  // original index -> tree slot
    std::vector<Node> nodes_;
};

struct KnnOptions {
    std::size_t k = 4;
    std::size_t bootstrap = 50;
    std::size_t min_samples = 10000;
    std::uint64_t seed = 0;
    unsigned jobs = 0;
};

/// Kozachenko-Leonenko differential entropy of the (x, px) samples, shifted by
/// ln(1/delta_cell) to give the Boltzmann entropy in nats. Coordinates are scaled
/// to unit variance before the neighbour search (the log-Jacobian is added back).
/// The uncertainty is a bootstrap standard error over the per-point log-distances.
EntropyResult entropy_knn(const SampleSet& samples, double delta_cell, const KnnOptions& options = {});

} // namespace oscillent
