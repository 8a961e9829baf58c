#include "oscillent/knn_entropy.hpp"

#include "oscillent/errors.hpp"
#include "oscillent/parallel.hpp"
#include "oscillent/rng.hpp"

#include <boost/math/special_functions/digamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace oscillent {

KdTree2::KdTree2(std::span<const double> u, std::span<const double> v, std::size_t leaf_size) {
    const std::size_t n = u.size();
    if (n != v.size()) throw DomainError("KdTree2: coordinate arrays differ in length");
    if (n >= std::numeric_limits<std::uint32_t>::max()) throw DomainError("KdTree2: too many points");
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0u);
    xs_.assign(u.begin(), u.end());
    ys_.assign(v.begin(), v.end());
    nodes_.reserve(2 * (n / std::max<std::size_t>(leaf_size, 1) + 1));
    if (n > 0) build(0, static_cast<std::uint32_t>(n), std::max<std::size_t>(leaf_size, 1));

    // Store coordinates in tree order so leaf scans are contiguous.
    std::vector<double> xs(n);
    std::vector<double> ys(n);
    slot_of_.resize(n);
    for (std::size_t s = 0; s < n; ++s) {
        xs[s] = u[order_[s]];
        ys[s] = v[order_[s]];
        slot_of_[order_[s]] = static_cast<std::uint32_t>(s);
    }
    xs_ = std::move(xs);
    ys_ = std::move(ys);
}

std::int32_t KdTree2::build(std::uint32_t begin, std::uint32_t end, std::size_t leaf_size) {
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(Node{begin, end, -1, -1, 0.0, 0});
    if (end - begin <= leaf_size) return id;

    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -xmin;
    double ymin = xmin;
    double ymax = -xmin;
    for (std::uint32_t s = begin; s < end; ++s) {
        const std::uint32_t i = order_[s];
        xmin = std::min(xmin, xs_[i]);
        xmax = std::max(xmax, xs_[i]);
        ymin = std::min(ymin, ys_[i]);
        ymax = std::max(ymax, ys_[i]);
    }
    const int axis = (xmax - xmin) >= (ymax - ymin) ? 0 : 1;
    const std::vector<double>& coord = axis == 0 ? xs_ : ys_;
    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&coord](std::uint32_t a, std::uint32_t b) { return coord[a] < coord[b]; });
    const double split = coord[order_[mid]];
    const std::int32_t left = build(begin, mid, leaf_size);
    const std::int32_t right = build(mid, end, leaf_size);
    Node& node = nodes_[static_cast<std::size_t>(id)];
    node.axis = axis;
    node.split = split;
    node.left = left;
    node.right = right;
    return id;
}

// `best` holds k squared distances in ascending order.
void KdTree2::search(std::int32_t id, double qx, double qy, std::uint32_t self, std::size_t k,
                     double* best) const {
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    if (node.left < 0) {
        for (std::uint32_t s = node.begin; s < node.end; ++s) {
            if (s == self) continue;
            const double dx = xs_[s] - qx;
            const double dy = ys_[s] - qy;
            const double d2 = dx * dx + dy * dy;
            if (d2 < best[k - 1]) {
                std::size_t j = k - 1;
                while (j > 0 && best[j - 1] > d2) {
                    best[j] = best[j - 1];
                    --j;
                }
                best[j] = d2;
            }
        }
        return;
    }
    const double diff = (node.axis == 0 ? qx : qy) - node.split;
    const std::int32_t near = diff < 0.0 ? node.left : node.right;
    const std::int32_t far = diff < 0.0 ? node.right : node.left;
    search(near, qx, qy, self, k, best);
    if (diff * diff < best[k - 1]) search(far, qx, qy, self, k, best);
}

void KdTree2::nearest_excluding_self(std::size_t i, std::size_t k, std::span<double> out) const {
    if (k == 0 || k >= size()) throw DomainError("KdTree2: k must be in [1, n-1]");
    double best[64];
    if (k > 64) throw DomainError("KdTree2: k > 64 not supported");
    std::fill(best, best + k, std::numeric_limits<double>::infinity());
    const std::uint32_t slot = slot_of_[i];
    search(0, xs_[slot], ys_[slot], slot, k, best);
    for (std::size_t j = 0; j < k && j < out.size(); ++j) out[j] = std::sqrt(best[j]);
}

EntropyResult entropy_knn(const SampleSet& samples, double delta_cell, const KnnOptions& options) {
    const std::size_t n = samples.size();
    const std::size_t k = options.k;
    if (k < 1) throw DomainError("entropy_knn: k must be >= 1");
    if (!(delta_cell > 0.0)) throw DomainError("entropy_knn: delta_cell must be positive");
    if (n < options.min_samples || n <= k) {
        throw DegenerateSampleError("entropy_knn: need at least " + std::to_string(options.min_samples) +
                                    " samples, got " + std::to_string(n));
    }

    auto moments = [n](const std::vector<double>& v) {
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
        double ss = 0.0;
        for (double a : v) ss += (a - mean) * (a - mean);
        return std::pair{mean, std::sqrt(ss / static_cast<double>(n - 1))};
    };
    const auto [mx, sx] = moments(samples.x);
    const auto [mp, sp] = moments(samples.px);
    if (!(sx > 0.0) || !(sp > 0.0)) {
        throw DegenerateSampleError("entropy_knn: zero variance in a coordinate");
    }
    std::vector<double> u(n);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = (samples.x[i] - mx) / sx;
        v[i] = (samples.px[i] - mp) / sp;
    }
    const KdTree2 tree(u, v);
    u.clear();
    u.shrink_to_fit();
    v.clear();
    v.shrink_to_fit();

    // Per-point 2 ln(eps_k); eps_1 == 0 marks an exact duplicate.
    std::vector<double> terms(n);
    const std::size_t chunk = 1 << 15;
    const std::size_t chunks = (n + chunk - 1) / chunk;
    parallel_for(chunks, options.jobs, [&](std::size_t c) {
        std::vector<double> dist(k);
        const std::size_t end = std::min(n, (c + 1) * chunk);
        for (std::size_t i = c * chunk; i < end; ++i) {
            tree.nearest_excluding_self(i, k, dist);
            if (!(dist[0] > 0.0)) {
                throw DegenerateSampleError("entropy_knn: exact duplicate samples present");
            }
            terms[i] = 2.0 * std::log(dist[k - 1]);
        }
    });

    const double mean_term = std::accumulate(terms.begin(), terms.end(), 0.0) / static_cast<double>(n);
    const double offset = boost::math::digamma(static_cast<double>(n)) -
                          boost::math::digamma(static_cast<double>(k)) + std::log(std::numbers::pi) +
                          std::log(sx * sp);
    const double h = offset + mean_term;

    double se = 0.0;
    if (options.bootstrap >= 2) {
        std::vector<double> means(options.bootstrap);
        parallel_for(options.bootstrap, options.jobs, [&](std::size_t b) {
            CounterRng rng(options.seed ^ 0x5bd1e995ULL, b);
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += terms[rng() % n];
            means[b] = s / static_cast<double>(n);
        });
        const double mb = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(means.size());
        double ss = 0.0;
        for (double m : means) ss += (m - mb) * (m - mb);
        se = std::sqrt(ss / static_cast<double>(means.size() - 1));
    }

    EntropyResult r;
    r.method = EntropyMethod::torus_mc;
    r.value = h - std::log(delta_cell);
    r.uncertainty = se;
    r.metadata = {{"samples", n},
                  {"k", k},
                  {"bootstrap", options.bootstrap},
                  {"differential_entropy", h},
                  {"delta_cell", delta_cell}};
    return r;
}

} // namespace oscillent
