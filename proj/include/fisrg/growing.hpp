#ifndef FISRG_GROWING_HPP
#define FISRG_GROWING_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "fisrg/errors.hpp"
#include "fisrg/image.hpp"
#include "fisrg/seeds.hpp"

namespace fisrg {

/// Running statistics of a growing region (Welford single-pass update).
/// mean/variance always equal the batch statistics of the included
/// intensities; variance is the population variance m2/n.
struct RegionStats {
    std::int64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0; // sum of squared deviations from the running mean

    void update(double x) {
        ++n;
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }

    double variance() const { return n > 0 ? std::max(m2, 0.0) / static_cast<double>(n) : 0.0; }
    double stddev() const { return std::sqrt(variance()); }
};

/// Region-growing parameters. Connectivity is fixed at 8.
struct GrowParams {
    double fuzzy_threshold = 0.5; // in (0, 1]
    double sigma_floor = 0.005;   // intensity units, must be > 0
};

/// Fuzzy similarity of intensity x to the region's statistical profile:
/// the peak-normalized Gaussian exp(-(x-mean)^2 / (2 sigma'^2)) with
/// sigma' = max(region sigma, sigma_floor). Always in (0, 1], and exactly 1
/// at x == mean.
inline double membership(double x, const RegionStats& stats, double sigma_floor) {
    const double sigma = std::max(stats.stddev(), sigma_floor);
    const double d = x - stats.mean;
    return std::exp(-(d * d) / (2.0 * sigma * sigma));
}

/// One pixel admission, recorded in growth order for replay in tests.
struct AdmissionRecord {
    PixelCoord p;
    double membership = 0.0;
};

/// 8-neighborhood in the fixed visit order N, NE, E, SE, S, SW, W, NW
/// (y grows downward). The order is semantics-bearing: statistics are
/// recalibrated after every admission, so a different order can grow a
/// different region.
inline constexpr std::array<PixelCoord, 8> kNeighbors8{{
    {0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1},
}};

/// Grow a region from one seed by breadth-first fuzzy admission.
///
/// Statistics initialize from the seed's 3x3 neighborhood (clipped to
/// bounds, row-major order). Each yet-unvisited 8-neighbor of a popped
/// pixel is tested once: it joins the region iff its membership under the
/// *current* statistics is >= fuzzy_threshold, and the statistics are
/// updated immediately. The returned mask always contains the seed.
inline BinaryMask grow_region(const GrayImage& img, PixelCoord seed, const GrowParams& params,
                              std::vector<AdmissionRecord>* trace = nullptr,
                              RegionStats* final_stats = nullptr) {
    if (!img.in_bounds(seed.x, seed.y))
        throw SeedOutOfBounds("grow_region: seed (" + std::to_string(seed.x) + ", " +
                              std::to_string(seed.y) + ") outside image");
    if (!(params.sigma_floor > 0.0))
        throw NonPositiveSigma("grow_region: sigma_floor must be > 0");
    if (!(params.fuzzy_threshold > 0.0 && params.fuzzy_threshold <= 1.0))
        throw Error("grow_region: fuzzy_threshold must lie in (0, 1]");

    RegionStats stats;
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
            if (img.in_bounds(seed.x + dx, seed.y + dy))
                stats.update(img.at(seed.x + dx, seed.y + dy));

    BinaryMask region(img.width, img.height);
    std::vector<std::uint8_t> visited(img.size(), 0);
    std::vector<PixelCoord> frontier; // FIFO via head index
    frontier.reserve(256);

    const auto idx = [&](int x, int y) { return static_cast<std::size_t>(y) * img.width + x; };
    region.set(seed.x, seed.y, true);
    visited[idx(seed.x, seed.y)] = 1;
    frontier.push_back(seed);

    for (std::size_t head = 0; head < frontier.size(); ++head) {
        const PixelCoord p = frontier[head];
        for (const PixelCoord& d : kNeighbors8) {
            const int qx = p.x + d.x, qy = p.y + d.y;
            if (!img.in_bounds(qx, qy)) continue;
            if (visited[idx(qx, qy)]) continue;
            visited[idx(qx, qy)] = 1;
            const double x = img.at(qx, qy);
            const double m = membership(x, stats, params.sigma_floor);
            if (m >= params.fuzzy_threshold) {
                region.set(qx, qy, true);
                stats.update(x);
                frontier.push_back({qx, qy});
                if (trace) trace->push_back({{qx, qy}, m});
            }
        }
    }
    if (final_stats) *final_stats = stats;
    return region;
}

/// FISRG: grow every seed independently (own statistics, own visited set)
/// and return the pixelwise union of the per-seed regions.
inline BinaryMask fisrg_segment(const GrayImage& img, const SeedSet& seeds,
                                const GrowParams& params) {
    if (seeds.points.empty()) throw EmptySeedSet("fisrg: no seeds");
    BinaryMask out(img.width, img.height);
    for (const PixelCoord& s : seeds.points) {
        const BinaryMask r = grow_region(img, s, params);
        for (std::size_t i = 0; i < out.bits.size(); ++i) out.bits[i] |= r.bits[i];
    }
    return out;
}

} // namespace fisrg

#endif // FISRG_GROWING_HPP
