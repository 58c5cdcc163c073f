#ifndef FISRG_SEEDS_HPP
#define FISRG_SEEDS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "fisrg/errors.hpp"
#include "fisrg/image.hpp"
#include "fisrg/rng.hpp"

namespace fisrg {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Validation rules a k-means centroid must pass to become a seed.
struct SeedCriteria {
    int window_radius = 2;        // homogeneity window is (2r+1)^2
    double max_local_std = 0.05;  // intensity units
    double min_separation = 5.0;  // Euclidean pixels between accepted seeds
    int sample_count = 0;         // ROI samples per attempt; 0 = max(50, 10k)
    int max_attempts = 5;

    int effective_sample_count(int k) const {
        const int base = sample_count > 0 ? sample_count : std::max(50, 10 * k);
        return std::max(base, k);
    }
};

/// Validated seed coordinates. Every point lies inside the ROI used at
/// construction and respects the pairwise min_separation.
struct SeedSet {
    std::vector<PixelCoord> points;

    bool empty() const { return points.empty(); }
    std::size_t size() const { return points.size(); }
};

/// Draw n pixels uniformly with replacement from the true pixels of `mask`.
inline std::vector<PixelCoord> sample_roi(const BinaryMask& mask, int n, Rng& rng) {
    std::vector<PixelCoord> roi_pixels;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (mask.at(x, y)) roi_pixels.push_back({x, y});
    if (roi_pixels.empty()) throw EmptyRoi("sample_roi: ROI mask has no true pixels");

    std::vector<PixelCoord> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.push_back(roi_pixels[rng.uniform_index(roi_pixels.size())]);
    return out;
}

inline std::vector<PixelCoord> sample_roi(const BinaryMask& mask, int n, std::uint64_t rng_seed) {
    Rng rng(rng_seed);
    return sample_roi(mask, n, rng);
}

namespace detail {

inline double dist2(const Point2& a, double bx, double by) {
    const double dx = a.x - bx, dy = a.y - by;
    return dx * dx + dy * dy;
}

inline std::size_t count_distinct(std::span<const PixelCoord> pts) {
    std::vector<PixelCoord> copy(pts.begin(), pts.end());
    std::sort(copy.begin(), copy.end(),
              [](const PixelCoord& a, const PixelCoord& b) {
                  return a.y != b.y ? a.y < b.y : a.x < b.x;
              });
    copy.erase(std::unique(copy.begin(), copy.end()), copy.end());
    return copy.size();
}

/// k-means++ D^2 seeding.
inline std::vector<Point2> kmeanspp_init(std::span<const PixelCoord> pts, int k, Rng& rng) {
    std::vector<Point2> centroids;
    centroids.reserve(static_cast<std::size_t>(k));
    const PixelCoord& first = pts[rng.uniform_index(pts.size())];
    centroids.push_back({static_cast<double>(first.x), static_cast<double>(first.y)});

    std::vector<double> d2(pts.size(), std::numeric_limits<double>::infinity());
    while (static_cast<int>(centroids.size()) < k) {
        const Point2& c = centroids.back();
        double total = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            d2[i] = std::min(d2[i], dist2(c, pts[i].x, pts[i].y));
            total += d2[i];
        }
        std::size_t pick = pts.size();
        if (total > 0.0) {
            const double target = rng.uniform01() * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                acc += d2[i];
                if (acc > target) {
                    pick = i;
                    break;
                }
            }
            if (pick == pts.size()) { // float round-off at the upper edge
                for (std::size_t i = pts.size(); i-- > 0;)
                    if (d2[i] > 0.0) {
                        pick = i;
                        break;
                    }
            }
        } else {
            for (std::size_t i = 0; i < pts.size(); ++i)
                if (d2[i] > 0.0) {
                    pick = i;
                    break;
                }
        }
        centroids.push_back({static_cast<double>(pts[pick].x), static_cast<double>(pts[pick].y)});
    }
    return centroids;
}

} // namespace detail

/// Lloyd's algorithm over 2D pixel coordinates with k-means++ initialization
/// from the caller's RNG. Stops when the largest centroid shift drops below
/// tol or after max_iter sweeps. Clusters that empty out are re-seeded to
/// the point farthest from its assigned centroid. The per-iteration SSE can
/// be captured through objective_trace.
inline std::vector<Point2> kmeans(std::span<const PixelCoord> pts, int k, int max_iter, double tol,
                                  Rng& rng, std::vector<double>* objective_trace = nullptr) {
    if (pts.empty()) throw InvalidK("kmeans: no points");
    if (k < 1 || static_cast<std::size_t>(k) > detail::count_distinct(pts))
        throw InvalidK("kmeans: k must be in [1, distinct point count]");

    std::vector<Point2> centroids = detail::kmeanspp_init(pts, k, rng);
    std::vector<int> assign(pts.size(), 0);

    const auto nearest = [&](const PixelCoord& p) {
        int best = 0;
        double best_d = detail::dist2(centroids[0], p.x, p.y);
        for (int c = 1; c < k; ++c) {
            const double d = detail::dist2(centroids[c], p.x, p.y);
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        return best;
    };

    for (int iter = 0; iter < max_iter; ++iter) {
        for (std::size_t i = 0; i < pts.size(); ++i) assign[i] = nearest(pts[i]);

        std::vector<double> sx(k, 0.0), sy(k, 0.0);
        std::vector<std::size_t> cnt(k, 0);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            sx[assign[i]] += pts[i].x;
            sy[assign[i]] += pts[i].y;
            ++cnt[assign[i]];
        }

        std::vector<Point2> next(centroids);
        for (int c = 0; c < k; ++c)
            if (cnt[c] > 0) next[c] = {sx[c] / cnt[c], sy[c] / cnt[c]};

        std::vector<std::uint8_t> claimed(pts.size(), 0);
        for (int c = 0; c < k; ++c) {
            if (cnt[c] > 0) continue;
            // Re-seed to the unclaimed point farthest from its own centroid.
            std::size_t far_i = 0;
            double far_d = -1.0;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                if (claimed[i]) continue;
                const double d = detail::dist2(centroids[assign[i]], pts[i].x, pts[i].y);
                if (d > far_d) {
                    far_d = d;
                    far_i = i;
                }
            }
            claimed[far_i] = 1;
            next[c] = {static_cast<double>(pts[far_i].x), static_cast<double>(pts[far_i].y)};
        }

        double shift = 0.0;
        for (int c = 0; c < k; ++c)
            shift = std::max(shift, std::sqrt(detail::dist2(next[c], centroids[c].x, centroids[c].y)));
        centroids = std::move(next);

        if (objective_trace) {
            double sse = 0.0;
            for (const PixelCoord& p : pts) sse += detail::dist2(centroids[nearest(p)], p.x, p.y);
            objective_trace->push_back(sse);
        }
        if (shift < tol) break;
    }
    return centroids;
}

/// Check one candidate centroid: inside the ROI, locally homogeneous, and
/// far enough from every already-accepted seed.
inline bool validate_centroid(const GrayImage& img, const BinaryMask& roi, Point2 c,
                              const SeedSet& accepted, const SeedCriteria& crit) {
    const int x = static_cast<int>(std::lround(c.x));
    const int y = static_cast<int>(std::lround(c.y));
    if (!roi.in_bounds(x, y) || !roi.at(x, y)) return false;

    const int r = crit.window_radius;
    double sum = 0.0, sum2 = 0.0;
    int n = 0;
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
            if (!img.in_bounds(x + dx, y + dy)) continue;
            const double v = img.at(x + dx, y + dy);
            sum += v;
            sum2 += v * v;
            ++n;
        }
    }
    const double mean = sum / n;
    const double var = std::max(sum2 / n - mean * mean, 0.0);
    if (std::sqrt(var) > crit.max_local_std) return false;

    for (const PixelCoord& s : accepted.points) {
        const double d = std::hypot(static_cast<double>(x - s.x), static_cast<double>(y - s.y));
        if (d < crit.min_separation) return false;
    }
    return true;
}

/// Automatic seed selection: sample the ROI, cluster, validate, and repeat
/// for unfilled slots up to max_attempts. A partial fill (1..k seeds) is
/// success; zero validated centroids within the budget is NoValidSeeds.
inline SeedSet select_seeds(const GrayImage& img, const BinaryMask& roi, int k,
                            const SeedCriteria& crit, std::uint64_t rng_seed) {
    if (k < 1) throw InvalidK("select_seeds: k must be >= 1");
    Rng rng(rng_seed);
    SeedSet accepted;

    for (int attempt = 0; attempt < crit.max_attempts; ++attempt) {
        const int need = k - static_cast<int>(accepted.size());
        if (need == 0) break;
        const auto pts = sample_roi(roi, crit.effective_sample_count(k), rng);
        const int k_eff =
            std::min<int>(need, static_cast<int>(detail::count_distinct(pts)));
        const auto centroids = kmeans(pts, k_eff, /*max_iter=*/100, /*tol=*/1e-6, rng);
        for (const Point2& c : centroids) {
            if (static_cast<int>(accepted.size()) == k) break;
            if (validate_centroid(img, roi, c, accepted, crit))
                accepted.points.push_back({static_cast<int>(std::lround(c.x)),
                                           static_cast<int>(std::lround(c.y))});
        }
    }
    if (accepted.empty())
        throw NoValidSeeds("select_seeds: no centroid validated within the attempt budget");
    return accepted;
}

} // namespace fisrg

#endif // FISRG_SEEDS_HPP
