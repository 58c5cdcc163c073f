#ifndef FISRG_PHANTOM_HPP
#define FISRG_PHANTOM_HPP

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "fisrg/errors.hpp"
#include "fisrg/image.hpp"
#include "fisrg/rng.hpp"

namespace fisrg {

enum class LesionShape {
    Disk,
    TwoLobesWithBridge,
    AnnulusAdjacentDistractor, // two lobes plus a distractor ring near lobe 1
};

/// Synthetic ground-truthed slice description. Geometry is sampled from
/// rng_seed within bounds-safe ranges, so the same spec always produces the
/// same slice.
struct PhantomSpec {
    int width = 128;
    int height = 128;
    LesionShape shape = LesionShape::Disk;
    double lesion_mean = 0.55;
    double background_mean = 0.25;
    double distractor_mean = 0.50; // deliberately close to lesion_mean
    double noise_sigma = 0.0;
    int bridge_width = 2; // two-lobe shapes only; 0 leaves the lobes disconnected
    std::uint64_t rng_seed = 0;
};

/// Sampled geometry, reported for tests and debugging.
struct PhantomGeometry {
    PixelCoord lobe1{}, lobe2{};
    int r1 = 0, r2 = 0;
    PixelCoord distractor{};
    int inner = 0, outer = 0;
};

namespace detail {

inline double dist_to_segment(double px, double py, double ax, double ay, double bx, double by) {
    const double dx = bx - ax, dy = by - ay;
    const double len2 = dx * dx + dy * dy;
    double t = len2 == 0.0 ? 0.0 : ((px - ax) * dx + (py - ay) * dy) / len2;
    t = std::clamp(t, 0.0, 1.0);
    const double qx = ax + t * dx, qy = ay + t * dy;
    return std::hypot(px - qx, py - qy);
}

inline int sample_range(Rng& rng, int lo, int hi) { // inclusive
    return lo + static_cast<int>(rng.uniform_index(static_cast<std::size_t>(hi - lo + 1)));
}

} // namespace detail

/// Generate a synthetic slice and its exact lesion mask.
/// The image is shape means plus i.i.d. Gaussian noise, clamped to [0,1];
/// the mask is the constructed lesion support.
inline std::pair<GrayImage, BinaryMask> generate_phantom(const PhantomSpec& spec,
                                                         PhantomGeometry* geo_out = nullptr) {
    for (double m : {spec.lesion_mean, spec.background_mean, spec.distractor_mean})
        if (m < 0.0 || m > 1.0) throw Error("generate_phantom: means must lie in [0,1]");
    if (spec.noise_sigma < 0.0) throw Error("generate_phantom: noise_sigma must be >= 0");
    if (spec.bridge_width < 0) throw Error("generate_phantom: bridge_width must be >= 0");

    const int w = spec.width, h = spec.height;
    const int min_dim = std::min(w, h);
    const bool two_lobes = spec.shape != LesionShape::Disk;
    if ((two_lobes && min_dim < 64) || (!two_lobes && min_dim < 32))
        throw ShapeOutOfBounds("generate_phantom: image too small for the requested shape");

    Rng rng(spec.rng_seed);
    PhantomGeometry geo;

    // Lesions are kept large relative to the ROI dilation the tuning
    // harness applies, so spatial k-means can land seeds in their interior.
    if (spec.shape == LesionShape::Disk) {
        geo.r1 = detail::sample_range(rng, min_dim / 6, min_dim / 4);
        geo.lobe1.x = detail::sample_range(rng, geo.r1 + 2, w - geo.r1 - 3);
        geo.lobe1.y = detail::sample_range(rng, geo.r1 + 2, h - geo.r1 - 3);
    } else {
        geo.r1 = detail::sample_range(rng, min_dim / 8, min_dim / 5);
        geo.r2 = detail::sample_range(rng, min_dim / 8, min_dim / 5);
        geo.lobe1.y = detail::sample_range(rng, h / 2 - h / 8, h / 2 + h / 8);
        geo.lobe2.y = detail::sample_range(rng, h / 2 - h / 8, h / 2 + h / 8);
        geo.lobe1.x = detail::sample_range(rng, geo.r1 + 2, w / 2 - 5);
        geo.lobe2.x = detail::sample_range(rng, w / 2 + 5, w - geo.r2 - 3);
        if (spec.shape == LesionShape::AnnulusAdjacentDistractor) {
            geo.outer = detail::sample_range(rng, min_dim / 16, min_dim / 12);
            geo.inner = std::max(1, geo.outer - std::max(2, geo.outer / 3));
            const int gap = detail::sample_range(rng, 2, 4);
            geo.distractor.x = geo.lobe1.x;
            geo.distractor.y =
                std::clamp(geo.lobe1.y - (geo.r1 + gap + geo.outer), geo.outer + 2, h - geo.outer - 3);
        }
    }

    const auto in_lesion = [&](int x, int y) {
        const double d1 = std::hypot(x - geo.lobe1.x, y - geo.lobe1.y);
        if (d1 <= geo.r1) return true;
        if (spec.shape == LesionShape::Disk) return false;
        const double d2 = std::hypot(x - geo.lobe2.x, y - geo.lobe2.y);
        if (d2 <= geo.r2) return true;
        if (spec.bridge_width >= 1) {
            const double db = detail::dist_to_segment(x, y, geo.lobe1.x, geo.lobe1.y,
                                                      geo.lobe2.x, geo.lobe2.y);
            if (db <= spec.bridge_width / 2.0) return true;
        }
        return false;
    };
    const auto in_distractor = [&](int x, int y) {
        if (spec.shape != LesionShape::AnnulusAdjacentDistractor) return false;
        const double d = std::hypot(x - geo.distractor.x, y - geo.distractor.y);
        return d >= geo.inner && d <= geo.outer;
    };

    GrayImage img(w, h, spec.background_mean);
    BinaryMask mask(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (in_lesion(x, y)) {
                img.at(x, y) = spec.lesion_mean;
                mask.set(x, y, true);
            } else if (in_distractor(x, y)) {
                img.at(x, y) = spec.distractor_mean;
            }
        }
    }
    if (spec.noise_sigma > 0.0) {
        for (double& v : img.data)
            v = std::clamp(v + spec.noise_sigma * rng.normal(), 0.0, 1.0);
    }

    if (geo_out) *geo_out = geo;
    return {std::move(img), std::move(mask)};
}

/// One slice of a synthetic tuning corpus.
struct PhantomSlice {
    int index = 0;
    GrayImage image;
    BinaryMask gt;
};

/// Corpus description used by the tuner CLI's zero-config mode and the
/// acceptance harness.
struct CorpusSpec {
    int count = 20;
    int width = 128;
    int height = 128;
    double noise_sigma = 0.03;
    double lesion_mean = 0.55;     // lesion/background gap 0.3
    double background_mean = 0.25;
    double distractor_mean = 0.50;
    bool with_distractor = false;  // true: every slice gets the distractor shape
    int bridge_width = 2;
    std::uint64_t rng_seed = 20240101;
};

/// Deterministic corpus: slice i uses seed derive_seed(rng_seed, i).
/// Without the distractor flag, shapes alternate disk / two-lobes.
inline std::vector<PhantomSlice> generate_corpus(const CorpusSpec& cs) {
    std::vector<PhantomSlice> slices;
    slices.reserve(static_cast<std::size_t>(cs.count));
    for (int i = 0; i < cs.count; ++i) {
        PhantomSpec ps;
        ps.width = cs.width;
        ps.height = cs.height;
        ps.lesion_mean = cs.lesion_mean;
        ps.background_mean = cs.background_mean;
        ps.distractor_mean = cs.distractor_mean;
        ps.noise_sigma = cs.noise_sigma;
        ps.bridge_width = cs.bridge_width;
        ps.rng_seed = derive_seed(cs.rng_seed, static_cast<std::uint64_t>(i));
        ps.shape = cs.with_distractor ? LesionShape::AnnulusAdjacentDistractor
                   : (i % 2 == 0)     ? LesionShape::Disk
                                      : LesionShape::TwoLobesWithBridge;
        auto [img, gt] = generate_phantom(ps);
        slices.push_back({i, std::move(img), std::move(gt)});
    }
    return slices;
}

} // namespace fisrg

#endif // FISRG_PHANTOM_HPP
