#ifndef FISRG_TUNER_HPP
#define FISRG_TUNER_HPP

#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fisrg/errors.hpp"
#include "fisrg/growing.hpp"
#include "fisrg/image.hpp"
#include "fisrg/metrics.hpp"
#include "fisrg/morphology.hpp"
#include "fisrg/parallel.hpp"
#include "fisrg/preprocess.hpp"
#include "fisrg/rng.hpp"
#include "fisrg/seeds.hpp"

namespace fisrg {

/// One point of the search space: the four tuned quantities.
struct ParamPoint {
    double fuzzy_threshold = 0.5;
    int n_seeds = 4;
    double denoise_sigma = 1.0;
    int dilate_size = 5;
};

/// Per-parameter value lists. Defaults cover the boundary values the tuner
/// is expected to reach; all overridable via config.
struct ParamGrid {
    std::vector<double> fuzzy_threshold{0.1, 0.112, 0.15, 0.2, 0.3, 0.4,
                                        0.5, 0.6, 0.7, 0.829, 0.9, 1.0};
    std::vector<int> n_seeds{2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
    std::vector<double> denoise_sigma{0.5, 1.0, 1.5, 2.0};
    std::vector<int> dilate_size{3, 5, 7, 9};
};

/// Pipeline knobs that are never part of the search space.
struct EvalContext {
    SeedCriteria seed_criteria{};
    double sigma_floor = 0.005;
    int erode_size = 3;
    SeShape se_shape = SeShape::Square;
};

/// Experiment 1 frees {fuzzy_threshold, n_seeds}; experiment 2 adds
/// denoise_sigma; experiment 3 adds dilate_size. Parameters not freed stay
/// at fixed_defaults.
struct ExperimentConfig {
    int experiment_id = 1;
    ParamPoint fixed_defaults{};
    ParamGrid grid{};
    std::uint64_t rng_seed = 0;
    int threads = 1;
    EvalContext ctx{};
};

struct SliceCase {
    int index = 0;
    GrayImage image;
    BinaryMask gt;
    BinaryMask roi;
};

struct SliceResult {
    int slice_index = 0;
    ParamPoint best{};
    double dice = 0.0;
    double lesion_pct = 0.0;
    double elapsed_ms = 0.0;
};

struct FieldStats {
    double mean = 0.0;
    double std = 0.0; // sample std (n-1); 0 for a single slice
    double min = 0.0;
    double max = 0.0;
};

/// Table-style aggregate over the per-slice best results.
struct ExperimentSummary {
    FieldStats fuzzy_threshold{};
    FieldStats n_seeds{};
    FieldStats dice{};
    double total_elapsed_min = 0.0;
};

/// RNG seed for one slice of an experiment, decorrelated across slices.
inline std::uint64_t slice_rng_seed(std::uint64_t experiment_seed, int slice_index) {
    return derive_seed(experiment_seed, static_cast<std::uint64_t>(slice_index));
}

/// ROI policy for tuning runs without an explicit ROI: the ground truth
/// dilated by a disk of the given pixel radius.
inline BinaryMask derive_roi(const BinaryMask& gt, int dilation_radius) {
    return dilate(gt, {SeShape::Disk, 2 * dilation_radius + 1});
}

/// Run the full pipeline at one parameter point:
/// denoise -> select_seeds -> fisrg -> postprocess -> dice vs ground truth.
/// An empty ROI or a failed seed search scores an empty prediction.
inline EvalRecord evaluate(const GrayImage& img, const BinaryMask& gt, const BinaryMask& roi,
                           const ParamPoint& p, std::uint64_t rng_seed,
                           const EvalContext& ctx = {}) {
    if (img.width != gt.width || img.height != gt.height || !gt.same_shape(roi))
        throw DimensionMismatch("evaluate: image/gt/roi shapes differ");

    const auto t0 = std::chrono::steady_clock::now();
    const GrayImage den = denoise(img, p.denoise_sigma);

    BinaryMask pred(img.width, img.height);
    try {
        const SeedSet seeds = select_seeds(den, roi, p.n_seeds, ctx.seed_criteria, rng_seed);
        const BinaryMask grown = fisrg_segment(den, seeds, {p.fuzzy_threshold, ctx.sigma_floor});
        pred = postprocess(grown, p.dilate_size, ctx.erode_size, ctx.se_shape);
    } catch (const EmptyRoi&) {
    } catch (const NoValidSeeds&) {
    }

    EvalRecord rec;
    rec.dice = dice(gt, pred);
    rec.lesion_pct = lesion_percentage(gt);
    rec.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

namespace detail {

struct ActiveGrid {
    std::vector<double> thresholds, sigmas;
    std::vector<int> seeds, dilates;
};

inline ActiveGrid active_grid(const ExperimentConfig& cfg) {
    ActiveGrid g;
    g.thresholds = cfg.grid.fuzzy_threshold;
    g.seeds = cfg.grid.n_seeds;
    g.sigmas = cfg.experiment_id >= 2 ? cfg.grid.denoise_sigma
                                      : std::vector<double>{cfg.fixed_defaults.denoise_sigma};
    g.dilates = cfg.experiment_id >= 3 ? cfg.grid.dilate_size
                                       : std::vector<int>{cfg.fixed_defaults.dilate_size};
    if (g.thresholds.empty() || g.seeds.empty() || g.sigmas.empty() || g.dilates.empty())
        throw EmptyGrid("tune: a freed parameter has an empty grid");
    return g;
}

} // namespace detail

/// Grid points in the deterministic lexicographic evaluation order
/// (fuzzy_threshold, n_seeds, denoise_sigma, dilate_size).
inline std::vector<ParamPoint> enumerate_grid(const ExperimentConfig& cfg) {
    const auto g = detail::active_grid(cfg);
    std::vector<ParamPoint> points;
    points.reserve(g.thresholds.size() * g.seeds.size() * g.sigmas.size() * g.dilates.size());
    for (double t : g.thresholds)
        for (int s : g.seeds)
            for (double sg : g.sigmas)
                for (int d : g.dilates) points.push_back({t, s, sg, d});
    return points;
}

/// Exhaustive search of the experiment's grid on one slice. Ties on Dice
/// break toward the earlier point in lexicographic grid order. Seed
/// selection and denoising are cached per (sigma) and (sigma, n_seeds) —
/// both are pure functions of those keys plus the slice RNG seed, so the
/// cache is behaviorally identical to re-running evaluate() per point.
inline SliceResult tune_slice(const SliceCase& slice, const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<ParamPoint> points = enumerate_grid(cfg);
    const std::uint64_t seed = slice_rng_seed(cfg.rng_seed, slice.index);

    std::map<double, GrayImage> denoised;
    for (const ParamPoint& p : points)
        if (!denoised.count(p.denoise_sigma))
            denoised.emplace(p.denoise_sigma, denoise(slice.image, p.denoise_sigma));

    std::map<std::pair<double, int>, std::optional<SeedSet>> seed_sets;
    for (const ParamPoint& p : points) {
        const auto key = std::make_pair(p.denoise_sigma, p.n_seeds);
        if (seed_sets.count(key)) continue;
        try {
            seed_sets.emplace(key, select_seeds(denoised.at(p.denoise_sigma), slice.roi, p.n_seeds,
                                                cfg.ctx.seed_criteria, seed));
        } catch (const EmptyRoi&) {
            seed_sets.emplace(key, std::nullopt);
        } catch (const NoValidSeeds&) {
            seed_sets.emplace(key, std::nullopt);
        }
    }

    std::vector<double> dices(points.size(), 0.0);
    parallel_for(points.size(), cfg.threads, [&](std::size_t i) {
        const ParamPoint& p = points[i];
        const auto& seeds = seed_sets.at({p.denoise_sigma, p.n_seeds});
        BinaryMask pred(slice.image.width, slice.image.height);
        if (seeds) {
            const BinaryMask grown =
                fisrg_segment(denoised.at(p.denoise_sigma), *seeds, {p.fuzzy_threshold, cfg.ctx.sigma_floor});
            pred = postprocess(grown, p.dilate_size, cfg.ctx.erode_size, cfg.ctx.se_shape);
        }
        dices[i] = dice(slice.gt, pred);
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < dices.size(); ++i)
        if (dices[i] > dices[best]) best = i;

    SliceResult res;
    res.slice_index = slice.index;
    res.best = points[best];
    res.dice = dices[best];
    res.lesion_pct = lesion_percentage(slice.gt);
    res.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

namespace detail {

inline FieldStats field_stats(std::span<const double> values) {
    FieldStats s;
    if (values.empty()) return s;
    double sum = 0.0;
    s.min = s.max = values[0];
    for (double v : values) {
        sum += v;
        if (v < s.min) s.min = v;
        if (v > s.max) s.max = v;
    }
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

} // namespace detail

/// Tune every slice and aggregate Table-style statistics.
inline std::pair<std::vector<SliceResult>, ExperimentSummary>
run_experiment(std::span<const SliceCase> slices, const ExperimentConfig& cfg) {
    if (slices.empty()) throw Error("run_experiment: no slices");
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<SliceResult> results;
    results.reserve(slices.size());
    for (const SliceCase& slice : slices) {
        try {
            results.push_back(tune_slice(slice, cfg));
        } catch (const Error& e) {
            throw Error("slice " + std::to_string(slice.index) + ": " + e.what());
        }
    }

    std::vector<double> thr, nseeds, dices;
    for (const SliceResult& r : results) {
        thr.push_back(r.best.fuzzy_threshold);
        nseeds.push_back(static_cast<double>(r.best.n_seeds));
        dices.push_back(r.dice);
    }
    ExperimentSummary summary;
    summary.fuzzy_threshold = detail::field_stats(thr);
    summary.n_seeds = detail::field_stats(nseeds);
    summary.dice = detail::field_stats(dices);
    summary.total_elapsed_min =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / 60.0;
    return {std::move(results), summary};
}

} // namespace fisrg

#endif // FISRG_TUNER_HPP
