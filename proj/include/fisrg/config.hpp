#ifndef FISRG_CONFIG_HPP
#define FISRG_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "fisrg/errors.hpp"
#include "fisrg/phantom.hpp"
#include "fisrg/tuner.hpp"

namespace fisrg {

/// Effective configuration of a run. Everything has a default, so `tune`
/// works on a generated phantom corpus with no config at all. The full
/// effective state is echoed to disk so any run can be reproduced
/// bit-for-bit.
struct RunConfig {
    // inputs
    std::string input;  // NIfTI volume, slice directory, or single 2D image
    std::string gt;     // ground-truth mask (NIfTI volume for volume input)
    std::string roi;    // explicit ROI (file) when roi_policy = provided-mask
    int axis = 2;
    int slice_begin = -1; // inclusive; -1 = full range
    int slice_end = -1;
    int slice = -1;                      // single-slice index for `segment`
    std::string roi_policy = "dilated-gt"; // or "provided-mask"
    int roi_dilation_radius = 15;

    // search
    int experiment = 1;
    std::uint64_t rng_seed = 42;
    int threads = 0; // 0 = all cores
    ParamGrid grid{};
    ParamPoint defaults{};
    EvalContext ctx{};

    // phantom corpus (zero-config tune, `phantom` subcommand)
    CorpusSpec corpus{};

    // output
    std::string out_dir = "out";
};

namespace detail {

template <typename T>
void get_if_present(const nlohmann::json& j, const char* key, T& dst) {
    if (j.contains(key)) dst = j.at(key).get<T>();
}

inline SeShape shape_from_string(const std::string& s) {
    if (s == "square") return SeShape::Square;
    if (s == "disk") return SeShape::Disk;
    throw Error("config: unknown structuring element shape '" + s + "'");
}

inline std::string shape_to_string(SeShape s) {
    return s == SeShape::Square ? "square" : "disk";
}

inline LesionShape lesion_shape_from_string(const std::string& s) {
    if (s == "disk") return LesionShape::Disk;
    if (s == "two-lobes-with-bridge") return LesionShape::TwoLobesWithBridge;
    if (s == "annulus-adjacent-distractor") return LesionShape::AnnulusAdjacentDistractor;
    throw Error("config: unknown lesion shape '" + s + "'");
}

inline std::string lesion_shape_to_string(LesionShape s) {
    switch (s) {
        case LesionShape::Disk: return "disk";
        case LesionShape::TwoLobesWithBridge: return "two-lobes-with-bridge";
        case LesionShape::AnnulusAdjacentDistractor: return "annulus-adjacent-distractor";
    }
    return "disk";
}

} // namespace detail

/// Overlay the keys present in `j` onto `cfg`; absent keys keep their value.
inline void apply_config_json(RunConfig& cfg, const nlohmann::json& j) {
    using detail::get_if_present;
    get_if_present(j, "input", cfg.input);
    get_if_present(j, "gt", cfg.gt);
    get_if_present(j, "roi", cfg.roi);
    get_if_present(j, "axis", cfg.axis);
    get_if_present(j, "slice_begin", cfg.slice_begin);
    get_if_present(j, "slice_end", cfg.slice_end);
    get_if_present(j, "slice", cfg.slice);
    get_if_present(j, "roi_policy", cfg.roi_policy);
    get_if_present(j, "roi_dilation_radius", cfg.roi_dilation_radius);
    get_if_present(j, "experiment", cfg.experiment);
    get_if_present(j, "rng_seed", cfg.rng_seed);
    get_if_present(j, "threads", cfg.threads);
    get_if_present(j, "out_dir", cfg.out_dir);

    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        get_if_present(g, "fuzzy_threshold", cfg.grid.fuzzy_threshold);
        get_if_present(g, "n_seeds", cfg.grid.n_seeds);
        get_if_present(g, "denoise_sigma", cfg.grid.denoise_sigma);
        get_if_present(g, "dilate_size", cfg.grid.dilate_size);
    }
    if (j.contains("defaults")) {
        const auto& d = j.at("defaults");
        get_if_present(d, "fuzzy_threshold", cfg.defaults.fuzzy_threshold);
        get_if_present(d, "n_seeds", cfg.defaults.n_seeds);
        get_if_present(d, "denoise_sigma", cfg.defaults.denoise_sigma);
        get_if_present(d, "dilate_size", cfg.defaults.dilate_size);
    }
    if (j.contains("pipeline")) {
        const auto& p = j.at("pipeline");
        get_if_present(p, "sigma_floor", cfg.ctx.sigma_floor);
        get_if_present(p, "erode_size", cfg.ctx.erode_size);
        if (p.contains("se_shape"))
            cfg.ctx.se_shape = detail::shape_from_string(p.at("se_shape").get<std::string>());
        if (p.contains("seed_criteria")) {
            const auto& c = p.at("seed_criteria");
            get_if_present(c, "window_radius", cfg.ctx.seed_criteria.window_radius);
            get_if_present(c, "max_local_std", cfg.ctx.seed_criteria.max_local_std);
            get_if_present(c, "min_separation", cfg.ctx.seed_criteria.min_separation);
            get_if_present(c, "sample_count", cfg.ctx.seed_criteria.sample_count);
            get_if_present(c, "max_attempts", cfg.ctx.seed_criteria.max_attempts);
        }
    }
    if (j.contains("phantom")) {
        const auto& p = j.at("phantom");
        get_if_present(p, "count", cfg.corpus.count);
        get_if_present(p, "width", cfg.corpus.width);
        get_if_present(p, "height", cfg.corpus.height);
        get_if_present(p, "noise_sigma", cfg.corpus.noise_sigma);
        get_if_present(p, "lesion_mean", cfg.corpus.lesion_mean);
        get_if_present(p, "background_mean", cfg.corpus.background_mean);
        get_if_present(p, "distractor_mean", cfg.corpus.distractor_mean);
        get_if_present(p, "with_distractor", cfg.corpus.with_distractor);
        get_if_present(p, "bridge_width", cfg.corpus.bridge_width);
        get_if_present(p, "rng_seed", cfg.corpus.rng_seed);
    }
}

/// Full effective configuration as JSON (the config-echo payload).
inline nlohmann::json config_to_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["input"] = cfg.input;
    j["gt"] = cfg.gt;
    j["roi"] = cfg.roi;
    j["axis"] = cfg.axis;
    j["slice_begin"] = cfg.slice_begin;
    j["slice_end"] = cfg.slice_end;
    j["slice"] = cfg.slice;
    j["roi_policy"] = cfg.roi_policy;
    j["roi_dilation_radius"] = cfg.roi_dilation_radius;
    j["experiment"] = cfg.experiment;
    j["rng_seed"] = cfg.rng_seed;
    j["threads"] = cfg.threads;
    j["out_dir"] = cfg.out_dir;
    j["grid"] = {{"fuzzy_threshold", cfg.grid.fuzzy_threshold},
                 {"n_seeds", cfg.grid.n_seeds},
                 {"denoise_sigma", cfg.grid.denoise_sigma},
                 {"dilate_size", cfg.grid.dilate_size}};
    j["defaults"] = {{"fuzzy_threshold", cfg.defaults.fuzzy_threshold},
                     {"n_seeds", cfg.defaults.n_seeds},
                     {"denoise_sigma", cfg.defaults.denoise_sigma},
                     {"dilate_size", cfg.defaults.dilate_size}};
    j["pipeline"] = {{"sigma_floor", cfg.ctx.sigma_floor},
                     {"erode_size", cfg.ctx.erode_size},
                     {"se_shape", detail::shape_to_string(cfg.ctx.se_shape)},
                     {"seed_criteria",
                      {{"window_radius", cfg.ctx.seed_criteria.window_radius},
                       {"max_local_std", cfg.ctx.seed_criteria.max_local_std},
                       {"min_separation", cfg.ctx.seed_criteria.min_separation},
                       {"sample_count", cfg.ctx.seed_criteria.sample_count},
                       {"max_attempts", cfg.ctx.seed_criteria.max_attempts}}}};
    j["phantom"] = {{"count", cfg.corpus.count},
                    {"width", cfg.corpus.width},
                    {"height", cfg.corpus.height},
                    {"noise_sigma", cfg.corpus.noise_sigma},
                    {"lesion_mean", cfg.corpus.lesion_mean},
                    {"background_mean", cfg.corpus.background_mean},
                    {"distractor_mean", cfg.corpus.distractor_mean},
                    {"with_distractor", cfg.corpus.with_distractor},
                    {"bridge_width", cfg.corpus.bridge_width},
                    {"rng_seed", cfg.corpus.rng_seed}};
    return j;
}

inline void load_config_file(RunConfig& cfg, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FileError("cannot open config " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error("config " + path.string() + ": " + e.what());
    }
    apply_config_json(cfg, j);
}

/// Write the config echo: all effective parameters, defaults included,
/// sufficient to reproduce the run bit-for-bit.
inline void write_config_echo(const RunConfig& cfg, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write " + path.string());
    out << config_to_json(cfg).dump(2) << "\n";
}

} // namespace fisrg

#endif // FISRG_CONFIG_HPP
