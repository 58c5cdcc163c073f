// fisrg — FISRG stroke-lesion segmentation toolkit CLI.
//
// Subcommands: segment, tune, phantom, evaluate.
// Exit codes: 0 success, 2 usage error, 3 I/O error, 4 computation error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fisrg/fisrg.hpp"

namespace fs = std::filesystem;
using namespace fisrg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitCompute = 4;

int fail(int code, const std::string& message) {
    std::cerr << "fisrg: " << message << "\n";
    return code;
}

bool has_suffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool is_nifti_path(const std::string& p) {
    return has_suffix(p, ".nii") || has_suffix(p, ".nii.gz");
}

/// "A..B" inclusive range.
std::optional<std::pair<int, int>> parse_slice_range(const std::string& s) {
    const auto dots = s.find("..");
    if (dots == std::string::npos) return std::nullopt;
    try {
        const int a = std::stoi(s.substr(0, dots));
        const int b = std::stoi(s.substr(dots + 2));
        return std::make_pair(a, b);
    } catch (...) {
        return std::nullopt;
    }
}

std::string slice_stem(int index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "slice_%03d", index);
    return buf;
}

/// Extract a mask plane from a label volume without intensity
/// normalization: any voxel > 0.5 counts as true.
BinaryMask mask_slice(const Volume& v, int axis, int index) {
    if (axis < 0 || axis > 2 || index < 0 || index >= v.dims[axis])
        throw IndexOutOfRange("mask slice index out of range");
    int w = 0, h = 0;
    switch (axis) {
        case 0: w = v.dims[1]; h = v.dims[2]; break;
        case 1: w = v.dims[0]; h = v.dims[2]; break;
        case 2: w = v.dims[0]; h = v.dims[1]; break;
    }
    BinaryMask m(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double val = 0.0;
            switch (axis) {
                case 0: val = v.at(index, x, y); break;
                case 1: val = v.at(x, index, y); break;
                case 2: val = v.at(x, y, index); break;
            }
            m.set(x, y, val > 0.5);
        }
    return m;
}

ExperimentConfig experiment_config(const RunConfig& cfg) {
    ExperimentConfig ec;
    ec.experiment_id = cfg.experiment;
    ec.fixed_defaults = cfg.defaults;
    ec.grid = cfg.grid;
    ec.rng_seed = cfg.rng_seed;
    ec.threads = cfg.threads;
    ec.ctx = cfg.ctx;
    return ec;
}

/// Prepare the output directory and write the config echo before any
/// computation; an unwritable destination fails fast with an I/O error.
int prepare_out_dir(const RunConfig& cfg) {
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    try {
        write_config_echo(cfg, fs::path(cfg.out_dir) / "config_echo.json");
    } catch (const Error& e) {
        return fail(kExitIo, e.what());
    }
    return kExitOk;
}

// --- input assembly for `tune` ---

std::vector<SliceCase> load_cases_from_volume(const RunConfig& cfg) {
    const Volume vol = load_volume(cfg.input);
    const Volume gt_vol = load_volume(cfg.gt);
    std::optional<Volume> roi_vol;
    if (cfg.roi_policy == "provided-mask") {
        if (cfg.roi.empty()) throw Error("roi_policy provided-mask needs --roi");
        roi_vol = load_volume(cfg.roi);
    }

    int lo = cfg.slice_begin >= 0 ? cfg.slice_begin : 0;
    int hi = cfg.slice_end >= 0 ? cfg.slice_end : vol.dims[cfg.axis] - 1;
    if (lo < 0 || hi >= vol.dims[cfg.axis] || lo > hi)
        throw IndexOutOfRange("slice range outside the volume");

    std::vector<SliceCase> cases;
    for (int i = lo; i <= hi; ++i) {
        SliceCase c;
        c.index = i;
        c.image = extract_slice(vol, cfg.axis, i);
        c.gt = mask_slice(gt_vol, cfg.axis, i);
        c.roi = roi_vol ? mask_slice(*roi_vol, cfg.axis, i)
                        : derive_roi(c.gt, cfg.roi_dilation_radius);
        cases.push_back(std::move(c));
    }
    return cases;
}

std::vector<SliceCase> load_cases_from_directory(const RunConfig& cfg) {
    std::vector<SliceCase> cases;
    for (int i = 0;; ++i) {
        const fs::path img_path = fs::path(cfg.input) / (slice_stem(i) + ".pgm");
        const fs::path gt_path = fs::path(cfg.input) / (slice_stem(i) + "_gt.pgm");
        if (!fs::exists(img_path)) {
            if (cfg.slice_begin >= 0 && i <= cfg.slice_end) continue;
            break;
        }
        if (cfg.slice_begin >= 0 && (i < cfg.slice_begin || i > cfg.slice_end)) continue;
        SliceCase c;
        c.index = i;
        c.image = load_gray(img_path);
        c.gt = load_mask(gt_path);
        if (cfg.roi_policy == "provided-mask") {
            const fs::path roi_path = fs::path(cfg.input) / (slice_stem(i) + "_roi.pgm");
            c.roi = load_mask(roi_path);
        } else {
            c.roi = derive_roi(c.gt, cfg.roi_dilation_radius);
        }
        cases.push_back(std::move(c));
    }
    if (cases.empty()) throw FileError("no slice_NNN.pgm/_gt.pgm pairs under " + cfg.input);
    return cases;
}

std::vector<SliceCase> phantom_cases(const RunConfig& cfg) {
    std::vector<SliceCase> cases;
    for (PhantomSlice& s : generate_corpus(cfg.corpus)) {
        SliceCase c;
        c.index = s.index;
        c.image = std::move(s.image);
        c.roi = derive_roi(s.gt, cfg.roi_dilation_radius);
        c.gt = std::move(s.gt);
        cases.push_back(std::move(c));
    }
    return cases;
}

// --- subcommands ---

int cmd_tune(const RunConfig& cfg) {
    if (const int rc = prepare_out_dir(cfg); rc != kExitOk) return rc;

    std::vector<SliceCase> cases;
    try {
        if (cfg.input.empty())
            cases = phantom_cases(cfg);
        else if (fs::is_directory(cfg.input))
            cases = load_cases_from_directory(cfg);
        else if (is_nifti_path(cfg.input)) {
            if (cfg.gt.empty()) return fail(kExitUsage, "volume input needs --gt");
            cases = load_cases_from_volume(cfg);
        } else
            return fail(kExitUsage, "input must be a NIfTI volume or a slice directory: " + cfg.input);
    } catch (const Error& e) {
        return fail(kExitIo, e.what());
    }

    std::vector<SliceResult> results;
    ExperimentSummary summary;
    try {
        std::tie(results, summary) = run_experiment(cases, experiment_config(cfg));
    } catch (const Error& e) {
        return fail(kExitCompute, e.what());
    }

    try {
        const fs::path out(cfg.out_dir);
        write_results_csv(results, out / "results.csv");
        const std::string text = summary_text(summary, cfg.experiment);
        std::ofstream(out / "summary.txt", std::ios::binary) << text;
        emit_experiment_chart(results, cfg.experiment, out / "chart.svg");
        std::cout << text;
    } catch (const Error& e) {
        return fail(kExitIo, e.what());
    }
    return kExitOk;
}

int cmd_segment(const RunConfig& cfg) {
    if (cfg.input.empty()) return fail(kExitUsage, "segment needs --input");
    if (cfg.roi.empty() && cfg.gt.empty())
        return fail(kExitUsage, "segment needs --roi (or --gt with roi_policy dilated-gt)");
    if (const int rc = prepare_out_dir(cfg); rc != kExitOk) return rc;

    GrayImage img;
    BinaryMask roi;
    try {
        if (is_nifti_path(cfg.input)) {
            if (cfg.slice < 0) return fail(kExitUsage, "volume input needs --slice");
            img = extract_slice(load_volume(cfg.input), cfg.axis, cfg.slice);
        } else {
            img = load_gray(cfg.input);
        }
        if (!cfg.roi.empty()) {
            roi = is_nifti_path(cfg.roi) ? mask_slice(load_volume(cfg.roi), cfg.axis, cfg.slice)
                                         : load_mask(cfg.roi);
        } else {
            const BinaryMask gt = is_nifti_path(cfg.gt)
                                      ? mask_slice(load_volume(cfg.gt), cfg.axis, cfg.slice)
                                      : load_mask(cfg.gt);
            roi = derive_roi(gt, cfg.roi_dilation_radius);
        }
    } catch (const Error& e) {
        return fail(kExitIo, e.what());
    }

    const ParamPoint p = cfg.defaults;
    BinaryMask pred;
    SeedSet seeds;
    double elapsed_ms = 0.0;
    try {
        const auto t0 = std::chrono::steady_clock::now();
        const GrayImage den = denoise(img, p.denoise_sigma);
        seeds = select_seeds(den, roi, p.n_seeds, cfg.ctx.seed_criteria, cfg.rng_seed);
        const BinaryMask grown = fisrg_segment(den, seeds, {p.fuzzy_threshold, cfg.ctx.sigma_floor});
        pred = postprocess(grown, p.dilate_size, cfg.ctx.erode_size, cfg.ctx.se_shape);
        elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                         .count();
    } catch (const Error& e) {
        return fail(kExitCompute, e.what());
    }

    try {
        const fs::path out(cfg.out_dir);
        save_mask(pred, out / "segmentation.pgm");
        nlohmann::json sidecar;
        sidecar["parameters"] = {{"fuzzy_threshold", p.fuzzy_threshold},
                                 {"n_seeds", p.n_seeds},
                                 {"denoise_sigma", p.denoise_sigma},
                                 {"dilate_size", p.dilate_size},
                                 {"erode_size", cfg.ctx.erode_size},
                                 {"sigma_floor", cfg.ctx.sigma_floor}};
        sidecar["rng_seed"] = cfg.rng_seed;
        sidecar["seeds_used"] = nlohmann::json::array();
        for (const PixelCoord& s : seeds.points) sidecar["seeds_used"].push_back({s.x, s.y});
        sidecar["predicted_pixels"] = pred.count();
        sidecar["elapsed_ms"] = elapsed_ms;
        std::ofstream(out / "segmentation.json", std::ios::binary) << sidecar.dump(2) << "\n";
    } catch (const Error& e) {
        return fail(kExitIo, e.what());
    }
    std::cout << "wrote " << (fs::path(cfg.out_dir) / "segmentation.pgm").string() << "\n";
    return kExitOk;
}

int cmd_phantom(const RunConfig& cfg, const PhantomSpec& base, int count) {
    if (const int rc = prepare_out_dir(cfg); rc != kExitOk) return rc;
    try {
        for (int i = 0; i < count; ++i) {
            PhantomSpec spec = base;
            if (count > 1) spec.rng_seed = derive_seed(base.rng_seed, static_cast<std::uint64_t>(i));
            const auto [img, gt] = generate_phantom(spec);
            const fs::path out(cfg.out_dir);
            save_gray(img, out / (slice_stem(i) + ".pgm"));
            save_mask(gt, out / (slice_stem(i) + "_gt.pgm"));
        }
    } catch (const ShapeOutOfBounds& e) {
        return fail(kExitCompute, e.what());
    } catch (const Error& e) {
        return fail(kExitIo, e.what());
    }
    std::cout << "wrote " << count << " phantom slice(s) to " << cfg.out_dir << "\n";
    return kExitOk;
}

int cmd_evaluate(const std::string& pred_path, const std::string& gt_path) {
    BinaryMask pred, gt;
    try {
        pred = load_mask(pred_path);
        gt = load_mask(gt_path);
    } catch (const Error& e) {
        return fail(kExitIo, e.what());
    }
    try {
        std::printf("dice %.6f\n", dice(gt, pred));
        std::printf("lesion_pct %.4f\n", lesion_percentage(gt));
    } catch (const Error& e) {
        return fail(kExitCompute, e.what());
    }
    return kExitOk;
}

void add_common_flags(CLI::App* cmd, RunConfig& cfg, std::string& config_path) {
    cmd->add_option("--config", config_path, "JSON config file; flags override its values");
    cmd->add_option("--out", cfg.out_dir, "output directory");
    cmd->add_option("--rng-seed", cfg.rng_seed, "RNG seed");
    cmd->add_option("--threads", cfg.threads, "worker threads (0 = all cores)")
        ->envname("FISRG_THREADS");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fuzzy Information Seeded Region Growing segmentation toolkit"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    std::string slices_range;

    // tune
    CLI::App* tune = app.add_subcommand("tune", "grid-search experiment on a slice corpus");
    add_common_flags(tune, cfg, config_path);
    tune->add_option("--input", cfg.input, "NIfTI volume or slice directory (default: phantom corpus)");
    tune->add_option("--gt", cfg.gt, "ground-truth mask volume (volume input)");
    tune->add_option("--roi", cfg.roi, "ROI mask volume (with roi-policy provided-mask)");
    tune->add_option("--axis", cfg.axis, "slice axis for volumes")->check(CLI::Range(0, 2));
    tune->add_option("--slices", slices_range, "slice range A..B (inclusive)");
    tune->add_option("--experiment", cfg.experiment, "experiment id")->check(CLI::Range(1, 3));
    tune->add_option("--roi-policy", cfg.roi_policy, "dilated-gt | provided-mask")
        ->check(CLI::IsMember({"dilated-gt", "provided-mask"}));
    tune->add_option("--roi-dilation-radius", cfg.roi_dilation_radius, "dilated-gt disk radius");
    tune->add_option("--grid-fuzzy-threshold", cfg.grid.fuzzy_threshold, "threshold grid values")
        ->delimiter(',');
    tune->add_option("--grid-n-seeds", cfg.grid.n_seeds, "seed-count grid values")->delimiter(',');
    tune->add_option("--grid-denoise-sigma", cfg.grid.denoise_sigma, "sigma grid values")
        ->delimiter(',');
    tune->add_option("--grid-dilate-size", cfg.grid.dilate_size, "dilation-size grid values")
        ->delimiter(',');
    tune->add_option("--phantom-count", cfg.corpus.count, "phantom corpus size (no --input)");
    tune->add_flag("--phantom-distractor", cfg.corpus.with_distractor,
                   "phantom corpus uses the distractor shape");

    // segment
    CLI::App* segment = app.add_subcommand("segment", "segment one slice at fixed parameters");
    add_common_flags(segment, cfg, config_path);
    segment->add_option("--input", cfg.input, "grayscale image (PGM/PNG) or NIfTI volume");
    segment->add_option("--roi", cfg.roi, "ROI mask (PGM/PNG, or NIfTI with volume input)");
    segment->add_option("--gt", cfg.gt, "ground truth; ROI derived by dilation when --roi absent");
    segment->add_option("--axis", cfg.axis, "slice axis for volumes")->check(CLI::Range(0, 2));
    segment->add_option("--slice", cfg.slice, "slice index for volumes");
    segment->add_option("--roi-dilation-radius", cfg.roi_dilation_radius, "dilated-gt disk radius");
    segment->add_option("--fuzzy-threshold", cfg.defaults.fuzzy_threshold, "membership threshold");
    segment->add_option("--n-seeds", cfg.defaults.n_seeds, "seed count");
    segment->add_option("--denoise-sigma", cfg.defaults.denoise_sigma, "Gaussian denoise sigma");
    segment->add_option("--dilate-size", cfg.defaults.dilate_size, "postprocess dilation size");
    segment->add_option("--erode-size", cfg.ctx.erode_size, "postprocess erosion size");

    // phantom
    CLI::App* phantom = app.add_subcommand("phantom", "generate synthetic ground-truthed slices");
    add_common_flags(phantom, cfg, config_path);
    PhantomSpec pspec;
    int pcount = 1;
    std::string shape_name = "disk";
    phantom->add_option("--width", pspec.width, "image width");
    phantom->add_option("--height", pspec.height, "image height");
    phantom->add_option("--shape", shape_name,
                        "disk | two-lobes-with-bridge | annulus-adjacent-distractor")
        ->check(CLI::IsMember({"disk", "two-lobes-with-bridge", "annulus-adjacent-distractor"}));
    phantom->add_option("--lesion-mean", pspec.lesion_mean, "lesion intensity");
    phantom->add_option("--background-mean", pspec.background_mean, "background intensity");
    phantom->add_option("--distractor-mean", pspec.distractor_mean, "distractor intensity");
    phantom->add_option("--noise-sigma", pspec.noise_sigma, "Gaussian noise std");
    phantom->add_option("--bridge-width", pspec.bridge_width, "bridge width in pixels");
    phantom->add_option("--count", pcount, "number of slices");

    // evaluate
    CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "Dice and lesion percentage of a prediction");
    std::string pred_path, gt_path;
    evaluate_cmd->add_option("pred", pred_path, "predicted mask")->required();
    evaluate_cmd->add_option("gt", gt_path, "ground-truth mask")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    // config file first, then re-parse so flags override file values
    if (!config_path.empty()) {
        try {
            load_config_file(cfg, config_path);
        } catch (const FileError& e) {
            return fail(kExitIo, e.what());
        } catch (const Error& e) {
            return fail(kExitUsage, e.what());
        }
        try {
            app.clear();
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            app.exit(e);
            return kExitUsage;
        }
    }
    if (!slices_range.empty()) {
        const auto range = parse_slice_range(slices_range);
        if (!range) return fail(kExitUsage, "bad --slices value '" + slices_range + "' (want A..B)");
        cfg.slice_begin = range->first;
        cfg.slice_end = range->second;
    }

    try {
        if (tune->parsed()) return cmd_tune(cfg);
        if (segment->parsed()) return cmd_segment(cfg);
        if (phantom->parsed()) {
            pspec.rng_seed = cfg.rng_seed;
            pspec.shape = detail::lesion_shape_from_string(shape_name);
            return cmd_phantom(cfg, pspec, pcount);
        }
        if (evaluate_cmd->parsed()) return cmd_evaluate(pred_path, gt_path);
    } catch (const Error& e) {
        return fail(kExitCompute, e.what());
    } catch (const std::exception& e) {
        return fail(kExitCompute, e.what());
    }
    return kExitUsage;
}
