#ifndef FISRG_REPORT_HPP
#define FISRG_REPORT_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fisrg/errors.hpp"
#include "fisrg/tuner.hpp"

namespace fisrg {

namespace detail {

inline std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

} // namespace detail

/// Frozen per-slice CSV column order; consumers rely on it.
inline constexpr const char* kCsvHeader =
    "slice_index,lesion_pct,fuzzy_threshold,n_seeds,denoise_sigma,dilate_size,dice,elapsed_ms";

inline std::string csv_row(const SliceResult& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%d,%.4f,%g,%d,%g,%d,%.6f,%.3f", r.slice_index, r.lesion_pct,
                  r.best.fuzzy_threshold, r.best.n_seeds, r.best.denoise_sigma, r.best.dilate_size,
                  r.dice, r.elapsed_ms);
    return buf;
}

inline void write_results_csv(std::span<const SliceResult> results,
                              const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write " + path.string());
    out << kCsvHeader << "\n";
    for (const SliceResult& r : results) out << csv_row(r) << "\n";
}

/// Table-style statistical summary block (mean/std/min/max rows).
inline std::string summary_text(const ExperimentSummary& s, int experiment_id) {
    std::string out = "Statistical Summary of Parameters for Experiment " +
                      std::to_string(experiment_id) + "\n";
    char line[160];
    std::snprintf(line, sizeof line, "%-6s%18s%12s%12s\n", "", "Fuzzy Threshold", "Seeds",
                  "Dice Score");
    out += line;
    const auto row = [&](const char* name, double a, double b, double c) {
        std::snprintf(line, sizeof line, "%-6s%18.3f%12.3f%12.3f\n", name, a, b, c);
        out += line;
    };
    row("mean", s.fuzzy_threshold.mean, s.n_seeds.mean, s.dice.mean);
    row("std", s.fuzzy_threshold.std, s.n_seeds.std, s.dice.std);
    row("min", s.fuzzy_threshold.min, s.n_seeds.min, s.dice.min);
    row("max", s.fuzzy_threshold.max, s.n_seeds.max, s.dice.max);
    out += "\nTotal elapsed: " + detail::fmt("%.1f", s.total_elapsed_min) + " min\n";
    return out;
}

struct ChartSeries {
    std::string label;
    std::vector<std::pair<double, double>> points; // (slice_index, value)
};

struct ChartLabels {
    std::string title = "Dice Score and Lesion Percentage per Slice";
    std::string x_label = "slice";
    std::string left_label = "Dice";
    std::string right_label = "lesion %";
};

/// Write a standalone dual-axis line chart as SVG: series[0] against the
/// left axis (scaled 0..1), series[1] against the right axis (scaled to its
/// data). Byte output is deterministic for fixed input. Series with fewer
/// than two points contribute no polyline.
inline void emit_chart(const std::vector<ChartSeries>& series, const ChartLabels& labels,
                       const std::filesystem::path& path) {
    constexpr double L = 70, R = 810, T = 40, B = 390; // plot rect in the 880x440 canvas

    double x_lo = 0.0, x_hi = 1.0;
    bool have_x = false;
    for (const ChartSeries& s : series) {
        for (const auto& [x, y] : s.points) {
            if (!have_x) {
                x_lo = x_hi = x;
                have_x = true;
            } else {
                x_lo = std::min(x_lo, x);
                x_hi = std::max(x_hi, x);
            }
        }
    }
    if (x_hi == x_lo) x_hi = x_lo + 1.0;

    double right_hi = 1.0;
    if (series.size() > 1) {
        for (const auto& [x, y] : series[1].points) right_hi = std::max(right_hi, y);
        right_hi *= 1.05;
    }

    const auto sx = [&](double x) { return L + (x - x_lo) / (x_hi - x_lo) * (R - L); };
    const auto sy_left = [&](double y) { return B - y * (B - T); };
    const auto sy_right = [&](double y) { return B - y / right_hi * (B - T); };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"880\" height=\"440\" "
           "viewBox=\"0 0 880 440\">\n";
    svg += "<rect width=\"880\" height=\"440\" fill=\"white\"/>\n";
    svg += "<text x=\"440\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">" + labels.title + "</text>\n";

    // axes
    const auto line = [&](double x1, double y1, double x2, double y2, const char* color) {
        svg += "<line x1=\"" + detail::fmt("%.2f", x1) + "\" y1=\"" + detail::fmt("%.2f", y1) +
               "\" x2=\"" + detail::fmt("%.2f", x2) + "\" y2=\"" + detail::fmt("%.2f", y2) +
               "\" stroke=\"" + color + "\" stroke-width=\"1\"/>\n";
    };
    line(L, T, L, B, "black");
    line(L, B, R, B, "black");
    line(R, T, R, B, "black");

    for (int i = 0; i <= 5; ++i) {
        const double f = i / 5.0;
        const double y = B - f * (B - T);
        line(L - 4, y, L, y, "black");
        svg += "<text x=\"" + detail::fmt("%.2f", L - 8) + "\" y=\"" + detail::fmt("%.2f", y + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               detail::fmt("%.2f", f) + "</text>\n";
        line(R, y, R + 4, y, "black");
        svg += "<text x=\"" + detail::fmt("%.2f", R + 8) + "\" y=\"" + detail::fmt("%.2f", y + 4) +
               "\" text-anchor=\"start\" font-family=\"sans-serif\" font-size=\"11\">" +
               detail::fmt("%.1f", f * right_hi) + "</text>\n";
        const double x = L + f * (R - L);
        line(x, B, x, B + 4, "black");
        svg += "<text x=\"" + detail::fmt("%.2f", x) + "\" y=\"" + detail::fmt("%.2f", B + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               detail::fmt("%.0f", x_lo + f * (x_hi - x_lo)) + "</text>\n";
    }
    svg += "<text x=\"440\" y=\"425\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">" + labels.x_label + "</text>\n";
    svg += "<text x=\"20\" y=\"215\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\" transform=\"rotate(-90 20 215)\">" + labels.left_label + "</text>\n";
    svg += "<text x=\"860\" y=\"215\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\" transform=\"rotate(90 860 215)\">" + labels.right_label + "</text>\n";

    static constexpr const char* kColors[2] = {"#1f77b4", "#d62728"};
    for (std::size_t si = 0; si < series.size() && si < 2; ++si) {
        const ChartSeries& s = series[si];
        if (s.points.size() >= 2) {
            svg += "<polyline fill=\"none\" stroke=\"";
            svg += kColors[si];
            svg += "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.points.size(); ++i) {
                if (i) svg += " ";
                const double y = si == 0 ? sy_left(s.points[i].second) : sy_right(s.points[i].second);
                svg += detail::fmt("%.2f", sx(s.points[i].first)) + "," + detail::fmt("%.2f", y);
            }
            svg += "\"/>\n";
        }
        // legend
        const double ly = T + 16 + 16 * static_cast<double>(si);
        line(L + 10, ly - 4, L + 34, ly - 4, kColors[si]);
        svg += "<text x=\"" + detail::fmt("%.2f", L + 40) + "\" y=\"" + detail::fmt("%.2f", ly) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + s.label + "</text>\n";
    }
    svg += "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write " + path.string());
    out << svg;
}

/// Convenience wrapper: chart the tuner's per-slice Dice and lesion
/// percentage, mirroring the experiment figures.
inline void emit_experiment_chart(std::span<const SliceResult> results, int experiment_id,
                                  const std::filesystem::path& path) {
    ChartSeries dice_series{"Dice score", {}};
    ChartSeries lesion_series{"lesion %", {}};
    for (const SliceResult& r : results) {
        dice_series.points.push_back({static_cast<double>(r.slice_index), r.dice});
        lesion_series.points.push_back({static_cast<double>(r.slice_index), r.lesion_pct});
    }
    ChartLabels labels;
    labels.title = "Dice Score and Lesion Percentage per Slice (Experiment " +
                   std::to_string(experiment_id) + ")";
    emit_chart({dice_series, lesion_series}, labels, path);
}

} // namespace fisrg

#endif // FISRG_REPORT_HPP
