#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "fisrg/config.hpp"
#include "fisrg/report.hpp"
#include "test_util.hpp"

using namespace fisrg;
using testutil::TempDir;

namespace {

std::size_t count_substr(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t pos = hay.find(needle); pos != std::string::npos;
         pos = hay.find(needle, pos + needle.size()))
        ++n;
    return n;
}

std::vector<SliceResult> sample_results() {
    std::vector<SliceResult> rs;
    for (int i = 0; i < 3; ++i) {
        SliceResult r;
        r.slice_index = i;
        r.best = {0.112 + 0.1 * i, 2 + i, 1.0, 5};
        r.dice = 0.8 + 0.05 * i;
        r.lesion_pct = 3.5 * (i + 1);
        r.elapsed_ms = 12.345;
        rs.push_back(r);
    }
    return rs;
}

} // namespace

TEST_CASE("results CSV has the frozen header and one row per slice") {
    TempDir tmp;
    const auto rs = sample_results();
    write_results_csv(rs, tmp.file("r.csv"));
    const std::string text = testutil::read_text(tmp.file("r.csv"));

    REQUIRE(text.rfind("slice_index,lesion_pct,fuzzy_threshold,n_seeds,denoise_sigma,"
                       "dilate_size,dice,elapsed_ms\n", 0) == 0);
    REQUIRE(count_substr(text, "\n") == 4); // header + 3 rows
    REQUIRE(text.find("0,3.5000,0.112,2,1,5,0.800000,12.345") != std::string::npos);
}

TEST_CASE("summary text carries the four statistic rows") {
    ExperimentSummary s;
    s.fuzzy_threshold = {0.311, 0.239, 0.112, 1.0};
    s.n_seeds = {8.875, 2.486, 4.0, 11.0};
    s.dice = {0.849, 0.071, 0.481, 0.934};
    s.total_elapsed_min = 73.0;
    const std::string text = summary_text(s, 1);

    REQUIRE(text.find("Experiment 1") != std::string::npos);
    for (const char* row : {"mean", "std", "min", "max"})
        REQUIRE(text.find(row) != std::string::npos);
    REQUIRE(text.find("0.311") != std::string::npos);
    REQUIRE(text.find("8.875") != std::string::npos);
    REQUIRE(text.find("0.849") != std::string::npos);
    REQUIRE(text.find("73.0 min") != std::string::npos);
}

TEST_CASE("emit_chart writes axes-only SVG for empty series") {
    TempDir tmp;
    emit_chart({}, {}, tmp.file("empty.svg"));
    const std::string svg = testutil::read_text(tmp.file("empty.svg"));
    REQUIRE(svg.rfind("<svg", 0) == 0);
    REQUIRE(svg.find("</svg>") != std::string::npos);
    REQUIRE(count_substr(svg, "<polyline") == 0);
}

TEST_CASE("emit_chart draws exactly one polyline per two-point series") {
    TempDir tmp;
    ChartSeries dice{"Dice", {{0, 0.8}, {1, 0.9}}};
    ChartSeries lesion{"lesion %", {{0, 3.0}, {1, 4.5}}};
    emit_chart({dice, lesion}, {}, tmp.file("two.svg"));
    const std::string svg = testutil::read_text(tmp.file("two.svg"));
    REQUIRE(count_substr(svg, "<polyline") == 2);
}

TEST_CASE("emit_chart output is byte-identical across runs") {
    TempDir tmp;
    const auto rs = sample_results();
    emit_experiment_chart(rs, 2, tmp.file("a.svg"));
    emit_experiment_chart(rs, 2, tmp.file("b.svg"));
    REQUIRE(testutil::read_text(tmp.file("a.svg")) == testutil::read_text(tmp.file("b.svg")));
    REQUIRE(!testutil::read_text(tmp.file("a.svg")).empty());
}

TEST_CASE("config echo captures the effective parameters and round-trips") {
    TempDir tmp;
    RunConfig cfg;
    cfg.rng_seed = 987654321;
    cfg.experiment = 3;
    cfg.grid.fuzzy_threshold = {0.25, 0.75};
    cfg.ctx.seed_criteria.min_separation = 7.5;
    write_config_echo(cfg, tmp.file("echo.json"));

    RunConfig loaded; // defaults everywhere, then overlay the echo
    load_config_file(loaded, tmp.file("echo.json"));
    REQUIRE(loaded.rng_seed == cfg.rng_seed);
    REQUIRE(loaded.experiment == 3);
    REQUIRE(loaded.grid.fuzzy_threshold == cfg.grid.fuzzy_threshold);
    REQUIRE(loaded.ctx.seed_criteria.min_separation == 7.5);
    REQUIRE(loaded.defaults.dilate_size == cfg.defaults.dilate_size);

    // echo of the loaded config is byte-identical: nothing is lost
    write_config_echo(loaded, tmp.file("echo2.json"));
    REQUIRE(testutil::read_text(tmp.file("echo.json")) ==
            testutil::read_text(tmp.file("echo2.json")));
}

TEST_CASE("config files overlay only the keys they define") {
    TempDir tmp;
    std::ofstream(tmp.file("partial.json")) << R"({"experiment": 2, "grid": {"n_seeds": [3, 5]}})";
    RunConfig cfg;
    const auto default_thresholds = cfg.grid.fuzzy_threshold;
    load_config_file(cfg, tmp.file("partial.json"));
    REQUIRE(cfg.experiment == 2);
    REQUIRE(cfg.grid.n_seeds == std::vector<int>{3, 5});
    REQUIRE(cfg.grid.fuzzy_threshold == default_thresholds);
}

TEST_CASE("malformed config files raise a config error") {
    TempDir tmp;
    std::ofstream(tmp.file("bad.json")) << "{not json";
    RunConfig cfg;
    REQUIRE_THROWS_AS(load_config_file(cfg, tmp.file("bad.json")), Error);
    REQUIRE_THROWS_AS(load_config_file(cfg, tmp.file("missing.json")), FileError);
}
