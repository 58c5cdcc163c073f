#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "fisrg/phantom.hpp"
#include "fisrg/seeds.hpp"
#include "oracle.hpp"

using namespace fisrg;

TEST_CASE("sample_roi repeats the only true pixel") {
    BinaryMask roi(10, 10);
    roi.set(6, 2, true);
    const auto pts = sample_roi(roi, 5, std::uint64_t{1});
    REQUIRE(pts.size() == 5);
    for (const PixelCoord& p : pts) REQUIRE(p == PixelCoord{6, 2});
}

TEST_CASE("sample_roi is deterministic and seed-sensitive") {
    BinaryMask roi(30, 30);
    for (int y = 5; y < 25; ++y)
        for (int x = 5; x < 25; ++x) roi.set(x, y, true);
    const auto a = sample_roi(roi, 40, std::uint64_t{9});
    const auto b = sample_roi(roi, 40, std::uint64_t{9});
    const auto c = sample_roi(roi, 40, std::uint64_t{10});
    REQUIRE(a == b);
    REQUIRE(a != c);
    for (const PixelCoord& p : a) REQUIRE(roi.at(p.x, p.y));
}

TEST_CASE("sample_roi rejects an empty ROI") {
    Rng rng(0);
    REQUIRE_THROWS_AS(sample_roi(BinaryMask(8, 8), 3, rng), EmptyRoi);
}

TEST_CASE("kmeans with k=1 returns the arithmetic mean") {
    const std::vector<PixelCoord> pts = {{0, 0}, {4, 0}, {0, 4}, {4, 4}, {2, 7}};
    Rng rng(3);
    const auto cents = kmeans(pts, 1, 50, 1e-9, rng);
    REQUIRE(cents.size() == 1);
    REQUIRE(cents[0].x == Catch::Approx(2.0));
    REQUIRE(cents[0].y == Catch::Approx(3.0));
}

TEST_CASE("kmeans recovers two tight clusters (brute-force oracle)") {
    const std::vector<PixelCoord> pts = {{10, 10}, {11, 10}, {10, 11},
                                         {50, 50}, {51, 50}, {50, 51}};
    auto expected = oracle::best_two_means(pts);
    std::sort(expected.begin(), expected.end(),
              [](const Point2& a, const Point2& b) { return a.x + a.y < b.x + b.y; });

    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        Rng rng(seed);
        auto got = kmeans(pts, 2, 50, 1e-9, rng);
        std::sort(got.begin(), got.end(),
                  [](const Point2& a, const Point2& b) { return a.x + a.y < b.x + b.y; });
        for (int c = 0; c < 2; ++c) {
            REQUIRE(std::hypot(got[c].x - expected[c].x, got[c].y - expected[c].y) < 1.0);
        }
    }
}

TEST_CASE("kmeans rejects invalid k") {
    const std::vector<PixelCoord> pts = {{1, 1}, {1, 1}, {2, 2}};
    Rng rng(0);
    REQUIRE_THROWS_AS(kmeans(pts, 0, 10, 1e-6, rng), InvalidK);
    REQUIRE_THROWS_AS(kmeans(pts, 3, 10, 1e-6, rng), InvalidK); // only 2 distinct
    REQUIRE_THROWS_AS(kmeans(std::vector<PixelCoord>{}, 1, 10, 1e-6, rng), InvalidK);
}

TEST_CASE("kmeans objective is non-increasing across Lloyd iterations") {
    Rng gen(101);
    std::vector<PixelCoord> pts;
    for (int i = 0; i < 120; ++i)
        pts.push_back({static_cast<int>(gen.uniform_index(60)),
                       static_cast<int>(gen.uniform_index(60))});
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        Rng rng(seed);
        std::vector<double> trace;
        kmeans(pts, 4, 50, 0.0, rng, &trace); // tol 0 forces max_iter sweeps
        for (std::size_t i = 1; i < trace.size(); ++i)
            REQUIRE(trace[i] <= trace[i - 1] + 1e-9);
    }
}

TEST_CASE("validate_centroid applies all three clauses") {
    GrayImage img(40, 40, 0.5);
    BinaryMask roi(40, 40);
    for (int y = 10; y < 30; ++y)
        for (int x = 10; x < 30; ++x) roi.set(x, y, true);
    const SeedCriteria crit; // window 2, std 0.05, separation 5
    SeedSet none;

    SECTION("centroid outside the ROI fails") {
        REQUIRE_FALSE(validate_centroid(img, roi, {5.0, 5.0}, none, crit));
        REQUIRE_FALSE(validate_centroid(img, roi, {-3.0, 12.0}, none, crit));
    }
    SECTION("uniform window with no accepted seeds passes") {
        REQUIRE(validate_centroid(img, roi, {20.0, 20.0}, none, crit));
    }
    SECTION("separation rule") {
        SeedSet accepted;
        accepted.points = {{20, 20}};
        REQUIRE_FALSE(validate_centroid(img, roi, {24.0, 20.0}, accepted, crit)); // d = 4
        REQUIRE(validate_centroid(img, roi, {25.0, 20.0}, accepted, crit));       // d = 5
    }
    SECTION("local heterogeneity fails") {
        GrayImage noisy = img;
        noisy.at(20, 20) = 1.0;
        noisy.at(21, 20) = 0.0;
        REQUIRE_FALSE(validate_centroid(noisy, roi, {20.0, 20.0}, none, crit));
    }
    SECTION("centroids round to the nearest pixel") {
        REQUIRE(validate_centroid(img, roi, {19.6, 20.4}, none, crit));
        REQUIRE_FALSE(validate_centroid(img, roi, {9.4, 20.0}, none, crit)); // rounds to x=9
    }
}

TEST_CASE("select_seeds fills k slots on a uniform disk ROI") {
    GrayImage img(64, 64, 0.5);
    BinaryMask roi(64, 64);
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x)
            if (std::hypot(x - 32, y - 32) <= 20) roi.set(x, y, true);

    const SeedCriteria crit;
    const SeedSet seeds = select_seeds(img, roi, 4, crit, 11);
    REQUIRE(seeds.size() == 4);
    for (std::size_t i = 0; i < seeds.points.size(); ++i) {
        const PixelCoord& p = seeds.points[i];
        REQUIRE(roi.at(p.x, p.y));
        for (std::size_t j = i + 1; j < seeds.points.size(); ++j)
            REQUIRE(std::hypot(p.x - seeds.points[j].x, p.y - seeds.points[j].y) >=
                    crit.min_separation);
    }
}

TEST_CASE("select_seeds returns seeds that re-pass every clause independently") {
    PhantomSpec spec;
    spec.noise_sigma = 0.01;
    spec.rng_seed = 13;
    const auto [img, gt] = generate_phantom(spec);

    SeedCriteria crit;
    crit.max_local_std = 0.06;
    const SeedSet seeds = select_seeds(img, gt, 5, crit, 17);
    REQUIRE(seeds.size() >= 1);
    for (std::size_t i = 0; i < seeds.points.size(); ++i) {
        const PixelCoord& p = seeds.points[i];
        // clause (a): inside the ROI
        REQUIRE(gt.at(p.x, p.y));
        // clause (b): window std within bound (recomputed here from scratch)
        double sum = 0.0, sum2 = 0.0;
        int n = 0;
        for (int dy = -crit.window_radius; dy <= crit.window_radius; ++dy)
            for (int dx = -crit.window_radius; dx <= crit.window_radius; ++dx)
                if (img.in_bounds(p.x + dx, p.y + dy)) {
                    const double v = img.at(p.x + dx, p.y + dy);
                    sum += v;
                    sum2 += v * v;
                    ++n;
                }
        const double mean = sum / n;
        REQUIRE(std::sqrt(std::max(0.0, sum2 / n - mean * mean)) <= crit.max_local_std);
        // clause (c): pairwise separation
        for (std::size_t j = 0; j < i; ++j)
            REQUIRE(std::hypot(p.x - seeds.points[j].x, p.y - seeds.points[j].y) >=
                    crit.min_separation);
    }
}

TEST_CASE("select_seeds is deterministic in the seed") {
    GrayImage img(64, 64, 0.5);
    BinaryMask roi(64, 64);
    for (int y = 8; y < 56; ++y)
        for (int x = 8; x < 56; ++x) roi.set(x, y, true);
    const SeedCriteria crit;
    const SeedSet a = select_seeds(img, roi, 6, crit, 42);
    const SeedSet b = select_seeds(img, roi, 6, crit, 42);
    REQUIRE(a.points == b.points);
}

TEST_CASE("select_seeds fails cleanly when no centroid can validate") {
    PhantomSpec spec;
    spec.noise_sigma = 0.1;
    spec.rng_seed = 3;
    const auto [img, gt] = generate_phantom(spec);
    SeedCriteria crit;
    crit.max_local_std = 0.0; // unsatisfiable on a noisy image
    REQUIRE_THROWS_AS(select_seeds(img, gt, 3, crit, 1), NoValidSeeds);
}

TEST_CASE("select_seeds partial fill on a tiny ROI is success, not an error") {
    GrayImage img(30, 10, 0.5);
    BinaryMask roi(30, 10);
    roi.set(0, 0, true);
    roi.set(10, 0, true);
    roi.set(20, 0, true);

    SeedCriteria crit;
    crit.min_separation = 5.0;
    const SeedSet seeds = select_seeds(img, roi, 11, crit, 4);

    // exhaustive check: all three ROI pixels are pairwise >= 5 apart, so at
    // most (and in fact exactly) 3 placements are satisfiable
    REQUIRE(seeds.size() >= 1);
    REQUIRE(seeds.size() <= 3);
    for (const PixelCoord& p : seeds.points) REQUIRE(roi.at(p.x, p.y));
}
