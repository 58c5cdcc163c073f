#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include "fisrg/preprocess.hpp"
#include "fisrg/rng.hpp"

using namespace fisrg;

namespace {

/// Direct (non-separable) 2D convolution with the full kernel — the
/// reference the separable implementation must match.
GrayImage convolve2d_direct(const GrayImage& img, const Kernel2D& k) {
    GrayImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double acc = 0.0;
            for (int dy = -k.radius; dy <= k.radius; ++dy)
                for (int dx = -k.radius; dx <= k.radius; ++dx)
                    acc += k.at(dx, dy) * img.at(detail::reflect_index(x + dx, img.width),
                                                 detail::reflect_index(y + dy, img.height));
            out.at(x, y) = acc;
        }
    }
    return out;
}

double image_mean(const GrayImage& img) {
    return std::accumulate(img.data.begin(), img.data.end(), 0.0) /
           static_cast<double>(img.data.size());
}

} // namespace

TEST_CASE("gaussian_kernel matches the continuous ratio and truncation rule") {
    const Kernel2D k = gaussian_kernel(1.0);
    REQUIRE(k.radius == 3); // ceil(3 * 1)
    // normalization cancels in the ratio w(1,0)/w(0,0) = exp(-1/2)
    REQUIRE(k.at(1, 0) / k.at(0, 0) == Catch::Approx(std::exp(-0.5)).epsilon(1e-12));
    REQUIRE(gaussian_kernel(0.7).radius == 3);  // ceil(2.1)
    REQUIRE(gaussian_kernel(2.0).radius == 6);
}

TEST_CASE("gaussian_kernel sums to one and is symmetric") {
    for (double sigma : {0.5, 1.0, 2.0, 5.0}) {
        const Kernel2D k = gaussian_kernel(sigma);
        const double sum = std::accumulate(k.weights.begin(), k.weights.end(), 0.0);
        REQUIRE(std::abs(sum - 1.0) < 1e-9);
        for (int dy = -k.radius; dy <= k.radius; ++dy)
            for (int dx = -k.radius; dx <= k.radius; ++dx) {
                REQUIRE(k.at(dx, dy) == k.at(-dx, dy));
                REQUIRE(k.at(dx, dy) == k.at(dx, -dy));
                REQUIRE(k.at(dx, dy) == k.at(dy, dx));
            }
    }
}

TEST_CASE("gaussian_kernel rejects non-positive sigma") {
    REQUIRE_THROWS_AS(gaussian_kernel(0.0), NonPositiveSigma);
    REQUIRE_THROWS_AS(gaussian_kernel(-1.0), NonPositiveSigma);
    REQUIRE_THROWS_AS(denoise(GrayImage(4, 4), -0.5), NonPositiveSigma);
}

TEST_CASE("denoise leaves constant images and sigma=0 inputs unchanged") {
    GrayImage constant(17, 9, 0.37);
    const GrayImage blurred = denoise(constant, 1.3);
    for (double v : blurred.data) REQUIRE(v == Catch::Approx(0.37).epsilon(1e-12));

    GrayImage ramp(12, 8);
    for (int y = 0; y < ramp.height; ++y)
        for (int x = 0; x < ramp.width; ++x) ramp.at(x, y) = x / 11.0;
    const GrayImage same = denoise(ramp, 0.0);
    REQUIRE(same.data == ramp.data);
}

TEST_CASE("impulse response equals the kernel away from borders") {
    const double sigma = 1.0;
    const Kernel2D k = gaussian_kernel(sigma);
    GrayImage img(21, 21, 0.0);
    img.at(10, 10) = 1.0;
    const GrayImage out = denoise(img, sigma);
    for (int dy = -k.radius; dy <= k.radius; ++dy)
        for (int dx = -k.radius; dx <= k.radius; ++dx)
            REQUIRE(out.at(10 + dx, 10 + dy) == Catch::Approx(k.at(dx, dy)).margin(1e-12));
    REQUIRE(out.at(10, 10) == Catch::Approx(k.at(0, 0)).margin(1e-12));
    REQUIRE(out.at(0, 0) == 0.0);
}

TEST_CASE("separable denoise matches direct 2D convolution within 1e-9") {
    Rng rng(31);
    GrayImage img(23, 17);
    for (double& v : img.data) v = rng.uniform01();
    for (double sigma : {0.6, 1.0, 2.5}) {
        const GrayImage sep = denoise(img, sigma);
        const GrayImage direct = convolve2d_direct(img, gaussian_kernel(sigma));
        for (std::size_t i = 0; i < img.data.size(); ++i)
            REQUIRE(sep.data[i] == Catch::Approx(direct.data[i]).margin(1e-9));
    }
}

TEST_CASE("denoise preserves the image mean under reflect padding") {
    GrayImage constant(15, 15, 0.42);
    REQUIRE(image_mean(denoise(constant, 2.0)) == Catch::Approx(0.42).margin(1e-6));

    GrayImage ramp(16, 11);
    for (int y = 0; y < ramp.height; ++y)
        for (int x = 0; x < ramp.width; ++x) ramp.at(x, y) = (x + 2.0 * y) / 40.0;
    REQUIRE(image_mean(denoise(ramp, 1.5)) == Catch::Approx(image_mean(ramp)).margin(1e-6));
}

TEST_CASE("denoise handles degenerate image shapes") {
    GrayImage column(1, 6);
    for (int y = 0; y < 6; ++y) column.at(0, y) = y / 5.0;
    const GrayImage out = denoise(column, 2.0); // kernel wider than the image
    REQUIRE(out.width == 1);
    for (double v : out.data) {
        REQUIRE(v >= 0.0);
        REQUIRE(v <= 1.0);
    }
    const GrayImage single = denoise(GrayImage(1, 1, 0.3), 1.0);
    REQUIRE(single.at(0, 0) == Catch::Approx(0.3));
}

TEST_CASE("denoise output stays within the input range") {
    Rng rng(77);
    GrayImage img(19, 13);
    for (double& v : img.data) v = rng.uniform01();
    const auto [lo, hi] = std::minmax_element(img.data.begin(), img.data.end());
    const GrayImage out = denoise(img, 1.7);
    for (double v : out.data) {
        REQUIRE(v >= *lo);
        REQUIRE(v <= *hi);
    }
}
