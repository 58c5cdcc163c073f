#ifndef FISRG_PREPROCESS_HPP
#define FISRG_PREPROCESS_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "fisrg/errors.hpp"
#include "fisrg/image.hpp"

namespace fisrg {

/// Discrete 2D Gaussian kernel, truncated at 3 sigma and normalized to unit
/// sum. Symmetric under x<->-x, y<->-y and x<->y.
struct Kernel2D {
    int radius = 0;
    std::vector<double> weights; // (2*radius+1)^2, row-major

    int side() const { return 2 * radius + 1; }
    /// Weight at offset (dx, dy), each in [-radius, radius].
    double at(int dx, int dy) const {
        return weights[static_cast<std::size_t>(dy + radius) * side() + (dx + radius)];
    }
};

namespace detail {

/// Normalized 1D Gaussian taps for offsets -radius..radius.
inline std::vector<double> gaussian_taps_1d(double sigma, int radius) {
    std::vector<double> taps(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double w = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
        taps[i + radius] = w;
        sum += w;
    }
    for (double& w : taps) w /= sum;
    return taps;
}

/// Half-sample symmetric reflection: ... c b a | a b c ... | c b a ...
/// Handles kernels wider than the image.
inline int reflect_index(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * n;
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - 1 - i;
}

} // namespace detail

inline int gaussian_radius(double sigma) { return static_cast<int>(std::ceil(3.0 * sigma)); }

/// Build the truncated, normalized 2D Gaussian kernel for the given sigma.
inline Kernel2D gaussian_kernel(double sigma) {
    if (!(sigma > 0.0)) throw NonPositiveSigma("gaussian_kernel: sigma must be > 0");
    Kernel2D k;
    k.radius = gaussian_radius(sigma);
    const auto taps = detail::gaussian_taps_1d(sigma, k.radius);
    k.weights.resize(static_cast<std::size_t>(k.side()) * k.side());
    // Outer product of the normalized 1D taps; identical to normalizing
    // exp(-(i^2+j^2)/(2 sigma^2)) directly.
    for (int dy = -k.radius; dy <= k.radius; ++dy)
        for (int dx = -k.radius; dx <= k.radius; ++dx)
            k.weights[static_cast<std::size_t>(dy + k.radius) * k.side() + (dx + k.radius)] =
                taps[dy + k.radius] * taps[dx + k.radius];
    return k;
}

/// Gaussian denoising: separable convolution with reflect padding.
/// sigma == 0 returns the input unchanged; the output never leaves the
/// input's [min, max] range.
inline GrayImage denoise(const GrayImage& img, double sigma) {
    if (sigma < 0.0) throw NonPositiveSigma("denoise: sigma must be >= 0");
    if (sigma == 0.0 || img.data.empty()) return img;

    const int radius = gaussian_radius(sigma);
    const auto taps = detail::gaussian_taps_1d(sigma, radius);
    const int w = img.width, h = img.height;

    GrayImage tmp(w, h), out(w, h);
    for (int y = 0; y < h; ++y) {
        const double* row = img.data.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += taps[i + radius] * row[detail::reflect_index(x + i, w)];
            tmp.at(x, y) = acc;
        }
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += taps[i + radius] * tmp.at(x, detail::reflect_index(y + i, h));
            out.at(x, y) = acc;
        }
    }

    // Convex combination of inputs; pin down float round-off at the edges.
    const auto [lo_it, hi_it] = std::minmax_element(img.data.begin(), img.data.end());
    const double lo = *lo_it, hi = *hi_it;
    for (double& v : out.data) v = std::clamp(v, lo, hi);
    return out;
}

} // namespace fisrg

#endif // FISRG_PREPROCESS_HPP
