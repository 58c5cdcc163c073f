#ifndef FISRG_IMAGE_HPP
#define FISRG_IMAGE_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fisrg/errors.hpp"

namespace fisrg {

struct PixelCoord {
    int x = 0;
    int y = 0;

    friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

/// 2D grayscale raster, row-major, intensities in [0,1].
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> data; // data[y * width + x]

    GrayImage() = default;
    GrayImage(int w, int h, double fill = 0.0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

    bool in_bounds(int x, int y) const {
        return x >= 0 && y >= 0 && x < width && y < height;
    }
    double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    std::size_t size() const { return data.size(); }
};

/// 2D boolean raster, row-major. Used for ROIs, ground truth, and predictions.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits; // 0 or 1, bits[y * width + x]

    BinaryMask() = default;
    BinaryMask(int w, int h, bool fill = false)
        : width(w), height(h), bits(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {}

    bool in_bounds(int x, int y) const {
        return x >= 0 && y >= 0 && x < width && y < height;
    }
    bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }
    std::size_t size() const { return bits.size(); }

    /// Number of true pixels.
    std::size_t count() const {
        std::size_t n = 0;
        for (auto b : bits) n += b;
        return n;
    }

    bool same_shape(const BinaryMask& o) const { return width == o.width && height == o.height; }

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;
};

/// Pixelwise OR of two same-shape masks.
inline BinaryMask mask_union(const BinaryMask& a, const BinaryMask& b) {
    if (!a.same_shape(b)) throw DimensionMismatch("mask_union: shapes differ");
    BinaryMask out(a.width, a.height);
    for (std::size_t i = 0; i < out.bits.size(); ++i) out.bits[i] = a.bits[i] | b.bits[i];
    return out;
}

} // namespace fisrg

#endif // FISRG_IMAGE_HPP
