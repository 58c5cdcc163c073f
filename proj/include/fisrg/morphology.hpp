#ifndef FISRG_MORPHOLOGY_HPP
#define FISRG_MORPHOLOGY_HPP

#include <vector>

#include "fisrg/errors.hpp"
#include "fisrg/image.hpp"

namespace fisrg {

enum class SeShape { Square, Disk };

/// Flat structuring element anchored at its center; size is the odd side
/// length (square) or diameter (disk).
struct StructuringElement {
    SeShape shape = SeShape::Square;
    int size = 3;

    std::vector<PixelCoord> offsets() const {
        if (size < 1 || size % 2 == 0)
            throw Error("StructuringElement: size must be an odd integer >= 1");
        const int r = (size - 1) / 2;
        std::vector<PixelCoord> out;
        for (int dy = -r; dy <= r; ++dy)
            for (int dx = -r; dx <= r; ++dx)
                if (shape == SeShape::Square || dx * dx + dy * dy <= r * r)
                    out.push_back({dx, dy});
        return out;
    }
};

/// Minkowski dilation; pixels outside the image count as false.
inline BinaryMask dilate(const BinaryMask& m, const StructuringElement& se) {
    const auto offs = se.offsets();
    BinaryMask out(m.width, m.height);
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            for (const PixelCoord& o : offs) {
                const int sx = x - o.x, sy = y - o.y;
                if (m.in_bounds(sx, sy) && m.at(sx, sy)) {
                    out.set(x, y, true);
                    break;
                }
            }
        }
    }
    return out;
}

/// Minkowski erosion; the out-of-bounds neighborhood counts as false, so
/// true regions touching the border erode away there.
inline BinaryMask erode(const BinaryMask& m, const StructuringElement& se) {
    const auto offs = se.offsets();
    BinaryMask out(m.width, m.height);
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            bool all = true;
            for (const PixelCoord& o : offs) {
                const int sx = x + o.x, sy = y + o.y;
                if (!m.in_bounds(sx, sy) || !m.at(sx, sy)) {
                    all = false;
                    break;
                }
            }
            out.set(x, y, all);
        }
    }
    return out;
}

/// Postprocessing closing variant: dilation with the larger kernel followed
/// by erosion with the smaller one.
inline BinaryMask postprocess(const BinaryMask& m, int dilate_size, int erode_size,
                              SeShape shape = SeShape::Square) {
    if (dilate_size < erode_size)
        throw KernelOrderViolation("postprocess: dilate_size must be >= erode_size");
    return erode(dilate(m, {shape, dilate_size}), {shape, erode_size});
}

} // namespace fisrg

#endif // FISRG_MORPHOLOGY_HPP
