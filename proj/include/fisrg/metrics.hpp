#ifndef FISRG_METRICS_HPP
#define FISRG_METRICS_HPP

#include "fisrg/errors.hpp"
#include "fisrg/image.hpp"

namespace fisrg {

/// Per-slice evaluation record.
struct EvalRecord {
    double dice = 0.0;       // in [0, 1]
    double lesion_pct = 0.0; // in [0, 100]
    double elapsed_ms = 0.0;
};

/// Dice similarity coefficient 2|X∩Y| / (|X|+|Y|). Two empty masks agree
/// perfectly by convention (1.0).
inline double dice(const BinaryMask& x, const BinaryMask& y) {
    if (!x.same_shape(y)) throw DimensionMismatch("dice: mask shapes differ");
    std::size_t nx = 0, ny = 0, ni = 0;
    for (std::size_t i = 0; i < x.bits.size(); ++i) {
        nx += x.bits[i];
        ny += y.bits[i];
        ni += x.bits[i] & y.bits[i];
    }
    if (nx + ny == 0) return 1.0;
    return 2.0 * static_cast<double>(ni) / static_cast<double>(nx + ny);
}

/// Percentage of true pixels in the mask.
inline double lesion_percentage(const BinaryMask& gt) {
    if (gt.bits.empty()) return 0.0;
    return 100.0 * static_cast<double>(gt.count()) / static_cast<double>(gt.bits.size());
}

} // namespace fisrg

#endif // FISRG_METRICS_HPP
