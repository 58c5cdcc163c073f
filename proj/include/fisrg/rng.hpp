#ifndef FISRG_RNG_HPP
#define FISRG_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace fisrg {

/// SplitMix64 finalizer. Used to derive decorrelated child seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Child seed for stream `index` of a parent seed (per-slice, per-attempt, ...).
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
    return splitmix64(parent ^ splitmix64(index + 1));
}

/// Deterministic RNG used throughout the pipeline.
///
/// Wraps std::mt19937_64 (fully specified by the standard) and hand-rolls the
/// variate transforms, so identical seeds give identical streams on every
/// build. std::*_distribution is avoided on purpose: its output is
/// implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform index in [0, n). n must be > 0.
    std::size_t uniform_index(std::size_t n) { return next_u64() % n; }

    /// Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller (no cached spare; stream position is
    /// a fixed two-draws-per-call function of the seed).
    double normal() {
        const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; // (0,1]
        const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;         // [0,1)
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

private:
    std::mt19937_64 engine_;
};

} // namespace fisrg

#endif // FISRG_RNG_HPP
