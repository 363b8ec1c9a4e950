#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace fixpoint {

/// Seeded 64-bit Mersenne Twister with platform-independent derived draws.
///
/// std::uniform_real_distribution is implementation-defined, so the
/// conversions here are written out to keep reports identical across
/// standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    /// Uniform index in [0, n). Uses rejection to avoid modulo bias.
    std::size_t index(std::size_t n) {
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t r = engine_();
        while (r >= limit) r = engine_();
        return static_cast<std::size_t>(r % bound);
    }

    bool chance(double p) { return unit() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace fixpoint
