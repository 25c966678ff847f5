#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace formslab {

// SplitMix64 finaliser: a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Derive an independent 64-bit key from (seed, index).
constexpr std::uint64_t derive_key(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed ^ mix64(index ^ 0xD6E8FEB86659FD93ULL));
}

/// Counter-based generator: the stream for a given (seed, index) pair is a
/// pure function of that pair, so results never depend on how work is
/// scheduled across threads.
class CounterRng {
public:
    constexpr CounterRng(std::uint64_t seed, std::uint64_t index) : key_(derive_key(seed, index)) {}

    constexpr std::uint64_t next_u64() { return mix64(key_ + 0x9E3779B97F4A7C15ULL * ++counter_); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; the second variate is discarded so that
    // each call consumes a fixed number of counter steps.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace formslab
