#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace invreg {

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of substream `index` under `master`:
///   splitmix64(splitmix64(master) ^ (index * 0xD1B54A32D192ED03)).
/// Depends only on the pair, never on scheduling, so replications can run on
/// any number of workers.
constexpr std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(master) ^ (index * 0xD1B54A32D192ED03ULL));
}

/**
 * Standard normal variates from a seeded std::mt19937_64 stream.
 *
 * Each pair of 64-bit words (w1, w2) is mapped to uniforms
 *   u1 = ((w1 >> 11) + 1) * 2^-53  in (0, 1]
 *   u2 = (w2 >> 11) * 2^-53        in [0, 1)
 * and the Box-Muller transform yields
 *   z1 = sqrt(-2 ln u1) cos(2 pi u2),  z2 = sqrt(-2 ln u1) sin(2 pi u2),
 * returned in that order. Unlike std::normal_distribution the output is
 * identical on every standard library.
 */
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

    double operator()() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
        const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Fair sign: +1 or -1 from the top bit of the next word.
    double sign() { return (engine_() >> 63) != 0 ? 1.0 : -1.0; }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace invreg
