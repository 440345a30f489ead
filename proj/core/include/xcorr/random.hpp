// SPDX-License-Identifier: Apache-2.0
//
// Counter-based random numbers. Every draw is a pure function of
// (seed, stream, counter), so results never depend on how work is split
// across threads. The mixer is the SplitMix64 finalizer.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace xcorr::random {

constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return mix64(mix64(mix64(seed) ^ stream) ^ counter);
}

// Uniform on [0, 1) with 53 random bits.
constexpr double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return static_cast<double>(hash(seed, stream, counter) >> 11) * 0x1.0p-53;
}

// Two independent N(0, 1) draws via Box-Muller from counters 2n and 2n + 1.
inline std::pair<double, double> normal_pair(std::uint64_t seed, std::uint64_t stream,
                                             std::uint64_t n) {
    // 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - uniform01(seed, stream, 2 * n);
    const double u2 = uniform01(seed, stream, 2 * n + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
}

// Sequential view of one stream, for call sites that just want "the next" draw.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    double uniform() { return uniform01(seed_, stream_, counter_++); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
    }
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        auto [a, b] = normal_pair(seed_, stream_ ^ 0x6e6f726dULL, normals_++);
        spare_ = b;
        have_spare_ = true;
        return a;
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    std::uint64_t normals_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace xcorr::random
