#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace slcs2 {

// Deterministic RNG used everywhere. Distribution helpers are hand-rolled on
// top of mt19937_64 so that streams are bit-stable across platforms and
// standard libraries (std::*_distribution output is implementation-defined).
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    // uniform integer in [lo, hi], inclusive
    int uniform_int(int lo, int hi) {
        if (hi <= lo) return lo;
        uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(next_u64() % span);
    }

    uint32_t uniform_digit(uint32_t maxInclusive) {
        return static_cast<uint32_t>(next_u64() % (static_cast<uint64_t>(maxInclusive) + 1));
    }

    // [0, 1)
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Box-Muller, no cached spare: one call, two raw draws, stateless
    double normal(double mean, double sigma) {
        double u1 = 0.0;
        do { u1 = uniform01(); } while (u1 <= 0.0);
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        return mean + sigma * r * std::cos(6.283185307179586476925287 * u2);
    }

    // splitmix64-based stream derivation; derive(seed, tag) gives independent
    // child streams that are stable across runs
    static uint64_t derive(uint64_t seed, uint64_t tag) {
        uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 eng_;
};

} // namespace slcs2
