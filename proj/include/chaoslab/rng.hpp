#pragma once

#include <cstdint>
#include <random>

namespace chaoslab {

// Seeded generator used everywhere randomness is needed. std::mt19937_64 has
// a standard-pinned output sequence, and the uniform mapping below is spelled
// out explicitly instead of going through std::uniform_real_distribution
// (whose output is implementation-defined), so identical seeds reproduce
// identical doubles on any conforming platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform in [0, 1): top 53 bits of the raw draw.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

}  // namespace chaoslab
