// Copyright (c) 2026 the tilesim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TILESIM_RNG_HPP
#define TILESIM_RNG_HPP

#include <cstdint>
#include <random>

namespace tilesim {

// Deterministic RNG used everywhere randomness is needed (input frames,
// random model weights, test workloads). mt19937_64 raw output is fully
// specified by the standard; the std distributions are not, so the
// mappings below are spelled out by hand to keep runs reproducible
// across compilers.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, bound). bound == 0 returns 0.
    std::uint64_t next_below(std::uint64_t bound) {
        if (bound == 0) return 0;
        // Rejection sampling to avoid modulo bias.
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t v = engine_();
        while (v >= limit) v = engine_();
        return v % bound;
    }

    int next_int(int lo, int hi) {  // inclusive range
        return lo + static_cast<int>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // Uniform in [0, 1) with 53 bits of precision.
    double next_real() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double next_real(double lo, double hi) { return lo + (hi - lo) * next_real(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace tilesim

#endif
