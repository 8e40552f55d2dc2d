// Copyright (c) 2026 the tilesim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TILESIM_FIXED_POINT_HPP
#define TILESIM_FIXED_POINT_HPP

#include <cmath>
#include <cstdint>
#include <limits>

namespace tilesim {

// 16-bit two's-complement fixed point, 6 integer bits (sign included) and
// 10 fractional bits: range [-32, 32), resolution 2^-10. All arithmetic
// saturates on overflow; conversions round to nearest, ties to even.
class Fx16 {
public:
    static constexpr int kFracBits = 10;
    static constexpr int kIntBits = 6;
    static constexpr std::int16_t kRawMax = std::numeric_limits<std::int16_t>::max();
    static constexpr std::int16_t kRawMin = std::numeric_limits<std::int16_t>::min();

    constexpr Fx16() = default;

    static constexpr Fx16 from_raw(std::int16_t raw) {
        Fx16 v;
        v.raw_ = raw;
        return v;
    }

    static Fx16 from_double(double x) {
        if (std::isnan(x)) return from_raw(0);
        double scaled = x * (1 << kFracBits);
        if (scaled >= static_cast<double>(kRawMax)) return from_raw(kRawMax);
        if (scaled <= static_cast<double>(kRawMin)) return from_raw(kRawMin);
        // Round half to even.
        double r = std::nearbyint(scaled);
        if (std::fabs(scaled - std::trunc(scaled)) == 0.5) {
            double lo = std::floor(scaled);
            r = (static_cast<std::int64_t>(lo) % 2 == 0) ? lo : lo + 1.0;
        }
        return from_raw(static_cast<std::int16_t>(r));
    }

    constexpr std::int16_t raw() const { return raw_; }
    double to_double() const { return static_cast<double>(raw_) / (1 << kFracBits); }

    friend Fx16 operator+(Fx16 a, Fx16 b) {
        return from_raw(saturate(static_cast<std::int32_t>(a.raw_) + b.raw_));
    }
    friend Fx16 operator-(Fx16 a, Fx16 b) {
        return from_raw(saturate(static_cast<std::int32_t>(a.raw_) - b.raw_));
    }
    friend Fx16 operator*(Fx16 a, Fx16 b) {
        std::int64_t prod = static_cast<std::int64_t>(a.raw_) * b.raw_;  // Q20
        return from_raw(saturate(round_shift(prod, kFracBits)));
    }
    friend bool operator==(Fx16 a, Fx16 b) { return a.raw_ == b.raw_; }
    friend bool operator!=(Fx16 a, Fx16 b) { return a.raw_ != b.raw_; }
    friend bool operator<(Fx16 a, Fx16 b) { return a.raw_ < b.raw_; }

    Fx16 relu() const { return raw_ < 0 ? from_raw(0) : *this; }

    // Round a Qn value down to Q0 of the shifted scale, nearest-even.
    static std::int64_t round_shift(std::int64_t v, int bits) {
        if (bits == 0) return v;
        const std::int64_t half = std::int64_t{1} << (bits - 1);
        const std::int64_t mask = (std::int64_t{1} << bits) - 1;
        std::int64_t frac = v & mask;
        std::int64_t base = v >> bits;
        if (frac > half) return base + 1;
        if (frac < half) return base;
        return (base % 2 == 0) ? base : base + 1;  // tie: to even
    }

    static std::int16_t saturate(std::int64_t v) {
        if (v > kRawMax) return kRawMax;
        if (v < kRawMin) return kRawMin;
        return static_cast<std::int16_t>(v);
    }

private:
    std::int16_t raw_ = 0;
};

// Dense-layer accumulation happens in Q20 (product scale) and is rounded
// once at the end; this is what makes the partitioned and monolithic MLP
// bit-identical.
inline Fx16 fx16_mac_finalize(std::int64_t acc_q20, Fx16 bias) {
    acc_q20 += static_cast<std::int64_t>(bias.raw()) << Fx16::kFracBits;
    return Fx16::from_raw(Fx16::saturate(Fx16::round_shift(acc_q20, Fx16::kFracBits)));
}

}  // namespace tilesim

#endif
