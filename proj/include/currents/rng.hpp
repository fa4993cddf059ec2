// Copyright 2026 the currents authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "currents/common.hpp"

namespace currents {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
// Streams are keyed by (seed, component, path index), so any worker
// assignment reproduces the same draws.
namespace philox {

inline constexpr uint32_t kW32A = 0x9E3779B9u;
inline constexpr uint32_t kW32B = 0xBB67AE85u;
inline constexpr uint32_t kM4x32A = 0xD2511F53u;
inline constexpr uint32_t kM4x32B = 0xCD9E8D57u;

inline void mul_hi_lo(uint32_t a, uint32_t b, uint32_t& lo, uint32_t& hi) {
    const uint64_t p = static_cast<uint64_t>(a) * b;
    lo = static_cast<uint32_t>(p);
    hi = static_cast<uint32_t>(p >> 32);
}

inline std::array<uint32_t, 4> block(std::array<uint32_t, 4> ctr, std::array<uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        uint32_t lo0, hi0, lo1, hi1;
        mul_hi_lo(kM4x32A, ctr[0], lo0, hi0);
        mul_hi_lo(kM4x32B, ctr[2], lo1, hi1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kW32A;
        key[1] += kW32B;
    }
    return ctr;
}

}  // namespace philox

/// Stream id packing one component index and one path index.
inline uint64_t stream_id(int component, uint64_t path) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(component)) << 48) |
           (path & 0xFFFFFFFFFFFFull);
}

// Standard normal stream: one Philox block yields one Box-Muller pair.
class NormalStream {
  public:
    NormalStream(uint64_t seed, int component, uint64_t path)
        : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)},
          stream_(stream_id(component, path)) {}

    double next() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const auto out = philox::block(
            {static_cast<uint32_t>(block_), static_cast<uint32_t>(block_ >> 32),
             static_cast<uint32_t>(stream_), static_cast<uint32_t>(stream_ >> 32)},
            key_);
        ++block_;
        const double u1 = to_unit(out[0], out[1]);
        const double u2 = to_unit(out[2], out[3]);
        const double r = std::sqrt(-2.0 * std::log(u1));
        cached_ = r * std::sin(2.0 * kPi * u2);
        have_cached_ = true;
        return r * std::cos(2.0 * kPi * u2);
    }

  private:
    static double to_unit(uint32_t a, uint32_t b) {
        const uint64_t v = (static_cast<uint64_t>(a) << 32) | b;
        return (static_cast<double>(v >> 11) + 0.5) * 0x1.0p-53;  // in (0,1)
    }

    std::array<uint32_t, 2> key_;
    uint64_t stream_;
    uint64_t block_ = 0;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace currents
