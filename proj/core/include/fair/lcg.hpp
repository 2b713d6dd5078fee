#pragma once

#include <cstdint>

namespace fair {

// 64-bit linear congruential generator (Knuth MMIX constants).
// One instance per simulated node keeps runs reproducible; outputs are
// taken from the high bits, which carry the full period.
class Lcg64 {
public:
    explicit Lcg64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
        return state_;
    }

    // Top `bits` bits of the next state, bits in [1, 32].
    uint32_t next_bits(unsigned bits) {
        return static_cast<uint32_t>(next() >> (64 - bits));
    }

    uint8_t next_nibble() { return static_cast<uint8_t>(next_bits(4)); }

    // Uniform in [0, n) via the multiply-shift reduction.
    uint64_t next_below(uint64_t n) {
        return static_cast<uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    // Uniform in [0, 1) with 53 bits of precision.
    double next_unit() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    uint64_t state() const { return state_; }

private:
    uint64_t state_;
};

}  // namespace fair
