#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "fair/lcg.hpp"
#include "fair/tokenbucket.hpp"

namespace fair::testsupport {

// Brute-force policer: tokens advance in fixed 1 ms refill steps instead
// of continuously. With arrivals snapped to the millisecond grid the two
// models agree except on razor-edge token balances, which instance
// generators below filter out.
struct FluidOracle {
    double cir, cbs, tokens, clock = 0;

    FluidOracle(double cir_, double cbs_) : cir(cir_), cbs(cbs_), tokens(cbs_) {}

    void advance_to(double t) {
        while (clock + 1e-3 <= t + 1e-12) {
            clock += 1e-3;
            tokens = std::min(cbs, tokens + cir * 1e-3);
        }
    }

    // True = conform. `margin_ok` turns false when the decision sits too
    // close to the boundary for the two refill disciplines to agree.
    bool police(double pkt_len, double t, bool& margin_ok) {
        advance_to(t);
        if (std::abs(tokens - pkt_len) < 1e-6 * (1 + pkt_len))
            margin_ok = false;
        if (tokens >= pkt_len) {
            tokens -= pkt_len;
            return true;
        }
        return false;
    }
};

struct PolicerInstance {
    double cir = 0;
    double cbs = 0;
    std::vector<double> arrival;  // milliseconds grid, seconds
    std::vector<double> length;
};

// Instances whose every decision clears the knife-edge margin; regenerate
// until the oracle reports none of its decisions were borderline.
inline PolicerInstance random_policer_instance(Lcg64& rng) {
    for (;;) {
        PolicerInstance inst;
        inst.cir = 1000 + static_cast<double>(rng.next_below(200000));
        inst.cbs = 500 + static_cast<double>(rng.next_below(100000));
        size_t n = 5 + rng.next_below(40);
        double t = 0;
        for (size_t i = 0; i < n; ++i) {
            t += static_cast<double>(rng.next_below(400)) * 1e-3;
            inst.arrival.push_back(t);
            inst.length.push_back(
                40 + static_cast<double>(rng.next_below(1400)));
        }
        FluidOracle oracle(inst.cir, inst.cbs);
        bool margin_ok = true;
        for (size_t i = 0; i < n; ++i)
            oracle.police(inst.length[i], inst.arrival[i], margin_ok);
        if (margin_ok) return inst;
    }
}

}  // namespace fair::testsupport
