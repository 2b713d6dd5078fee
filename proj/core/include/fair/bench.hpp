#pragma once

#include <cstdint>

namespace fair {

// In-memory forwarding pipeline: pre-generated frames, a router-scale
// FIB, and a tx ring. The baseline pass parses, looks up, and transmits;
// the marking pass adds the freshness check, nonce draw, batched MAC,
// and slot write. Workers share nothing mutable.
struct BenchConfig {
    uint64_t packets = 1000000;
    unsigned hops = 5;       // slots carried in each frame
    unsigned workers = 1;
    uint16_t pkt_size = 64;  // frame bytes, minimum-size by default
    uint32_t fib_entries = 1u << 20;
    uint64_t seed = 1;
};

struct BenchResult {
    double baseline_pps = 0;
    double fair_pps = 0;
    double overhead = 0;  // throughput lost to marking, as a fraction
    double baseline_seconds = 0;
    double fair_seconds = 0;
    // Wall time of the measurement phase across all workers. The pps
    // figures above filter scheduler noise out, which is right for the
    // marking comparison but would hide contention between workers;
    // multi-worker scaling must be judged on wall time.
    double wall_seconds = 0;
    bool aes_hw = false;
    uint64_t check = 0;  // folded outputs; keeps the work observable
};

BenchResult run_bench(const BenchConfig& cfg);

}  // namespace fair
