#pragma once

#include <stdexcept>

namespace fair {

enum class PoliceResult { conform, violate };

// Fluid-refill token bucket. The bucket starts full; refill is continuous
// at cir bytes per second, capped at cbs. As a policer a violating packet
// leaves the bucket untouched; as a shaper the packet waits for tokens.
struct TokenBucket {
    double cir = 0;     // bytes per second
    double cbs = 0;     // bytes
    double tokens = 0;  // current fill, 0 <= tokens <= cbs
    double last_update = 0;

    static TokenBucket make(double cir, double cbs, double start_time);

    double tc() const { return cbs / cir; }

    void refill(double now);
    PoliceResult police(double pkt_len, double now);
    double shape(double pkt_len, double now);  // returns release time
};

}  // namespace fair
