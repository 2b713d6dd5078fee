#include "fair/tokenbucket.hpp"

#include <algorithm>

namespace fair {

TokenBucket TokenBucket::make(double cir, double cbs, double start_time) {
    if (cir <= 0 || cbs <= 0)
        throw std::invalid_argument("bucket rate and depth must be positive");
    TokenBucket tb;
    tb.cir = cir;
    tb.cbs = cbs;
    tb.tokens = cbs;
    tb.last_update = start_time;
    return tb;
}

void TokenBucket::refill(double now) {
    if (now < last_update)
        throw std::invalid_argument("bucket time went backwards");
    tokens = std::min(cbs, tokens + cir * (now - last_update));
    last_update = now;
}

PoliceResult TokenBucket::police(double pkt_len, double now) {
    refill(now);
    if (tokens >= pkt_len) {
        tokens -= pkt_len;
        return PoliceResult::conform;
    }
    return PoliceResult::violate;
}

double TokenBucket::shape(double pkt_len, double now) {
    if (pkt_len > cbs)
        throw std::invalid_argument("packet larger than burst size can never send");
    refill(now);
    double release = now;
    if (tokens < pkt_len) {
        release = now + (pkt_len - tokens) / cir;
        refill(release);
    }
    tokens = std::max(0.0, tokens - pkt_len);
    return release;
}

}  // namespace fair
