#include "fair/analysis.hpp"

#include <cmath>

namespace fair {

std::vector<TraceModel> backbone_traces() {
    std::vector<TraceModel> traces(3);
    traces[0] = {"trace1", 1.63, 747, 0.9995, 130, 3600, 5};
    traces[1] = {"trace2", 3.72, 920, 0.9996, 342, 3600, 5};
    traces[2] = {"trace3", 3.57, 736, 0.9988, 155, 3600, 5};
    return traces;
}

double added_bytes_v4(unsigned hops) { return 7.0 + hops; }
double added_bytes_v6(unsigned hops) { return 9.0 + hops; }

OverheadResult overhead(const TraceModel& m) {
    const double a4 = added_bytes_v4(m.hops);
    const double a6 = added_bytes_v6(m.hops);
    const double f = m.v4_share;
    OverheadResult r;
    r.v4_overhead = a4 / m.v4_size;
    r.v6_overhead = a6 / m.v6_size;
    r.packet_weighted = (f * a4 + (1 - f) * a6) /
                        (f * m.v4_size + (1 - f) * m.v6_size);
    r.byte_weighted = f * r.v4_overhead + (1 - f) * r.v6_overhead;
    return r;
}

double stored_bytes_v4(unsigned hops) { return 20.0 + added_bytes_v4(hops); }
double stored_bytes_v6(unsigned hops) { return 40.0 + added_bytes_v6(hops); }

double storage_dest_bytes(const TraceModel& m) {
    const double bytes_per_sec = m.rate_gbps * 1e9 / 8.0;
    const double f = m.v4_share;
    const double mean_pkt = f * m.v4_size + (1 - f) * m.v6_size;
    const double pkts_per_sec = bytes_per_sec / mean_pkt;
    const double mean_stored =
        f * stored_bytes_v4(m.hops) + (1 - f) * stored_bytes_v6(m.hops);
    return pkts_per_sec * mean_stored * m.duration;
}

uint64_t storage_channel_bytes(uint64_t channels) { return channels * 16; }

uint64_t storage_rotation_bytes(double rotation_seconds,
                                unsigned keys_per_epoch,
                                double retention_seconds) {
    const double epochs = std::ceil(retention_seconds / rotation_seconds);
    return static_cast<uint64_t>(epochs) * keys_per_epoch * 16;
}

double replay_capacity_gbps(double mean_pkt_bytes, double window_seconds,
                            double seqno_space) {
    return seqno_space * mean_pkt_bytes * 8.0 / window_seconds / 1e9;
}

}  // namespace fair
