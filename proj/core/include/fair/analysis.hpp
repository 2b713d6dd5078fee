#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fair {

// Mixed v4/v6 traffic on one link, summarized by per-version mean packet
// size and share. The share column can be read as a packet or a byte
// fraction; the overhead calculator reports both conventions.
struct TraceModel {
    std::string name;
    double rate_gbps = 0;
    double v4_size = 0;   // mean wire bytes per v4 packet
    double v4_share = 0;  // fraction in [0, 1]
    double v6_size = 0;
    double duration = 3600;  // seconds summarized
    unsigned hops = 5;       // cooperating transits on the path

    double v6_share() const { return 1.0 - v4_share; }
};

// The three backbone-link models used throughout the evaluation.
std::vector<TraceModel> backbone_traces();

// Added marking bytes per packet: a compact shim behind the 20-byte v4
// header; an extension header inside v6.
double added_bytes_v4(unsigned hops);
double added_bytes_v6(unsigned hops);

struct OverheadResult {
    double v4_overhead = 0;  // added/mean for v4 traffic alone
    double v6_overhead = 0;
    double packet_weighted = 0;  // shares read as packet fractions
    double byte_weighted = 0;    // shares read as byte fractions
};

OverheadResult overhead(const TraceModel& m);

// Header bytes the destination stores per packet: the network header
// plus the marking bytes.
double stored_bytes_v4(unsigned hops);
double stored_bytes_v6(unsigned hops);

// Destination header-store growth over the model's duration, in bytes.
double storage_dest_bytes(const TraceModel& m);

// Channel-key table: one 16-byte key per active channel.
uint64_t storage_channel_bytes(uint64_t channels);

// Marking-key history a transit retains across the complaint margin.
uint64_t storage_rotation_bytes(double rotation_seconds,
                                unsigned keys_per_epoch,
                                double retention_seconds);

// Offered rate at which a bounded sequence space must repeat a
// (timestamp, seqno) pair within the freshness window, in Gbps.
double replay_capacity_gbps(double mean_pkt_bytes, double window_seconds,
                            double seqno_space = double(1u << 24));

}  // namespace fair
