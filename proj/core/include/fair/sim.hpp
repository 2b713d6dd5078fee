#pragma once

#include "fair/protest.hpp"
#include "fair/report.hpp"
#include "fair/sbit.hpp"

namespace fair {

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Role { source, transit_coop, transit_noncoop, destination };
const char* role_name(Role r);

enum class AdversaryKind {
    none,
    flood,
    corrupt_upstream_macs,
    replay,
    inject,
    timestamp_shift,
    frame_duplicate_evidence,
};
const char* adversary_name(AdversaryKind k);

struct AdversaryBehavior {
    AdversaryKind kind = AdversaryKind::none;
    double rate_multiplier = 2.0;  // flood / inject offered rate as x CIR
    int replay_factor = 2;
    bool rerandomize_own_nonce = false;
    double window_start = 0.0;
    double window_end = 1e18;
};

struct AsNode {
    uint32_t asn = 0;
    Role role = Role::transit_coop;
    double clock_offset = 0.0;  // |offset| <= 0.5
    AdversaryBehavior adversary;
};

// A line topology: source, transits in path order, destination. Clock
// offsets stay within half a second and the whole path within one second
// of latency, the regime in which the 3-second freshness margin never
// drops honest traffic.
struct Topology {
    std::vector<AsNode> nodes;
    std::vector<double> link_latency;  // nodes.size() - 1 entries

    void validate() const;
    size_t coop_transit_count() const;
    std::vector<uint32_t> coop_transit_asns() const;
};

struct PolicyParams {
    double cir = 125000;        // bytes per second
    double cbs = 125000;        // bytes
    double duration = 5;        // seconds of offered traffic
    double expiration = 86400;  // policy lifetime from setup
};

struct TrafficModel {
    double rate_fraction = 0.9;  // honest offered rate as x CIR
    uint32_t packets = 0;        // 0: derive from duration and rate
    uint16_t payload_len = 400;  // application payload bytes
};

struct ScenarioConfig {
    std::string name = "scenario";
    Topology topology;
    PolicyParams policy;
    TrafficModel traffic;
    uint64_t seed = 1;
    FairMode mode = FairMode::ipv6_eh;
    double evidence_start = -1;  // negative: unbounded
    double evidence_end = -1;
    double slack = 0;            // evidence-policer slack seconds
    std::string config_digest;   // set by the file loader

    void validate() const;
};

struct HopCounters {
    uint64_t seen = 0;
    uint64_t forwarded = 0;
    uint64_t clock_drops = 0;
    uint64_t malformed_drops = 0;
};

struct ScenarioResult {
    std::vector<HopCounters> hops;
    DestCounters dest;
    HeaderStore store;
    Digest32 channel_id{};
    PolicyPacket policy;
    uint64_t packets_sent = 0;
    uint64_t injected_sent = 0;
    uint64_t replay_copies = 0;
    bool protest_triggered = false;
    EvidenceBundle bundle;
    std::vector<ComplaintResponse> responses;
    std::vector<DuplicateGroup> replay_groups;
    Verdict verdict;
    Report report;
};

// Wall-clock origin of every scenario; simulated instants are offsets
// from here. Its low 16 bits sit far from the wrap boundary so a
// scenario never straddles a timestamp wrap unless a test builds one.
inline constexpr double kSimEpoch = 1.6e9;

// Phases in order: policy setup, transmission over a deterministic event
// queue with per-AS local clocks, then protest when the live policer saw
// violations (or a framing destination complains regardless).
ScenarioResult run_scenario(const ScenarioConfig& cfg);

}  // namespace fair
