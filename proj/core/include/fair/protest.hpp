#pragma once

#include "fair/dataplane.hpp"

namespace fair {

struct StaleEvidenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The destination's proof of misbehavior: the signed policy plus the
// stored headers for the contested window, sorted deterministically.
struct EvidenceBundle {
    PolicyPacket policy;
    std::vector<PacketRecord> records;
    double complaint_time = 0;
};

EvidenceBundle assemble_evidence(const HeaderStore& store,
                                 const Digest32& channel_id,
                                 const PolicyPacket& policy,
                                 double window_start, double window_end,
                                 double complaint_time);

// Canonical evidence order: embedded (timestamp, seqno), then nonce
// bytes, then arrival. Anything that mutates a bundle's record list must
// restore this order before the records are policed.
void sort_evidence(std::vector<PacketRecord>& records);

// Marking keys an AS retains, newest epoch last; epoch selection allows
// 3 seconds of boundary tolerance for clock skew.
struct KeyEpoch {
    double start = 0;
    SymKey key{};
};

struct ComplaintResponse {
    uint32_t asn = 0;
    bool admit = false;
    uint32_t mac_failures = 0;
    uint32_t mac_checked = 0;
    uint32_t tb_violations = 0;
    ByteVec sig;

    double failure_fraction() const {
        return mac_checked == 0
                   ? 0.0
                   : static_cast<double>(mac_failures) / mac_checked;
    }
};

ByteVec response_sign_input(const ComplaintResponse& r);
bool verify_response(const ComplaintResponse& r, const KeyRegistry& registry);

// The examining AS's three steps: check both policy signatures, recheck
// every record's own 4-bit MAC, then run the policer over the MAC-valid
// records sorted by embedded (timestamp, seqno). Admit iff the policer
// found at least one violation.
ComplaintResponse examine_complaint(uint32_t asn,
                                    const std::vector<KeyEpoch>& marking_keys,
                                    const Key32& sig_priv,
                                    const EvidenceBundle& bundle,
                                    const KeyRegistry& registry,
                                    double slack = 0.0);

// Evidence-time policing at one-second embedded-timestamp granularity.
// `slack` widens the initial burst allowance by slack seconds of rate,
// admitting the tolerated one-second timestamp shift when requested.
struct EvidencePolicing {
    uint32_t violations = 0;
    std::vector<size_t> violating;  // indices into the input order
};

EvidencePolicing police_evidence(const std::vector<PacketRecord>& sorted,
                                 double cir, double cbs, double slack = 0.0);

struct DuplicateGroup {
    uint16_t ts = 0;
    uint32_t seqno = 0;
    std::vector<size_t> indices;  // into bundle.records
};

// Groups of records sharing (timestamp, seqno); any group of two or more
// proves duplication somewhere on the path.
std::vector<DuplicateGroup> detect_replay(const EvidenceBundle& bundle);

// Path entities are indexed 0 = source, 1..n = cooperating transits in
// path order, n + 1 = destination.
struct Interval {
    int left = -1;
    int right = -1;
    friend bool operator==(const Interval&, const Interval&) = default;
};

// Localization from one duplicate group: the length of the slot prefix
// whose nonces repeat across all members bounds the duplication point.
// Later slots that repeat by chance never extend the prefix.
Interval localize_adversary(const EvidenceBundle& bundle,
                            const DuplicateGroup& group, size_t transit_count);

// Narrowest (most upstream) interval over all groups; a single group
// free of chance collisions pins the boundary.
Interval localize_overall(const EvidenceBundle& bundle,
                          const std::vector<DuplicateGroup>& groups,
                          size_t transit_count);

enum class Outcome {
    none,
    source_guilty,
    enroute_adversary,
    replay_detected,
    framing_suspected,
    rejected,
};

const char* outcome_name(Outcome o);

struct Verdict {
    Outcome outcome = Outcome::none;
    Interval interval;
    std::vector<uint32_t> admitting;
    uint32_t source_asn = 0;
};

// Round two: classify the signed responses against the evidence. theta
// is the MAC-failure fraction beyond which upstream tampering is assumed
// (well above the 2^-4 accidental pass rate's complement).
Verdict adjudicate(const std::vector<ComplaintResponse>& responses,
                   const EvidenceBundle& bundle, const KeyRegistry& registry,
                   double theta = 0.125);

}  // namespace fair
