#include "fair/protest.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace fair {
namespace {

ByteVec nonce_bytes(const PacketRecord& r) {
    ByteVec v;
    v.reserve(r.fair.slots.size());
    for (const AsSlot& s : r.fair.slots) v.push_back(s.nonce);
    return v;
}

bool record_order(const PacketRecord& a, const PacketRecord& b) {
    if (a.fair.src_timestamp != b.fair.src_timestamp)
        return a.fair.src_timestamp < b.fair.src_timestamp;
    if (a.fair.seqno != b.fair.seqno) return a.fair.seqno < b.fair.seqno;
    ByteVec na = nonce_bytes(a), nb = nonce_bytes(b);
    if (na != nb) return na < nb;
    return a.arrival_time < b.arrival_time;
}

// Slot index of `asn` on the declared path; the path lists cooperating
// transits in marking order.
size_t path_position(const PolicyPacket& policy, uint32_t asn) {
    const auto& path = policy.source.path;
    auto it = std::find(path.begin(), path.end(), asn);
    if (it == path.end())
        throw PolicyError("AS " + std::to_string(asn) +
                          " is not on the declared path");
    return static_cast<size_t>(it - path.begin());
}

// Keys plausibly in force at time t: the covering epoch plus neighbours
// within 3 seconds of the boundary.
std::vector<const SymKey*> keys_for_time(const std::vector<KeyEpoch>& epochs,
                                         double t) {
    std::vector<const SymKey*> keys;
    for (size_t i = 0; i < epochs.size(); ++i) {
        double start = epochs[i].start;
        double end = i + 1 < epochs.size() ? epochs[i + 1].start : 1e300;
        if (t >= start - 3.0 && t < end + 3.0) keys.push_back(&epochs[i].key);
    }
    return keys;
}

}  // namespace

EvidenceBundle assemble_evidence(const HeaderStore& store,
                                 const Digest32& channel_id,
                                 const PolicyPacket& policy,
                                 double window_start, double window_end,
                                 double complaint_time) {
    const std::vector<PacketRecord>* all = store.find(channel_id);
    EvidenceBundle bundle;
    bundle.policy = policy;
    bundle.complaint_time = complaint_time;
    double newest = -1e300;
    if (all) {
        for (const PacketRecord& r : *all) {
            if (r.arrival_time < window_start || r.arrival_time > window_end)
                continue;
            newest = std::max(newest, r.arrival_time);
            bundle.records.push_back(r);
        }
    }
    if (bundle.records.empty())
        throw std::invalid_argument("no records in the contested window");
    if (complaint_time - newest > HeaderStore::kRetentionSeconds)
        throw StaleEvidenceError("evidence older than the retention margin");
    sort_evidence(bundle.records);
    return bundle;
}

void sort_evidence(std::vector<PacketRecord>& records) {
    std::sort(records.begin(), records.end(), record_order);
}

ByteVec response_sign_input(const ComplaintResponse& r) {
    ByteVec out;
    put_u32(out, r.asn);
    put_u8(out, r.admit ? 1 : 0);
    put_u32(out, r.mac_failures);
    put_u32(out, r.mac_checked);
    put_u32(out, r.tb_violations);
    return out;
}

bool verify_response(const ComplaintResponse& r, const KeyRegistry& registry) {
    return registry.contains(r.asn) &&
           verify(registry.at(r.asn).sig.pub, response_sign_input(r), r.sig);
}

EvidencePolicing police_evidence(const std::vector<PacketRecord>& sorted,
                                 double cir, double cbs, double slack) {
    EvidencePolicing result;
    if (sorted.empty()) return result;
    double t0 = sorted.front().fair.src_timestamp;
    TokenBucket tb = TokenBucket::make(cir, cbs + slack * cir, t0);
    for (size_t i = 0; i < sorted.size(); ++i) {
        const PacketRecord& r = sorted[i];
        double len = kNetHeaderSize + r.net.payload_len;
        if (tb.police(len, r.fair.src_timestamp) == PoliceResult::violate) {
            ++result.violations;
            result.violating.push_back(i);
        }
    }
    return result;
}

ComplaintResponse examine_complaint(uint32_t asn,
                                    const std::vector<KeyEpoch>& marking_keys,
                                    const Key32& sig_priv,
                                    const EvidenceBundle& bundle,
                                    const KeyRegistry& registry, double slack) {
    double newest = -1e300;
    for (const PacketRecord& r : bundle.records)
        newest = std::max(newest, r.arrival_time);
    if (bundle.complaint_time - newest > HeaderStore::kRetentionSeconds)
        throw StaleEvidenceError("complaint arrived after the retention margin");

    ComplaintResponse resp;
    resp.asn = asn;

    PolicyReport policy_report = verify_policy(bundle.policy, registry);
    if (policy_report.source_sig_valid && policy_report.dest_sig_valid &&
        policy_report.path_consistent && bundle.policy.final()) {
        size_t slot_idx = path_position(bundle.policy, asn);
        uint64_t expiration = bundle.policy.dest->expiration;
        std::vector<PacketRecord> valid;
        for (const PacketRecord& r : bundle.records) {
            if (r.arrival_time > static_cast<double>(expiration)) continue;
            ++resp.mac_checked;
            bool ok = false;
            if (slot_idx < r.fair.slots.size()) {
                const AsSlot& slot = r.fair.slots[slot_idx];
                for (const SymKey* key : keys_for_time(marking_keys,
                                                       r.arrival_time)) {
                    if (slot_mac4(Aes128(*key), r.net.payload_len,
                                  r.fair.src_timestamp, r.fair.seqno,
                                  slot.nonce) == slot.mac) {
                        ok = true;
                        break;
                    }
                }
            }
            if (ok)
                valid.push_back(r);
            else
                ++resp.mac_failures;
        }
        EvidencePolicing policing =
            police_evidence(valid, static_cast<double>(bundle.policy.dest->cir),
                            static_cast<double>(bundle.policy.dest->cbs), slack);
        resp.tb_violations = policing.violations;
        resp.admit = policing.violations > 0;
    }

    resp.sig = sign(sig_priv, response_sign_input(resp));
    return resp;
}

std::vector<DuplicateGroup> detect_replay(const EvidenceBundle& bundle) {
    std::map<std::pair<uint16_t, uint32_t>, std::vector<size_t>> by_key;
    for (size_t i = 0; i < bundle.records.size(); ++i) {
        const FairHeader& f = bundle.records[i].fair;
        by_key[{f.src_timestamp, f.seqno}].push_back(i);
    }
    std::vector<DuplicateGroup> groups;
    for (auto& [key, indices] : by_key) {
        if (indices.size() < 2) continue;
        groups.push_back({key.first, key.second, std::move(indices)});
    }
    return groups;
}

Interval localize_adversary(const EvidenceBundle& bundle,
                            const DuplicateGroup& group,
                            size_t transit_count) {
    if (group.indices.size() < 2)
        throw std::invalid_argument("localization needs at least two copies");
    size_t prefix = 0;
    for (size_t k = 0; k < transit_count; ++k) {
        const PacketRecord& first = bundle.records[group.indices[0]];
        if (k >= first.fair.slots.size()) break;
        uint8_t nonce = first.fair.slots[k].nonce;
        bool same = true;
        for (size_t m = 1; m < group.indices.size(); ++m) {
            const PacketRecord& other = bundle.records[group.indices[m]];
            if (k >= other.fair.slots.size() ||
                other.fair.slots[k].nonce != nonce) {
                same = false;
                break;
            }
        }
        if (!same) break;
        prefix = k + 1;
    }
    return Interval{static_cast<int>(prefix), static_cast<int>(prefix) + 1};
}

Interval localize_overall(const EvidenceBundle& bundle,
                          const std::vector<DuplicateGroup>& groups,
                          size_t transit_count) {
    Interval best{-1, -1};
    for (const DuplicateGroup& g : groups) {
        Interval iv = localize_adversary(bundle, g, transit_count);
        if (best.left < 0 || iv.left < best.left) best = iv;
    }
    return best;
}

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::none: return "none";
        case Outcome::source_guilty: return "source_guilty";
        case Outcome::enroute_adversary: return "enroute_adversary";
        case Outcome::replay_detected: return "replay_detected";
        case Outcome::framing_suspected: return "framing_suspected";
        case Outcome::rejected: return "rejected";
    }
    return "unknown";
}

Verdict adjudicate(const std::vector<ComplaintResponse>& responses,
                   const EvidenceBundle& bundle, const KeyRegistry& registry,
                   double theta) {
    for (const ComplaintResponse& r : responses)
        if (!verify_response(r, registry))
            throw PolicyError("complaint response signature does not verify");

    const auto& path = bundle.policy.source.path;
    size_t n = path.size();

    Verdict verdict;
    verdict.source_asn = bundle.policy.source.asn;

    // Duplicated (timestamp, seqno) pairs dominate every other signal: the
    // evidence itself is tainted. A boundary at the destination means the
    // duplicates were created by the complainant.
    std::vector<DuplicateGroup> groups = detect_replay(bundle);
    if (!groups.empty()) {
        verdict.interval = localize_overall(bundle, groups, n);
        verdict.outcome = verdict.interval.left == static_cast<int>(n)
                              ? Outcome::framing_suspected
                              : Outcome::replay_detected;
        return verdict;
    }

    // Path-ordered view of the responses; an AS that did not answer is
    // treated as rejecting.
    std::vector<const ComplaintResponse*> by_pos(n, nullptr);
    for (const ComplaintResponse& r : responses) {
        for (size_t i = 0; i < n; ++i)
            if (path[i] == r.asn) by_pos[i] = &r;
    }
    size_t first_admit = n;
    bool contiguous = true;
    double max_fraction = 0;
    bool any_violation = false;
    for (size_t i = 0; i < n; ++i) {
        if (!by_pos[i]) continue;
        max_fraction = std::max(max_fraction, by_pos[i]->failure_fraction());
        any_violation = any_violation || by_pos[i]->tb_violations > 0;
        if (by_pos[i]->admit) {
            if (first_admit == n) first_admit = i;
            verdict.admitting.push_back(path[i]);
        } else if (first_admit != n) {
            contiguous = false;
        }
    }

    if (!contiguous) {
        verdict.outcome = Outcome::framing_suspected;
        return verdict;
    }
    if (first_admit == 0 && !verdict.admitting.empty() &&
        verdict.admitting.size() == n && max_fraction <= theta) {
        verdict.outcome = Outcome::source_guilty;
        return verdict;
    }
    if (!verdict.admitting.empty()) {
        // Admissions form a proper destination-adjacent suffix; the
        // boundary sits between the last rejecting and first admitting AS.
        verdict.outcome = Outcome::enroute_adversary;
        verdict.interval = {static_cast<int>(first_admit),
                            static_cast<int>(first_admit) + 1};
        return verdict;
    }
    if (max_fraction > theta) {
        // Nobody admits, yet some AS could not verify most of its own
        // marks: tampering at or beyond the last cooperating transit.
        verdict.outcome = Outcome::enroute_adversary;
        verdict.interval = {static_cast<int>(n), static_cast<int>(n) + 1};
        return verdict;
    }
    if (!any_violation) {
        verdict.outcome = Outcome::rejected;
        return verdict;
    }
    verdict.outcome = Outcome::framing_suspected;
    return verdict;
}

}  // namespace fair
