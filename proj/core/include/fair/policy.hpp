#pragma once

#include <optional>

#include "fair/crypto.hpp"
#include "fair/wire.hpp"

namespace fair {

struct PolicyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Step 1: the source declares the cooperating path and signs over its
// record's canonical bytes.
PolicyPacket create_policy(uint32_t src_asn, uint64_t now,
                           std::vector<uint32_t> coop_path,
                           const KeyRegistry& registry);

// Step 2: a transit appends a full-width MAC chained over every prior
// record plus its own ASN. Transits keep no per-policy state.
void transit_endorse(PolicyPacket& p, uint32_t asn,
                     const SymKey& control_key);

// Step 3: the destination checks the source signature, then appends the
// token-bucket contract and signs over everything before it.
void dest_complete(PolicyPacket& p, uint32_t asn, uint64_t expiration,
                   uint64_t cir, uint64_t cbs, const KeyRegistry& registry);

// Each transit can recheck only its own chained MAC; pass its control
// key as `own` to include that check.
struct PolicyReport {
    bool source_sig_valid = false;
    bool dest_sig_valid = false;
    bool path_consistent = false;
    bool endorsements_complete = false;  // every declared AS endorsed
    bool own_checked = false;
    bool own_mac_valid = false;

    bool ok() const {
        return source_sig_valid && dest_sig_valid && path_consistent &&
               (!own_checked || own_mac_valid);
    }
};

PolicyReport verify_policy(
    const PolicyPacket& p, const KeyRegistry& registry,
    const std::optional<std::pair<uint32_t, SymKey>>& own = std::nullopt);

// A channel is identified by the full AS path, not the endpoint pair.
struct Channel {
    Digest32 channel_id{};
    SymKey k_sd{};
    PolicyPacket policy;
    uint32_t seq_counter = 0;  // wraps modulo 2^24
};

Digest32 channel_id_for(uint32_t src_asn, const std::vector<uint32_t>& path,
                        uint32_t dst_asn);

// Step 4: verify the finished policy and derive the shared key from the
// non-interactive exchange; either endpoint arrives at the same key.
Channel establish_channel(const PolicyPacket& p, const KeyRegistry& registry);

}  // namespace fair
