#include "fair/policy.hpp"

#include <algorithm>
#include <cstring>

namespace fair {
namespace {

// Chain input for the transit at `position`: every prior record's
// canonical bytes, then the endorsing ASN.
ByteVec chain_prefix(const PolicyPacket& p, size_t position, uint32_t asn) {
    ByteVec bytes = encode_source_record(p.source);
    for (size_t i = 0; i < position; ++i)
        put_bytes(bytes, encode_transit_record(p.transits[i]));
    put_u32(bytes, asn);
    return bytes;
}

Block16 chain_mac(const PolicyPacket& p, size_t position, uint32_t asn,
                  const SymKey& control_key) {
    Digest32 digest = hash32(chain_prefix(p, position, asn));
    Block16 block;
    std::memcpy(block.data(), digest.data(), block.size());
    return prf_block(control_key, block);
}

ByteVec dest_sign_input(const PolicyPacket& p, const DestRecord& d) {
    ByteVec bytes = encode_source_record(p.source);
    for (const TransitRecord& t : p.transits)
        put_bytes(bytes, encode_transit_record(t));
    put_bytes(bytes, encode_dest_prefix(d));
    return bytes;
}

}  // namespace

PolicyPacket create_policy(uint32_t src_asn, uint64_t now,
                           std::vector<uint32_t> coop_path,
                           const KeyRegistry& registry) {
    const AsKeys& keys = registry.at(src_asn);
    PolicyPacket p;
    p.source.asn = src_asn;
    p.source.time = now;
    p.source.path = std::move(coop_path);
    p.source.sig = sign(keys.sig.priv, encode_source_prefix(p.source));
    return p;
}

void transit_endorse(PolicyPacket& p, uint32_t asn,
                     const SymKey& control_key) {
    if (std::find(p.source.path.begin(), p.source.path.end(), asn) ==
        p.source.path.end())
        throw PolicyError("AS " + std::to_string(asn) +
                          " is not in the declared cooperating path");
    TransitRecord t;
    t.asn = asn;
    t.mac = chain_mac(p, p.transits.size(), asn, control_key);
    p.transits.push_back(t);
}

void dest_complete(PolicyPacket& p, uint32_t asn, uint64_t expiration,
                   uint64_t cir, uint64_t cbs, const KeyRegistry& registry) {
    if (!verify(registry.at(p.source.asn).sig.pub,
                encode_source_prefix(p.source), p.source.sig))
        throw PolicyError("source signature does not verify");
    if (expiration <= p.source.time)
        throw PolicyError("policy expires before it starts");
    const AsKeys& keys = registry.at(asn);
    DestRecord d;
    d.asn = asn;
    d.expiration = expiration;
    d.cir = cir;
    d.cbs = cbs;
    d.sig = sign(keys.sig.priv, dest_sign_input(p, d));
    p.dest = std::move(d);
}

PolicyReport verify_policy(
    const PolicyPacket& p, const KeyRegistry& registry,
    const std::optional<std::pair<uint32_t, SymKey>>& own) {
    PolicyReport report;
    report.source_sig_valid =
        registry.contains(p.source.asn) &&
        verify(registry.at(p.source.asn).sig.pub, encode_source_prefix(p.source),
               p.source.sig);
    if (p.dest) {
        report.dest_sig_valid =
            registry.contains(p.dest->asn) &&
            verify(registry.at(p.dest->asn).sig.pub, dest_sign_input(p, *p.dest),
                   p.dest->sig);
    }

    // Transit records must follow the declared path order with no
    // stranger ASes; declared ASes missing a record are detectable
    // against the signed path.
    report.path_consistent = true;
    size_t path_pos = 0;
    for (const TransitRecord& t : p.transits) {
        while (path_pos < p.source.path.size() &&
               p.source.path[path_pos] != t.asn)
            ++path_pos;
        if (path_pos == p.source.path.size()) {
            report.path_consistent = false;
            break;
        }
        ++path_pos;
    }
    report.endorsements_complete =
        report.path_consistent && p.transits.size() == p.source.path.size();

    if (own) {
        report.own_checked = true;
        for (size_t i = 0; i < p.transits.size(); ++i) {
            if (p.transits[i].asn != own->first) continue;
            report.own_mac_valid =
                chain_mac(p, i, own->first, own->second) == p.transits[i].mac;
            break;
        }
    }
    return report;
}

Digest32 channel_id_for(uint32_t src_asn, const std::vector<uint32_t>& path,
                        uint32_t dst_asn) {
    ByteVec bytes;
    put_u32(bytes, src_asn);
    put_u16(bytes, static_cast<uint16_t>(path.size()));
    for (uint32_t asn : path) put_u32(bytes, asn);
    put_u32(bytes, dst_asn);
    return hash32(bytes);
}

Channel establish_channel(const PolicyPacket& p, const KeyRegistry& registry) {
    if (!p.final()) throw PolicyError("cannot establish a channel from a partial policy");
    PolicyReport report = verify_policy(p, registry);
    if (!report.ok()) throw PolicyError("policy verification failed");

    Channel ch;
    ch.channel_id = channel_id_for(p.source.asn, p.source.path, p.dest->asn);
    ch.k_sd = derive_shared_key(registry.at(p.source.asn).dh.priv,
                                registry.at(p.dest->asn).dh.pub);
    ch.policy = p;
    ch.seq_counter = 0;
    return ch;
}

}  // namespace fair
