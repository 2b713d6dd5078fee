#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "fair/bytes.hpp"
#include "fair/crypto.hpp"

namespace fair {

inline constexpr size_t kMaxSlots = 127;
inline constexpr uint32_t kSeqnoSpace = 1u << 24;

struct AsSlot {
    uint8_t nonce = 0;  // 4 bits
    uint8_t mac = 0;    // 4 bits
    friend bool operator==(const AsSlot&, const AsSlot&) = default;
};

// Per-packet marking block. next_as packs the suspicious bit (MSB) with
// the 7-bit index of the next slot to mark; slots are pre-allocated for
// the whole cooperating path so packet length never changes en route.
struct FairHeader {
    uint16_t src_timestamp = 0;
    uint32_t seqno = 0;  // 24-bit
    uint8_t icv = 0;
    uint8_t next_as = 0;
    uint8_t eh_next_header = 0;  // extension-header framing only
    std::vector<AsSlot> slots;

    uint8_t as_index() const { return next_as & 0x7f; }
    bool suspicious() const { return (next_as & 0x80) != 0; }
    void set_as_index(uint8_t idx) {
        next_as = static_cast<uint8_t>((next_as & 0x80) | (idx & 0x7f));
    }
    void set_suspicious(bool on) {
        next_as = static_cast<uint8_t>(on ? (next_as | 0x80) : (next_as & 0x7f));
    }
    friend bool operator==(const FairHeader&, const FairHeader&) = default;
};

// raw: the bare marking block, 7 + n bytes (the IPv4 shim placement).
// ipv6_eh: next-header and header-length bytes prepended, 9 + n bytes;
//   the length byte holds the total byte count.
// ipv6_eh_strict: as ipv6_eh but zero-padded to an 8-octet boundary with
//   the length byte in 8-octet units minus one; padding decodes as empty
//   slots, so the round trip is the identity only when 9 + n is a
//   multiple of 8.
enum class FairMode { raw, ipv6_eh, ipv6_eh_strict };

size_t encoded_fair_size(size_t slot_count, FairMode mode);
ByteVec encode_fair(const FairHeader& h, FairMode mode);
FairHeader decode_fair(const ByteVec& bytes, FairMode mode);

inline constexpr size_t kNetHeaderSize = 36;

// Fixed-size network-layer view: enough of a v4/v6 header to carry the
// fields the protocol binds (payload length covers everything after this
// header, the marking block included). v4 addresses embed in 16 bytes.
struct NetHeader {
    uint8_t version = 6;
    uint8_t next_header = 0;
    uint16_t payload_len = 0;
    std::array<uint8_t, 16> src_addr{};
    std::array<uint8_t, 16> dst_addr{};
    friend bool operator==(const NetHeader&, const NetHeader&) = default;
};

ByteVec encode_net(const NetHeader& h);
NetHeader decode_net(ByteReader& r);

// Simulator address convention: the AS number in the last four bytes.
std::array<uint8_t, 16> make_addr(uint32_t asn);
uint32_t addr_asn(const std::array<uint8_t, 16>& addr);

// What the destination stores per packet: headers only, no payload.
struct PacketRecord {
    NetHeader net;
    FairHeader fair;
    double arrival_time = 0;  // seconds, fractional
    friend bool operator==(const PacketRecord&, const PacketRecord&) = default;
};

// Evidence persistence: "FAIRDUMP" magic, a version byte, then records of
// (arrival nanoseconds u64, record length u16, network header, raw
// marking block).
ByteVec encode_dump(const std::vector<PacketRecord>& records);
std::vector<PacketRecord> decode_dump(const ByteVec& bytes);
void write_dump_file(const std::string& path,
                     const std::vector<PacketRecord>& records);
std::vector<PacketRecord> read_dump_file(const std::string& path);

// Sending-policy records, in path order: one source record, the
// cooperating transits, one destination record.
struct SourceRecord {
    uint32_t asn = 0;
    uint64_t time = 0;  // seconds
    std::vector<uint32_t> path;
    ByteVec sig;
    friend bool operator==(const SourceRecord&, const SourceRecord&) = default;
};

struct TransitRecord {
    uint32_t asn = 0;
    Block16 mac{};
    friend bool operator==(const TransitRecord&, const TransitRecord&) = default;
};

struct DestRecord {
    uint32_t asn = 0;
    uint64_t expiration = 0;  // seconds
    uint64_t cir = 0;         // bytes per second
    uint64_t cbs = 0;         // bytes
    ByteVec sig;
    friend bool operator==(const DestRecord&, const DestRecord&) = default;
};

struct PolicyPacket {
    SourceRecord source;
    std::vector<TransitRecord> transits;
    std::optional<DestRecord> dest;

    bool final() const { return dest.has_value(); }
    friend bool operator==(const PolicyPacket&, const PolicyPacket&) = default;
};

// Canonical per-record encodings; signatures and chained MACs are
// computed over these exact bytes.
ByteVec encode_source_prefix(const SourceRecord& r);  // without sig
ByteVec encode_source_record(const SourceRecord& r);
ByteVec encode_transit_record(const TransitRecord& r);
ByteVec encode_dest_prefix(const DestRecord& r);  // without sig
ByteVec encode_dest_record(const DestRecord& r);

ByteVec encode_policy(const PolicyPacket& p);
PolicyPacket decode_policy(const ByteVec& bytes);

}  // namespace fair
