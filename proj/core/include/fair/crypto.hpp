#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>

#include "fair/bytes.hpp"

namespace fair {

using SymKey = std::array<uint8_t, 16>;
using Block16 = std::array<uint8_t, 16>;
using Digest32 = std::array<uint8_t, 32>;
using Key32 = std::array<uint8_t, 32>;

// True when the CPU executes AES rounds in hardware; the block cipher
// falls back to a table-free software implementation otherwise.
bool aes_hw_available();

// AES-128 with a precomputed key schedule. Keyed-MAC hot paths hold one
// instance per key so per-packet cost is the ten rounds only.
class Aes128 {
public:
    explicit Aes128(const SymKey& key);
    Block16 encrypt(const Block16& in) const;
    // Four independent blocks at once; on AES hardware the rounds
    // interleave and amortize the per-block latency.
    void encrypt4(const Block16 in[4], Block16 out[4]) const;

private:
    std::array<std::array<uint8_t, 16>, 11> rk_;
};

// One-block CBC-MAC with zero IV collapses to a single block encryption.
// All MAC inputs in this codebase are fixed-length and fit one block.
Block16 prf_block(const SymKey& key, const Block16& block);

// Zero-pads up to 16 bytes of message into a cipher block.
Block16 pad_block(const uint8_t* msg, size_t len);

// A truncated tag: the `width` most significant bits of a 128-bit tag,
// right-aligned in (hi, lo).
struct MacTag {
    uint64_t hi = 0;
    uint64_t lo = 0;
    unsigned width = 0;

    // Narrow tags only (width <= 64).
    uint64_t value() const;

    friend bool operator==(const MacTag&, const MacTag&) = default;
};

MacTag truncate_msb(const Block16& tag, unsigned bits);

Digest32 hash32(const uint8_t* data, size_t len);
Digest32 hash32(const ByteVec& data);

struct SigKeyPair {
    Key32 priv{};
    Key32 pub{};
};

struct DhKeyPair {
    Key32 priv{};
    Key32 pub{};
};

SigKeyPair sig_keypair_from_seed(const Key32& seed);
DhKeyPair dh_keypair_from_seed(const Key32& seed);

// Signs hash32(message); verify recomputes the digest. Malformed
// signatures verify false rather than throwing.
ByteVec sign(const Key32& priv, const ByteVec& message);
bool verify(const Key32& pub, const ByteVec& message, const ByteVec& sig);

// Non-interactive key exchange: both endpoints derive the same 16-byte
// key from (own private, peer public).
SymKey derive_shared_key(const Key32& my_priv, const Key32& peer_pub);

struct UnknownAsError : std::runtime_error {
    explicit UnknownAsError(uint32_t asn);
    uint32_t asn;
};

// Key material one simulated AS holds. transit_key is the per-packet
// marking key (rotatable); control_key endorses sending policies.
struct AsKeys {
    uint32_t asn = 0;
    SymKey transit_key{};
    SymKey control_key{};
    SigKeyPair sig;
    DhKeyPair dh;
};

// Stand-in for the public-key infrastructure: every participant can look
// up any registered AS; lookups of unregistered ASNs fail distinctly.
class KeyRegistry {
public:
    void add(AsKeys keys);
    bool contains(uint32_t asn) const;
    const AsKeys& at(uint32_t asn) const;

    // Deterministic per-AS key material from a scenario seed.
    static AsKeys derive(uint64_t scenario_seed, uint32_t asn);

private:
    std::map<uint32_t, AsKeys> keys_;
};

// Fixed packing of MAC inputs: fields big-endian in argument order,
// zero-padded to the block size.
Block16 icv_input(uint16_t payload_len, uint16_t ts, uint32_t seqno);
Block16 slot_mac_input(uint16_t payload_len, uint16_t ts, uint32_t seqno,
                       uint8_t nonce);

// Hot-path helpers over a cached key schedule.
uint8_t icv8(const Aes128& k_sd, uint16_t payload_len, uint16_t ts,
             uint32_t seqno);
uint8_t slot_mac4(const Aes128& k_i, uint16_t payload_len, uint16_t ts,
                  uint32_t seqno, uint8_t nonce);

}  // namespace fair
