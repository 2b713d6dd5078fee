#pragma once

#include <cstdlib>
#include <map>
#include <unordered_map>

#include "fair/crypto.hpp"
#include "fair/lcg.hpp"
#include "fair/policy.hpp"
#include "fair/tokenbucket.hpp"
#include "fair/wire.hpp"

namespace fair {

// On the wire a forwarding entry is destination address, shared key,
// sequence counter, and egress port: 16 + 16 + 3 + 1 bytes.
inline constexpr size_t kFibEntryWireSize = 36;

struct FibEntry {
    std::array<uint8_t, 16> dst{};
    uint8_t port = 0;
    SymKey k_sd{};
    uint32_t seq_counter = 0;  // wraps modulo 2^24
};

struct UnroutableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AddrHash {
    size_t operator()(const std::array<uint8_t, 16>& a) const {
        uint64_t h = 1469598103934665603ULL;
        for (uint8_t b : a) h = (h ^ b) * 1099511628211ULL;
        return static_cast<size_t>(h);
    }
};

class Fib {
public:
    void insert(FibEntry entry) { entries_[entry.dst] = entry; }
    FibEntry* find(const std::array<uint8_t, 16>& dst) {
        auto it = entries_.find(dst);
        return it == entries_.end() ? nullptr : &it->second;
    }
    size_t size() const { return entries_.size(); }

private:
    std::unordered_map<std::array<uint8_t, 16>, FibEntry, AddrHash> entries_;
};

uint16_t low16_seconds(double t);

// Timestamp freshness with wraparound: the plain 16-bit distance must be
// within 3 of either end of the space. The uint16 form is the hot path;
// a forwarding loop refreshes now16 once per second, not per packet.
inline bool clock_check16(uint16_t ts16, uint16_t now16) {
    int diff = std::abs(static_cast<int>(ts16) - static_cast<int>(now16));
    return !(diff > 3 && diff < 65536 - 3);
}
bool clock_check(uint16_t ts16, double now);

// Stamp and mark one outbound packet, advancing the destination's
// sequence counter. Slots are allocated for the whole cooperating path.
FairHeader source_send(Fib& fib, const NetHeader& net, double now,
                       size_t path_slots);

enum class ForwardAction { forwarded, dropped_clock, dropped_malformed };

// One cooperating hop: freshness check, fresh nonce, 4-bit MAC into this
// hop's slot, pointer advance. Leaves no per-packet state behind.
ForwardAction transit_forward(const Aes128& k_i, Lcg64& rng,
                              const NetHeader& net, FairHeader& fair,
                              double now);

// Destination evidence store, headers only, keyed by channel.
class HeaderStore {
public:
    static constexpr double kRetentionSeconds = 12.0 * 3600.0;

    void append(const Digest32& channel_id, PacketRecord rec);
    const std::vector<PacketRecord>* find(const Digest32& channel_id) const;
    void prune(double now);
    size_t total() const;

private:
    std::map<Digest32, std::vector<PacketRecord>> store_;
};

struct DestCounters {
    uint64_t accepted = 0;
    uint64_t clock_drops = 0;
    uint64_t icv_failures = 0;
    uint64_t violations = 0;
};

enum class RxResult { accept, drop_clock, drop_icv };

// Inbound processing: freshness, ICV recomputation, live policing on
// arrival time, and storage. A failed ICV drops the packet from delivery
// but the header is still policed and stored; those headers are the
// evidence that fabricated traffic exists.
RxResult dest_receive(const Aes128& k_sd, TokenBucket& policer,
                      HeaderStore& store, const Digest32& channel_id,
                      const NetHeader& net, const FairHeader& fair, double now,
                      DestCounters& counters);

}  // namespace fair
