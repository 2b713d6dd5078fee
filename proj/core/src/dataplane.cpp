#include "fair/dataplane.hpp"

#include <cmath>
#include <cstdlib>

namespace fair {

uint16_t low16_seconds(double t) {
    return static_cast<uint16_t>(
        static_cast<uint64_t>(std::floor(t)) & 0xffff);
}

bool clock_check(uint16_t ts16, double now) {
    return clock_check16(ts16, low16_seconds(now));
}

FairHeader source_send(Fib& fib, const NetHeader& net, double now,
                       size_t path_slots) {
    FibEntry* entry = fib.find(net.dst_addr);
    if (!entry) throw UnroutableError("no forwarding entry for destination");
    FairHeader h;
    h.src_timestamp = low16_seconds(now);
    h.seqno = entry->seq_counter;
    entry->seq_counter = (entry->seq_counter + 1) & (kSeqnoSpace - 1);
    h.icv = icv8(Aes128(entry->k_sd), net.payload_len, h.src_timestamp, h.seqno);
    h.next_as = 0;
    h.slots.assign(path_slots, AsSlot{});
    return h;
}

ForwardAction transit_forward(const Aes128& k_i, Lcg64& rng,
                              const NetHeader& net, FairHeader& fair,
                              double now) {
    if (!clock_check(fair.src_timestamp, now))
        return ForwardAction::dropped_clock;
    uint8_t idx = fair.as_index();
    if (idx >= fair.slots.size()) return ForwardAction::dropped_malformed;
    AsSlot& slot = fair.slots[idx];
    slot.nonce = rng.next_nibble();
    slot.mac = slot_mac4(k_i, net.payload_len, fair.src_timestamp, fair.seqno,
                         slot.nonce);
    fair.set_as_index(static_cast<uint8_t>(idx + 1));
    return ForwardAction::forwarded;
}

void HeaderStore::append(const Digest32& channel_id, PacketRecord rec) {
    store_[channel_id].push_back(std::move(rec));
}

const std::vector<PacketRecord>* HeaderStore::find(
    const Digest32& channel_id) const {
    auto it = store_.find(channel_id);
    return it == store_.end() ? nullptr : &it->second;
}

void HeaderStore::prune(double now) {
    double cutoff = now - kRetentionSeconds;
    for (auto& [id, records] : store_) {
        size_t keep = 0;
        while (keep < records.size() && records[keep].arrival_time < cutoff)
            ++keep;
        records.erase(records.begin(), records.begin() + keep);
    }
}

size_t HeaderStore::total() const {
    size_t n = 0;
    for (const auto& [id, records] : store_) n += records.size();
    return n;
}

RxResult dest_receive(const Aes128& k_sd, TokenBucket& policer,
                      HeaderStore& store, const Digest32& channel_id,
                      const NetHeader& net, const FairHeader& fair, double now,
                      DestCounters& counters) {
    if (!clock_check(fair.src_timestamp, now)) {
        ++counters.clock_drops;
        return RxResult::drop_clock;
    }
    bool icv_ok =
        icv8(k_sd, net.payload_len, fair.src_timestamp, fair.seqno) == fair.icv;
    if (policer.police(kNetHeaderSize + net.payload_len, now) ==
        PoliceResult::violate)
        ++counters.violations;
    store.append(channel_id, PacketRecord{net, fair, now});
    if (!icv_ok) {
        ++counters.icv_failures;
        return RxResult::drop_icv;
    }
    ++counters.accepted;
    return RxResult::accept;
}

}  // namespace fair
