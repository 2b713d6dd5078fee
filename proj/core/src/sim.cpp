#include "fair/sim.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

namespace fair {

const char* role_name(Role r) {
    switch (r) {
        case Role::source: return "source";
        case Role::transit_coop: return "transit";
        case Role::transit_noncoop: return "transit_noncoop";
        case Role::destination: return "destination";
    }
    return "unknown";
}

const char* adversary_name(AdversaryKind k) {
    switch (k) {
        case AdversaryKind::none: return "none";
        case AdversaryKind::flood: return "flood";
        case AdversaryKind::corrupt_upstream_macs: return "corrupt_upstream_macs";
        case AdversaryKind::replay: return "replay";
        case AdversaryKind::inject: return "inject";
        case AdversaryKind::timestamp_shift: return "timestamp_shift";
        case AdversaryKind::frame_duplicate_evidence:
            return "frame_duplicate_evidence";
    }
    return "unknown";
}

size_t Topology::coop_transit_count() const {
    size_t c = 0;
    for (size_t i = 1; i + 1 < nodes.size(); ++i)
        c += nodes[i].role == Role::transit_coop;
    return c;
}

std::vector<uint32_t> Topology::coop_transit_asns() const {
    std::vector<uint32_t> v;
    for (size_t i = 1; i + 1 < nodes.size(); ++i)
        if (nodes[i].role == Role::transit_coop) v.push_back(nodes[i].asn);
    return v;
}

void Topology::validate() const {
    if (nodes.size() < 2)
        throw ScenarioError("a path needs a source and a destination");
    if (nodes.front().role != Role::source)
        throw ScenarioError("first node must be the source");
    if (nodes.back().role != Role::destination)
        throw ScenarioError("last node must be the destination");
    std::set<uint32_t> seen;
    for (const AsNode& n : nodes) {
        if (!seen.insert(n.asn).second)
            throw ScenarioError("duplicate ASN " + std::to_string(n.asn));
        if (std::abs(n.clock_offset) > 0.5)
            throw ScenarioError("clock offset beyond half a second");
    }
    for (size_t i = 1; i + 1 < nodes.size(); ++i)
        if (nodes[i].role != Role::transit_coop &&
            nodes[i].role != Role::transit_noncoop)
            throw ScenarioError("interior nodes must be transits");
    if (link_latency.size() + 1 != nodes.size())
        throw ScenarioError("need exactly one latency per link");
    double total = 0;
    for (double l : link_latency) {
        if (l < 0) throw ScenarioError("negative link latency");
        total += l;
    }
    if (total > 1.0) throw ScenarioError("path latency beyond one second");
    if (coop_transit_count() > kMaxSlots)
        throw ScenarioError("more cooperating transits than header slots");
    for (const AsNode& n : nodes) {
        AdversaryKind k = n.adversary.kind;
        if (k == AdversaryKind::none) continue;
        bool ok = false;
        switch (k) {
            case AdversaryKind::flood:
            case AdversaryKind::timestamp_shift:
                ok = n.role == Role::source;
                break;
            case AdversaryKind::corrupt_upstream_macs:
            case AdversaryKind::replay:
            case AdversaryKind::inject:
                ok = n.role == Role::transit_coop;
                break;
            case AdversaryKind::frame_duplicate_evidence:
                ok = n.role == Role::destination;
                break;
            case AdversaryKind::none:
                break;
        }
        if (!ok)
            throw ScenarioError(std::string(adversary_name(k)) +
                                " cannot run on a " + role_name(n.role) +
                                " node");
        if (n.adversary.rate_multiplier <= 0)
            throw ScenarioError("rate multiplier must be positive");
        if (k == AdversaryKind::replay && (n.adversary.replay_factor < 2 ||
                                           n.adversary.replay_factor > 16))
            throw ScenarioError("replay factor must be in [2, 16]");
        if (n.adversary.window_end < n.adversary.window_start)
            throw ScenarioError("adversary window ends before it starts");
    }
}

void ScenarioConfig::validate() const {
    topology.validate();
    if (policy.cir <= 0 || policy.cbs <= 0)
        throw ScenarioError("policy rate and burst must be positive");
    if (policy.duration <= 0) throw ScenarioError("duration must be positive");
    if (policy.expiration <= 0)
        throw ScenarioError("expiration must be positive");
    if (traffic.rate_fraction <= 0)
        throw ScenarioError("rate fraction must be positive");
    size_t fair_len = encoded_fair_size(topology.coop_transit_count(), mode);
    size_t total = traffic.payload_len + fair_len;
    if (total > 0xffff)
        throw ScenarioError("payload does not fit a 16-bit length");
    if (kNetHeaderSize + total > policy.cbs)
        throw ScenarioError("one packet exceeds the burst size");
    if (evidence_start >= 0 && evidence_end >= 0 &&
        evidence_end < evidence_start)
        throw ScenarioError("evidence window ends before it starts");
    if (slack < 0) throw ScenarioError("slack must be non-negative");
}

namespace {

uint64_t node_seed(uint64_t scenario_seed, uint32_t asn) {
    ByteVec in;
    put_u64(in, scenario_seed);
    put_u32(in, asn);
    const char* label = "rng";
    in.insert(in.end(), label, label + 3);
    Digest32 d = hash32(in);
    uint64_t v = 0;
    for (size_t i = 0; i < 8; ++i) v = v << 8 | d[i];
    return v;
}

struct SimPacket {
    NetHeader net;
    FairHeader fair;
};

struct Event {
    double time = 0;
    uint32_t node = 0;
    uint64_t uid = 0;  // schedule order; breaks exact-time ties
    SimPacket pkt;
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        if (a.time != b.time) return a.time > b.time;
        if (a.node != b.node) return a.node > b.node;
        return a.uid > b.uid;
    }
};

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    const Topology& topo = cfg.topology;
    const size_t node_count = topo.nodes.size();
    const size_t dest_pos = node_count - 1;
    const AsNode& src_node = topo.nodes.front();
    const AsNode& dst_node = topo.nodes.back();

    KeyRegistry registry;
    for (const AsNode& n : topo.nodes)
        registry.add(KeyRegistry::derive(cfg.seed, n.asn));

    const std::vector<uint32_t> coop_path = topo.coop_transit_asns();
    const size_t n_slots = coop_path.size();

    const uint64_t setup_time = static_cast<uint64_t>(kSimEpoch);
    PolicyPacket policy =
        create_policy(src_node.asn, setup_time, coop_path, registry);
    for (uint32_t asn : coop_path)
        transit_endorse(policy, asn, registry.at(asn).control_key);
    dest_complete(policy, dst_node.asn,
                  setup_time + static_cast<uint64_t>(cfg.policy.expiration),
                  static_cast<uint64_t>(cfg.policy.cir),
                  static_cast<uint64_t>(cfg.policy.cbs), registry);
    Channel channel = establish_channel(policy, registry);

    ScenarioResult res;
    res.policy = policy;
    res.channel_id = channel.channel_id;
    res.hops.assign(node_count, HopCounters{});

    std::vector<Lcg64> rng;
    rng.reserve(node_count);
    for (const AsNode& n : topo.nodes)
        rng.emplace_back(node_seed(cfg.seed, n.asn));
    std::vector<std::optional<Aes128>> marker(node_count);
    for (size_t i = 1; i < dest_pos; ++i)
        if (topo.nodes[i].role == Role::transit_coop)
            marker[i].emplace(registry.at(topo.nodes[i].asn).transit_key);
    // the destination derives the same shared key from its own half
    const Aes128 dest_cipher(derive_shared_key(
        registry.at(dst_node.asn).dh.priv, registry.at(src_node.asn).dh.pub));
    TokenBucket policer = TokenBucket::make(
        cfg.policy.cir, cfg.policy.cbs, kSimEpoch + dst_node.clock_offset);

    const size_t fair_len = encoded_fair_size(n_slots, cfg.mode);
    const uint16_t payload_total =
        static_cast<uint16_t>(cfg.traffic.payload_len + fair_len);
    const double wire_len = kNetHeaderSize + payload_total;

    NetHeader net{};
    net.version = cfg.mode == FairMode::raw ? 4 : 6;
    net.next_header = 0;
    net.payload_len = payload_total;
    net.src_addr = make_addr(src_node.asn);
    net.dst_addr = make_addr(dst_node.asn);

    std::priority_queue<Event, std::vector<Event>, EventAfter> events;
    uint64_t next_uid = 0;
    auto schedule = [&](double t, size_t node, SimPacket pkt) {
        events.push(
            Event{t, static_cast<uint32_t>(node), next_uid++, std::move(pkt)});
    };

    Fib fib;
    fib.insert(FibEntry{net.dst_addr, 0, channel.k_sd, 0});
    FibEntry* route = fib.find(net.dst_addr);
    const Aes128 src_cipher(channel.k_sd);

    const AdversaryBehavior& sadv = src_node.adversary;
    const bool flooding = sadv.kind == AdversaryKind::flood;
    const bool shifting = sadv.kind == AdversaryKind::timestamp_shift;
    const double rate =
        (flooding || shifting ? sadv.rate_multiplier : cfg.traffic.rate_fraction) *
        cfg.policy.cir;
    uint64_t budget = cfg.traffic.packets;
    if (budget == 0)
        budget = static_cast<uint64_t>(
            std::floor(cfg.policy.duration * rate / wire_len));

    TokenBucket shaper = TokenBucket::make(
        cfg.policy.cir, cfg.policy.cbs, kSimEpoch + src_node.clock_offset);
    uint64_t stamp_second = 0;
    double stamp_bytes = 0;

    for (uint64_t k = 0; k < budget; ++k) {
        double t = k * wire_len / rate;
        if (cfg.traffic.packets == 0 && t >= cfg.policy.duration) break;
        double local = kSimEpoch + t + src_node.clock_offset;
        SimPacket pkt;
        pkt.net = net;
        if (shifting) {
            // stamp honestly while the embedded interval has rate budget
            // left, then post-date the excess by one second
            uint64_t sec = static_cast<uint64_t>(std::floor(local));
            if (sec != stamp_second) {
                stamp_second = sec;
                stamp_bytes = 0;
            }
            uint16_t ts;
            if (stamp_bytes + wire_len <= cfg.policy.cir) {
                stamp_bytes += wire_len;
                ts = static_cast<uint16_t>(sec & 0xffff);
            } else {
                ts = static_cast<uint16_t>((sec + 1) & 0xffff);
            }
            FairHeader& f = pkt.fair;
            f.src_timestamp = ts;
            f.seqno = route->seq_counter;
            route->seq_counter = (route->seq_counter + 1) & (kSeqnoSpace - 1);
            f.icv = icv8(src_cipher, payload_total, ts, f.seqno);
            f.next_as = 0;
            f.slots.assign(n_slots, AsSlot{});
        } else {
            if (!flooding) {
                double release = shaper.shape(wire_len, local);
                t += release - local;
                local = release;
            }
            pkt.fair = source_send(fib, pkt.net, local, n_slots);
        }
        res.hops[0].seen++;
        res.hops[0].forwarded++;
        res.packets_sent++;
        schedule(kSimEpoch + t + topo.link_latency[0], 1, std::move(pkt));
    }

    for (size_t i = 1; i < dest_pos; ++i) {
        const AsNode& node = topo.nodes[i];
        if (node.adversary.kind != AdversaryKind::inject) continue;
        size_t pos = 0;  // this node's slot index
        for (size_t j = 1; j < i; ++j)
            pos += topo.nodes[j].role == Role::transit_coop;
        const AdversaryBehavior& adv = node.adversary;
        const double irate = adv.rate_multiplier * cfg.policy.cir;
        const double start = std::max(0.0, adv.window_start);
        const double stop = std::min(cfg.policy.duration, adv.window_end);
        uint32_t iseq = 1u << 23;  // clear of the honest sequence range
        for (uint64_t k = 0;; ++k) {
            double t = start + k * wire_len / irate;
            if (t >= stop) break;
            double local = kSimEpoch + t + node.clock_offset;
            SimPacket pkt;
            pkt.net = net;
            FairHeader& f = pkt.fair;
            f.src_timestamp = low16_seconds(local);
            f.seqno = iseq;
            iseq = (iseq + 1) & (kSeqnoSpace - 1);
            // without the shared key the ICV is a guess; upstream slots
            // are forged, the own slot is marked for real
            f.icv = static_cast<uint8_t>(rng[i].next_bits(8));
            f.slots.assign(n_slots, AsSlot{});
            for (size_t s = 0; s < pos; ++s)
                f.slots[s] = AsSlot{rng[i].next_nibble(), rng[i].next_nibble()};
            uint8_t nonce = rng[i].next_nibble();
            f.slots[pos] = AsSlot{
                nonce,
                slot_mac4(*marker[i], payload_total, f.src_timestamp, f.seqno,
                          nonce)};
            f.next_as = static_cast<uint8_t>(pos + 1);
            res.injected_sent++;
            schedule(kSimEpoch + t + topo.link_latency[i], i + 1,
                     std::move(pkt));
        }
    }

    while (!events.empty()) {
        Event ev = events.top();
        events.pop();
        const size_t i = ev.node;
        const AsNode& node = topo.nodes[i];
        res.hops[i].seen++;

        if (i == dest_pos) {
            double local = ev.time + node.clock_offset;
            dest_receive(dest_cipher, policer, res.store, res.channel_id,
                         ev.pkt.net, ev.pkt.fair, local, res.dest);
            continue;
        }
        if (node.role == Role::transit_noncoop) {
            res.hops[i].forwarded++;
            schedule(ev.time + topo.link_latency[i], i + 1, std::move(ev.pkt));
            continue;
        }

        double local = ev.time + node.clock_offset;
        ForwardAction act =
            transit_forward(*marker[i], rng[i], ev.pkt.net, ev.pkt.fair, local);
        if (act == ForwardAction::dropped_clock) {
            res.hops[i].clock_drops++;
            continue;
        }
        if (act == ForwardAction::dropped_malformed) {
            res.hops[i].malformed_drops++;
            continue;
        }
        res.hops[i].forwarded++;

        const AdversaryBehavior& adv = node.adversary;
        const double since = ev.time - kSimEpoch;
        const bool active = adv.kind != AdversaryKind::none &&
                            since >= adv.window_start &&
                            since <= adv.window_end;
        const size_t own_slot = ev.pkt.fair.as_index() - 1;

        if (active && adv.kind == AdversaryKind::corrupt_upstream_macs) {
            for (size_t s = 0; s < own_slot; ++s)
                ev.pkt.fair.slots[s] =
                    AsSlot{rng[i].next_nibble(), rng[i].next_nibble()};
        }
        if (active && adv.kind == AdversaryKind::replay) {
            for (int c = 1; c < adv.replay_factor; ++c) {
                SimPacket copy = ev.pkt;
                if (adv.rerandomize_own_nonce) {
                    AsSlot& slot = copy.fair.slots[own_slot];
                    slot.nonce = rng[i].next_nibble();
                    slot.mac = slot_mac4(*marker[i], copy.net.payload_len,
                                         copy.fair.src_timestamp,
                                         copy.fair.seqno, slot.nonce);
                }
                res.replay_copies++;
                schedule(ev.time + topo.link_latency[i] + c * 1e-6, i + 1,
                         std::move(copy));
            }
        }
        schedule(ev.time + topo.link_latency[i], i + 1, std::move(ev.pkt));
    }

    const bool framing =
        dst_node.adversary.kind == AdversaryKind::frame_duplicate_evidence;
    const std::vector<PacketRecord>* stored = res.store.find(res.channel_id);
    res.protest_triggered =
        (res.dest.violations > 0 || framing) && stored && !stored->empty();

    if (res.protest_triggered) {
        double newest = stored->back().arrival_time;
        double ws = cfg.evidence_start < 0 ? -1e300
                                           : kSimEpoch + cfg.evidence_start;
        double we =
            cfg.evidence_end < 0 ? 1e300 : kSimEpoch + cfg.evidence_end;
        res.bundle = assemble_evidence(res.store, res.channel_id, policy, ws,
                                       we, newest + 1.0);
        if (framing) {
            // a framing destination presents every stored header twice
            std::vector<PacketRecord> copies = res.bundle.records;
            res.bundle.records.insert(res.bundle.records.end(), copies.begin(),
                                      copies.end());
            sort_evidence(res.bundle.records);
        }
        for (size_t i = 1; i < dest_pos; ++i) {
            const AsNode& node = topo.nodes[i];
            if (node.role != Role::transit_coop) continue;
            const AsKeys& keys = registry.at(node.asn);
            AdversaryKind k = node.adversary.kind;
            if (k == AdversaryKind::corrupt_upstream_macs ||
                k == AdversaryKind::inject) {
                // the AS that tampered denies everything rather than let
                // its own examination point at itself
                ComplaintResponse lie;
                lie.asn = node.asn;
                lie.admit = false;
                lie.sig = sign(keys.sig.priv, response_sign_input(lie));
                res.responses.push_back(std::move(lie));
            } else {
                std::vector<KeyEpoch> epochs{KeyEpoch{-1e300, keys.transit_key}};
                res.responses.push_back(examine_complaint(
                    node.asn, epochs, keys.sig.priv, res.bundle, registry,
                    cfg.slack));
            }
        }
        res.replay_groups = detect_replay(res.bundle);
        res.verdict = adjudicate(res.responses, res.bundle, registry);
    }

    Report& rep = res.report;
    rep.add("scenario.name", cfg.name);
    rep.add("scenario.seed", cfg.seed);
    if (!cfg.config_digest.empty())
        rep.add("scenario.config", cfg.config_digest);
    rep.add("scenario.mode", cfg.mode == FairMode::raw ? "raw"
                             : cfg.mode == FairMode::ipv6_eh
                                 ? "ipv6_eh"
                                 : "ipv6_eh_strict");
    rep.add("path.nodes", static_cast<uint64_t>(node_count));
    rep.add("path.cooperating", static_cast<uint64_t>(n_slots));
    rep.add("policy.cir", cfg.policy.cir);
    rep.add("policy.cbs", cfg.policy.cbs);
    rep.add("policy.duration", cfg.policy.duration);
    rep.add("packet.wire_bytes", static_cast<uint64_t>(wire_len));
    rep.add("sent.source", res.packets_sent);
    rep.add("sent.injected", res.injected_sent);
    rep.add("sent.replay_copies", res.replay_copies);
    for (size_t i = 0; i < node_count; ++i) {
        const std::string p = "hop." + std::to_string(i) + ".";
        const AsNode& n = topo.nodes[i];
        rep.add(p + "asn", static_cast<uint64_t>(n.asn));
        rep.add(p + "role", role_name(n.role));
        if (n.adversary.kind != AdversaryKind::none)
            rep.add(p + "adversary", adversary_name(n.adversary.kind));
        rep.add(p + "seen", res.hops[i].seen);
        rep.add(p + "forwarded", res.hops[i].forwarded);
        rep.add(p + "clock_drops", res.hops[i].clock_drops);
        rep.add(p + "malformed_drops", res.hops[i].malformed_drops);
    }
    rep.add("dest.accepted", res.dest.accepted);
    rep.add("dest.clock_drops", res.dest.clock_drops);
    rep.add("dest.icv_failures", res.dest.icv_failures);
    rep.add("dest.violations", res.dest.violations);
    rep.add("store.records", static_cast<uint64_t>(res.store.total()));
    rep.add("protest.triggered", res.protest_triggered);
    if (res.protest_triggered) {
        rep.add("protest.records",
                static_cast<uint64_t>(res.bundle.records.size()));
        rep.add("protest.replay_groups",
                static_cast<uint64_t>(res.replay_groups.size()));
        for (const ComplaintResponse& r : res.responses) {
            const std::string p = "response." + std::to_string(r.asn) + ".";
            rep.add(p + "admit", r.admit);
            rep.add(p + "mac_failures", static_cast<uint64_t>(r.mac_failures));
            rep.add(p + "mac_checked", static_cast<uint64_t>(r.mac_checked));
            rep.add(p + "tb_violations",
                    static_cast<uint64_t>(r.tb_violations));
        }
    }
    rep.add("verdict.outcome", outcome_name(res.verdict.outcome));
    if (res.verdict.interval.left >= 0) {
        rep.add("verdict.interval.left", res.verdict.interval.left);
        rep.add("verdict.interval.right", res.verdict.interval.right);
    }
    if (!res.verdict.admitting.empty()) {
        std::string admitting;
        for (uint32_t a : res.verdict.admitting) {
            if (!admitting.empty()) admitting += ",";
            admitting += std::to_string(a);
        }
        rep.add("verdict.admitting", admitting);
    }
    rep.finalize_hash();
    return res;
}

}  // namespace fair
