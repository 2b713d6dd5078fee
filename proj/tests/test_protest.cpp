#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "fair/lcg.hpp"
#include "fair/protest.hpp"

using namespace fair;

namespace {

// Hand-built two-transit world; records are crafted exactly as the
// forwarding path would have marked them.
struct World {
    KeyRegistry reg;
    uint32_t src = 100, dst = 600;
    std::vector<uint32_t> path = {200, 300};
    PolicyPacket policy;
    SymKey k_sd{};
    Lcg64 rng{97};

    explicit World(uint64_t cir = 1000, uint64_t cbs = 1000) {
        for (uint32_t asn : {100u, 200u, 300u, 600u})
            reg.add(KeyRegistry::derive(11, asn));
        policy = create_policy(src, 4000, path, reg);
        for (uint32_t asn : path)
            transit_endorse(policy, asn, reg.at(asn).control_key);
        dest_complete(policy, dst, 4000 + 86400, cir, cbs, reg);
    }

    PacketRecord record(uint16_t ts, uint32_t seqno, double arrival,
                        uint16_t payload_len = 400) {
        PacketRecord r;
        r.net.version = 6;
        r.net.payload_len = payload_len;
        r.net.src_addr = make_addr(src);
        r.net.dst_addr = make_addr(dst);
        r.fair.src_timestamp = ts;
        r.fair.seqno = seqno;
        r.fair.icv = icv8(Aes128(k_sd), payload_len, ts, seqno);
        r.fair.slots.resize(path.size());
        for (size_t i = 0; i < path.size(); ++i) {
            r.fair.slots[i].nonce = rng.next_nibble();
            r.fair.slots[i].mac =
                slot_mac4(Aes128(reg.at(path[i]).transit_key), payload_len,
                          ts, seqno, r.fair.slots[i].nonce);
        }
        r.fair.set_as_index(static_cast<uint8_t>(path.size()));
        r.arrival_time = arrival;
        return r;
    }

    EvidenceBundle bundle_of(std::vector<PacketRecord> records,
                             double complaint = 5000) {
        EvidenceBundle b;
        b.policy = policy;
        b.records = std::move(records);
        b.complaint_time = complaint;
        sort_evidence(b.records);
        return b;
    }

    ComplaintResponse examined(uint32_t asn, const EvidenceBundle& b,
                               double slack = 0) {
        std::vector<KeyEpoch> epochs = {{-1e300, reg.at(asn).transit_key}};
        return examine_complaint(asn, epochs, reg.at(asn).sig.priv, b, reg,
                                 slack);
    }

    // A colluder's scripted denial: no admission, fabricated clean
    // counters, but a genuine signature.
    ComplaintResponse lying_denial(uint32_t asn) {
        ComplaintResponse r;
        r.asn = asn;
        r.admit = false;
        r.mac_checked = 0;
        r.sig = sign(reg.at(asn).sig.priv, response_sign_input(r));
        return r;
    }
};

}  // namespace

TEST_CASE("evidence assembly windows, sorts, and bounds staleness") {
    World w;
    HeaderStore store;
    Digest32 ch{};
    ch.fill(3);
    for (int i = 0; i < 6; ++i)
        store.append(ch, w.record(4096, static_cast<uint32_t>(5 - i),
                                  4000.0 + i));

    EvidenceBundle b = assemble_evidence(store, ch, w.policy, 4001, 4004, 4500);
    CHECK(b.records.size() == 4);
    for (const PacketRecord& r : b.records) {
        CHECK(r.arrival_time >= 4001);
        CHECK(r.arrival_time <= 4004);
    }
    CHECK(std::is_sorted(b.records.begin(), b.records.end(),
                         [](const PacketRecord& a, const PacketRecord& c) {
                             return a.fair.seqno < c.fair.seqno;
                         }));

    CHECK_THROWS_AS(
        assemble_evidence(store, ch, w.policy, 9000, 9999, 9999),
        std::invalid_argument);
    CHECK_THROWS_AS(
        assemble_evidence(store, ch, w.policy, 4001, 4004,
                          4005 + HeaderStore::kRetentionSeconds + 10),
        StaleEvidenceError);
}

TEST_CASE("canonical evidence order holds after any mutation plus re-sort") {
    World w;
    std::vector<PacketRecord> recs;
    for (int i = 0; i < 20; ++i)
        recs.push_back(w.record(static_cast<uint16_t>(4096 + i / 7),
                                static_cast<uint32_t>(i % 7), 4000.0 + i));
    std::reverse(recs.begin(), recs.end());
    sort_evidence(recs);
    for (size_t i = 1; i < recs.size(); ++i) {
        auto key = [](const PacketRecord& r) {
            return std::make_pair(r.fair.src_timestamp, r.fair.seqno);
        };
        CHECK(key(recs[i - 1]) <= key(recs[i]));
    }
}

TEST_CASE("examining conforming evidence yields a signed denial") {
    World w;
    std::vector<PacketRecord> recs;
    for (int i = 0; i < 10; ++i)  // 2 x 436 B per second, under 1000 B/s
        recs.push_back(w.record(static_cast<uint16_t>(4096 + i / 2),
                                static_cast<uint32_t>(i), 4000.0 + 0.5 * i));
    EvidenceBundle b = w.bundle_of(std::move(recs));

    for (uint32_t asn : w.path) {
        ComplaintResponse r = w.examined(asn, b);
        CHECK_FALSE(r.admit);
        CHECK(r.mac_checked == 10);
        CHECK(r.mac_failures == 0);
        CHECK(r.tb_violations == 0);
        CHECK(verify_response(r, w.reg));
        ComplaintResponse forged = r;
        forged.admit = true;
        CHECK_FALSE(verify_response(forged, w.reg));
        forged = r;
        forged.mac_failures += 1;
        CHECK_FALSE(verify_response(forged, w.reg));
    }
}

TEST_CASE("overdriven evidence is admitted with violations counted") {
    World w;
    std::vector<PacketRecord> recs;
    for (int i = 0; i < 12; ++i)  // 4 x 436 B per stamped second
        recs.push_back(w.record(static_cast<uint16_t>(4096 + i / 4),
                                static_cast<uint32_t>(i), 4000.0 + 0.25 * i));
    EvidenceBundle b = w.bundle_of(std::move(recs));
    ComplaintResponse r = w.examined(w.path[0], b);
    CHECK(r.admit);
    CHECK(r.tb_violations > 0);
    CHECK(r.mac_failures == 0);
}

TEST_CASE("corrupted slots fail only their own as's recheck") {
    World w;
    std::vector<PacketRecord> recs;
    for (int i = 0; i < 16; ++i)
        recs.push_back(w.record(static_cast<uint16_t>(4096 + i / 2),
                                static_cast<uint32_t>(i), 4000.0 + 0.5 * i));
    int corrupted = 0;
    for (size_t i = 0; i < recs.size(); i += 2) {
        recs[i].fair.slots[0].mac ^= 0x5;  // first transit's slot
        ++corrupted;
    }
    EvidenceBundle b = w.bundle_of(std::move(recs));

    ComplaintResponse hit = w.examined(w.path[0], b);
    CHECK(hit.mac_failures == static_cast<uint32_t>(corrupted));
    ComplaintResponse clean = w.examined(w.path[1], b);
    CHECK(clean.mac_failures == 0);
}

TEST_CASE("key epochs tolerate three seconds of boundary skew") {
    World w;
    uint32_t asn = w.path[1];
    SymKey k_old = w.reg.at(asn).transit_key;
    SymKey k_new{};
    k_new.fill(0x77);
    double rotation = 4100;
    std::vector<KeyEpoch> epochs = {{-1e300, k_old}, {rotation, k_new}};

    auto with_key = [&](const SymKey& k, uint16_t ts, uint32_t seq,
                        double arrival) {
        PacketRecord r = w.record(ts, seq, arrival);
        r.fair.slots[1].mac = slot_mac4(Aes128(k), r.net.payload_len, ts, seq,
                                        r.fair.slots[1].nonce);
        return r;
    };

    std::vector<PacketRecord> recs;
    recs.push_back(with_key(k_old, 4096, 0, rotation - 10));  // old era
    recs.push_back(with_key(k_new, 4200, 1, rotation + 10));  // new era
    recs.push_back(with_key(k_old, 4150, 2, rotation + 2));   // skewed stamp
    EvidenceBundle b = w.bundle_of(std::move(recs));
    ComplaintResponse r = examine_complaint(asn, epochs,
                                            w.reg.at(asn).sig.priv, b, w.reg);
    CHECK(r.mac_failures == 0);

    std::vector<PacketRecord> late;
    late.push_back(with_key(k_old, 4150, 3, rotation + 5));  // beyond skew
    EvidenceBundle b2 = w.bundle_of(std::move(late));
    ComplaintResponse r2 = examine_complaint(asn, epochs,
                                             w.reg.at(asn).sig.priv, b2, w.reg);
    CHECK(r2.mac_failures == 1);
}

TEST_CASE("records past the policy expiration carry no weight") {
    World w;
    double expiry = static_cast<double>(w.policy.dest->expiration);
    std::vector<PacketRecord> recs;
    recs.push_back(w.record(4096, 0, expiry - 5));
    recs.push_back(w.record(4097, 1, expiry + 5));
    EvidenceBundle b = w.bundle_of(std::move(recs), expiry + 6);
    ComplaintResponse r = w.examined(w.path[0], b);
    CHECK(r.mac_checked == 1);
}

TEST_CASE("evidence policing meters embedded seconds, not arrival times") {
    World w;
    std::vector<PacketRecord> recs;
    // Three 436-byte packets stamped in the same second: the third
    // exceeds the 1000-byte burst no matter when they arrived.
    for (int i = 0; i < 3; ++i)
        recs.push_back(w.record(4096, static_cast<uint32_t>(i),
                                4000.0 + 40.0 * i));
    sort_evidence(recs);
    EvidencePolicing p = police_evidence(recs, 1000, 1000);
    CHECK(p.violations == 1);
    REQUIRE(p.violating.size() == 1);
    CHECK(p.violating[0] == 2);

    // One second of slack widens the allowance enough to conform.
    CHECK(police_evidence(recs, 1000, 1000, 1.0).violations == 0);
}

TEST_CASE("duplicate stamps group and localize by the nonce prefix") {
    World w;
    std::vector<PacketRecord> recs;
    recs.push_back(w.record(4096, 1, 4000.0));
    recs.push_back(w.record(4096, 2, 4000.1));
    PacketRecord copy = recs[0];
    copy.arrival_time = 4000.2;
    copy.fair.slots[1].nonce ^= 0x9;  // re-marked downstream of transit 1
    recs.push_back(copy);
    EvidenceBundle b = w.bundle_of(std::move(recs));

    std::vector<DuplicateGroup> groups = detect_replay(b);
    REQUIRE(groups.size() == 1);
    CHECK(groups[0].ts == 4096);
    CHECK(groups[0].seqno == 1);
    CHECK(groups[0].indices.size() == 2);

    // Nonces agree through slot 0 and diverge at slot 1: the duplication
    // happened between the first and second cooperating transit.
    CHECK(localize_adversary(b, groups[0], w.path.size()) == Interval{1, 2});
    CHECK(localize_overall(b, groups, w.path.size()) == Interval{1, 2});
}

TEST_CASE("identical copies everywhere localize to the complainant") {
    World w;
    std::vector<PacketRecord> recs;
    recs.push_back(w.record(4096, 1, 4000.0));
    PacketRecord copy = recs[0];
    copy.arrival_time = 4000.3;
    recs.push_back(copy);  // every slot identical: duplicated at the end
    EvidenceBundle b = w.bundle_of(std::move(recs));
    auto groups = detect_replay(b);
    REQUIRE(groups.size() == 1);
    CHECK(localize_adversary(b, groups[0], w.path.size()) == Interval{2, 3});

    Verdict v = adjudicate({}, b, w.reg);
    CHECK(v.outcome == Outcome::framing_suspected);
}

TEST_CASE("chance nonce collisions past a divergence never extend the prefix") {
    World w;
    std::vector<PacketRecord> recs;
    recs.push_back(w.record(4096, 1, 4000.0));
    PacketRecord copy = recs[0];
    copy.arrival_time = 4000.2;
    copy.fair.slots[0].nonce ^= 0x3;  // diverges at the first transit
    // slots[1] left identical, as a 1-in-16 collision would be
    recs.push_back(copy);
    EvidenceBundle b = w.bundle_of(std::move(recs));
    auto groups = detect_replay(b);
    REQUIRE(groups.size() == 1);
    CHECK(localize_adversary(b, groups[0], w.path.size()) == Interval{0, 1});
}

TEST_CASE("adjudication: all admissions with clean macs blame the source") {
    World w;
    std::vector<PacketRecord> recs;
    for (int i = 0; i < 12; ++i)
        recs.push_back(w.record(static_cast<uint16_t>(4096 + i / 4),
                                static_cast<uint32_t>(i), 4000.0 + 0.25 * i));
    EvidenceBundle b = w.bundle_of(std::move(recs));
    std::vector<ComplaintResponse> rs = {w.examined(200, b),
                                         w.examined(300, b)};
    REQUIRE(rs[0].admit);
    REQUIRE(rs[1].admit);
    Verdict v = adjudicate(rs, b, w.reg);
    CHECK(v.outcome == Outcome::source_guilty);
    CHECK(v.source_asn == 100);
    CHECK(v.admitting == std::vector<uint32_t>{200, 300});
}

TEST_CASE("adjudication: a denying prefix before admissions brackets the liar") {
    World w;
    std::vector<PacketRecord> recs;
    for (int i = 0; i < 12; ++i)
        recs.push_back(w.record(static_cast<uint16_t>(4096 + i / 4),
                                static_cast<uint32_t>(i), 4000.0 + 0.25 * i));
    EvidenceBundle b = w.bundle_of(std::move(recs));
    std::vector<ComplaintResponse> rs = {w.lying_denial(200),
                                         w.examined(300, b)};
    REQUIRE(rs[1].admit);
    Verdict v = adjudicate(rs, b, w.reg);
    CHECK(v.outcome == Outcome::enroute_adversary);
    CHECK(v.interval == Interval{1, 2});
    CHECK(v.admitting == std::vector<uint32_t>{300});
}

TEST_CASE("adjudication: conforming evidence is rejected outright") {
    World w;
    std::vector<PacketRecord> recs;
    for (int i = 0; i < 8; ++i)
        recs.push_back(w.record(static_cast<uint16_t>(4096 + i / 2),
                                static_cast<uint32_t>(i), 4000.0 + 0.5 * i));
    EvidenceBundle b = w.bundle_of(std::move(recs));
    std::vector<ComplaintResponse> rs = {w.examined(200, b),
                                         w.examined(300, b)};
    Verdict v = adjudicate(rs, b, w.reg);
    CHECK(v.outcome == Outcome::rejected);
    CHECK(v.admitting.empty());
}

TEST_CASE("adjudication: admissions sandwiched by denials look like framing") {
    World w;
    std::vector<PacketRecord> recs;
    for (int i = 0; i < 12; ++i)
        recs.push_back(w.record(static_cast<uint16_t>(4096 + i / 4),
                                static_cast<uint32_t>(i), 4000.0 + 0.25 * i));
    EvidenceBundle b = w.bundle_of(std::move(recs));
    std::vector<ComplaintResponse> rs = {w.examined(200, b),
                                         w.lying_denial(300)};
    REQUIRE(rs[0].admit);
    Verdict v = adjudicate(rs, b, w.reg);
    CHECK(v.outcome == Outcome::framing_suspected);
}

TEST_CASE("adjudication: mass mac failures without admissions point downstream") {
    World w;
    std::vector<PacketRecord> recs;
    for (int i = 0; i < 16; ++i) {
        PacketRecord r = w.record(static_cast<uint16_t>(4096 + i / 2),
                                  static_cast<uint32_t>(i), 4000.0 + 0.5 * i);
        r.fair.slots[0].mac ^= 0x7;  // transit 1's marks destroyed
        r.fair.slots[1].mac ^= 0x7;  // transit 2's marks destroyed
        recs.push_back(r);
    }
    EvidenceBundle b = w.bundle_of(std::move(recs));
    std::vector<ComplaintResponse> rs = {w.examined(200, b),
                                         w.examined(300, b)};
    REQUIRE(rs[0].failure_fraction() > 0.5);
    Verdict v = adjudicate(rs, b, w.reg);
    CHECK(v.outcome == Outcome::enroute_adversary);
    CHECK(v.interval == Interval{2, 3});
}

TEST_CASE("adjudication refuses unsigned responses") {
    World w;
    std::vector<PacketRecord> recs = {w.record(4096, 0, 4000.0)};
    EvidenceBundle b = w.bundle_of(std::move(recs));
    ComplaintResponse fake;
    fake.asn = 200;
    fake.admit = true;
    fake.sig = ByteVec(64, 1);
    CHECK_THROWS_AS(adjudicate({fake}, b, w.reg), PolicyError);
}
