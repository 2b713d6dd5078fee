#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fair/sim.hpp"

using namespace fair;

namespace {

ScenarioConfig line_config(size_t coop_transits, uint64_t seed = 1) {
    ScenarioConfig cfg;
    cfg.name = "unit";
    cfg.seed = seed;
    cfg.policy.duration = 2;
    AsNode src{100, Role::source, 0.0, {}};
    cfg.topology.nodes.push_back(src);
    for (size_t i = 0; i < coop_transits; ++i) {
        AsNode t{200 + 100 * static_cast<uint32_t>(i), Role::transit_coop,
                 0.0, {}};
        cfg.topology.nodes.push_back(t);
    }
    AsNode dst{900, Role::destination, 0.0, {}};
    cfg.topology.nodes.push_back(dst);
    cfg.topology.link_latency.assign(cfg.topology.nodes.size() - 1, 0.01);
    return cfg;
}

}  // namespace

TEST_CASE("benign line scenario delivers everything cleanly") {
    ScenarioConfig cfg = line_config(3);
    ScenarioResult r = run_scenario(cfg);
    CHECK(r.packets_sent > 100);
    CHECK(r.dest.accepted == r.packets_sent);
    CHECK(r.dest.clock_drops == 0);
    CHECK(r.dest.icv_failures == 0);
    CHECK(r.dest.violations == 0);
    for (const HopCounters& h : r.hops) {
        CHECK(h.clock_drops == 0);
        CHECK(h.malformed_drops == 0);
        CHECK(h.seen == h.forwarded);
    }
    CHECK_FALSE(r.protest_triggered);
    CHECK(r.verdict.outcome == Outcome::none);
    CHECK(r.store.total() == r.packets_sent);
    CHECK(r.report.find("determinism.hash") != nullptr);
}

TEST_CASE("clock offsets and latency inside the margin drop nothing") {
    ScenarioConfig cfg = line_config(4);
    cfg.topology.nodes[0].clock_offset = 0.5;
    cfg.topology.nodes[1].clock_offset = -0.5;
    cfg.topology.nodes[3].clock_offset = 0.25;
    cfg.topology.nodes.back().clock_offset = -0.4;
    cfg.topology.link_latency.assign(5, 0.2);  // one second end to end
    ScenarioResult r = run_scenario(cfg);
    CHECK(r.dest.accepted == r.packets_sent);
    CHECK(r.dest.clock_drops == 0);
    CHECK(r.dest.icv_failures == 0);
}

TEST_CASE("identical seeds reproduce the report byte for byte") {
    ScenarioConfig cfg = line_config(2, 42);
    std::string a = run_scenario(cfg).report.to_text();
    std::string b = run_scenario(cfg).report.to_text();
    CHECK(a == b);

    ScenarioConfig other = line_config(2, 43);
    CHECK(run_scenario(other).report.to_text() != a);
}

TEST_CASE("non-cooperating transits relay without marking") {
    ScenarioConfig cfg = line_config(2);
    AsNode bystander{700, Role::transit_noncoop, 0.0, {}};
    cfg.topology.nodes.insert(cfg.topology.nodes.begin() + 2, bystander);
    cfg.topology.link_latency.assign(cfg.topology.nodes.size() - 1, 0.01];
    ScenarioResult r = run_scenario(cfg);
    CHECK(r.dest.accepted == r.packets_sent);
    // Slots exist only for the two cooperating transits.
    const std::vector<PacketRecord>* recs = r.store.find(r.channel_id);
    REQUIRE(recs != nullptr);
    REQUIRE_FALSE(recs->empty());
    CHECK(recs->front().fair.slots.size() == 2);
    CHECK(r.policy.source.path == std::vector<uint32_t>{200, 300});
}

TEST_CASE("flooding source is policed live and convicted in protest") {
    ScenarioConfig cfg = line_config(2);
    cfg.topology.nodes[0].adversary.kind = AdversaryKind::flood;
    cfg.topology.nodes[0].adversary.rate_multiplier = 2.0;
    ScenarioResult r = run_scenario(cfg);
    CHECK(r.dest.violations > 0);
    CHECK(r.protest_triggered);
    CHECK(r.verdict.outcome == Outcome::source_guilty);
    CHECK(r.verdict.source_asn == 100);
    CHECK(r.responses.size() == 2);
    for (const ComplaintResponse& resp : r.responses) CHECK(resp.admit);
}

TEST_CASE("topology validation rejects malformed inputs") {
    ScenarioConfig cfg = line_config(2);
    cfg.topology.link_latency.pop_back();
    CHECK_THROWS_AS(run_scenario(cfg), ScenarioError);

    cfg = line_config(2);
    cfg.topology.nodes[1].clock_offset = 0.6;
    CHECK_THROWS_AS(run_scenario(cfg), ScenarioError);

    cfg = line_config(2);
    cfg.topology.nodes[1].adversary.kind = AdversaryKind::flood;
    CHECK_THROWS_AS(run_scenario(cfg), ScenarioError);  // flood needs a source

    cfg = line_config(2);
    cfg.topology.nodes[2].asn = cfg.topology.nodes[1].asn;
    CHECK_THROWS_AS(run_scenario(cfg), ScenarioError);

    cfg = line_config(2);
    cfg.policy.cir = -5;
    CHECK_THROWS_AS(run_scenario(cfg), ScenarioError);
}

TEST_CASE("report carries the scenario identity and hop table") {
    ScenarioConfig cfg = line_config(2, 5);
    ScenarioResult r = run_scenario(cfg);
    const std::string* name = r.report.find("scenario.name");
    REQUIRE(name != nullptr);
    CHECK(*name == "unit");
    CHECK(r.report.find("hop.0.asn") != nullptr);
    CHECK(r.report.find("dest.accepted") != nullptr);
    CHECK(r.report.find("path.cooperating") != nullptr);
}
