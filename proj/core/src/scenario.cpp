#include "fair/scenario.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace fair {
namespace {

using nlohmann::json;

size_t line_of(const std::string& text, size_t byte) {
    size_t line = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i)
        line += text[i] == '\n';
    return line;
}

void expect_keys(const json& obj, const char* where,
                 std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* a : allowed) known = known || item.key() == a;
        if (!known)
            throw ScenarioError(std::string("unknown key \"") + item.key() +
                                "\" in " + where);
    }
}

uint64_t require_uint(const json& j, const char* what, uint64_t max) {
    int64_t v;
    if (j.is_number_unsigned() && j.get<uint64_t>() <= uint64_t(max)) {
        return j.get<uint64_t>();
    } else if (j.is_number_integer() && (v = j.get<int64_t>()) >= 0 &&
               uint64_t(v) <= max) {
        return static_cast<uint64_t>(v);
    }
    throw ScenarioError(std::string(what) + " must be an integer in [0, " +
                        std::to_string(max) + "]");
}

double require_number(const json& j, const char* what) {
    if (!j.is_number())
        throw ScenarioError(std::string(what) + " must be a number");
    return j.get<double>();
}

Role parse_role(const std::string& s) {
    if (s == "source") return Role::source;
    if (s == "transit") return Role::transit_coop;
    if (s == "transit_noncoop") return Role::transit_noncoop;
    if (s == "destination") return Role::destination;
    throw ScenarioError("unknown role \"" + s + "\"");
}

AdversaryKind parse_kind(const std::string& s) {
    for (AdversaryKind k :
         {AdversaryKind::none, AdversaryKind::flood,
          AdversaryKind::corrupt_upstream_macs, AdversaryKind::replay,
          AdversaryKind::inject, AdversaryKind::timestamp_shift,
          AdversaryKind::frame_duplicate_evidence})
        if (s == adversary_name(k)) return k;
    throw ScenarioError("unknown adversary \"" + s + "\"");
}

FairMode parse_mode(const std::string& s) {
    if (s == "raw") return FairMode::raw;
    if (s == "ipv6_eh") return FairMode::ipv6_eh;
    if (s == "ipv6_eh_strict") return FairMode::ipv6_eh_strict;
    throw ScenarioError("unknown mode \"" + s + "\"");
}

AsNode parse_node(const json& jn) {
    if (!jn.is_object()) throw ScenarioError("path entries must be objects");
    expect_keys(jn, "a path node", {"asn", "role", "clock_offset",
                                    "adversary"});
    AsNode n;
    n.asn = static_cast<uint32_t>(
        require_uint(jn.at("asn"), "asn", 0xffffffffULL));
    n.role = parse_role(jn.at("role").get<std::string>());
    if (auto it = jn.find("clock_offset"); it != jn.end())
        n.clock_offset = require_number(*it, "clock_offset");
    if (auto it = jn.find("adversary"); it != jn.end()) {
        const json& ja = *it;
        if (!ja.is_object())
            throw ScenarioError("adversary must be an object");
        expect_keys(ja, "an adversary",
                    {"kind", "rate_multiplier", "replay_factor",
                     "rerandomize_own_nonce", "window"});
        AdversaryBehavior& a = n.adversary;
        a.kind = parse_kind(ja.at("kind").get<std::string>());
        if (auto jt = ja.find("rate_multiplier"); jt != ja.end())
            a.rate_multiplier = require_number(*jt, "rate_multiplier");
        if (auto jt = ja.find("replay_factor"); jt != ja.end())
            a.replay_factor = static_cast<int>(
                require_uint(*jt, "replay_factor", 16));
        if (auto jt = ja.find("rerandomize_own_nonce"); jt != ja.end())
            a.rerandomize_own_nonce = jt->get<bool>();
        if (auto jt = ja.find("window"); jt != ja.end()) {
            if (!jt->is_array() || jt->size() != 2)
                throw ScenarioError("window must be [start, end]");
            a.window_start = require_number((*jt)[0], "window start");
            a.window_end = require_number((*jt)[1], "window end");
        }
    }
    return n;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text,
                              const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(origin + ":" +
                            std::to_string(line_of(text, e.byte)) +
                            ": invalid JSON");
    }
    try {
        if (!root.is_object())
            throw ScenarioError("top level must be an object");
        expect_keys(root, "the scenario",
                    {"name", "seed", "mode", "policy", "traffic", "path",
                     "links", "evidence", "slack"});

        ScenarioConfig cfg;
        if (auto it = root.find("name"); it != root.end())
            cfg.name = it->get<std::string>();
        if (auto it = root.find("seed"); it != root.end())
            cfg.seed = require_uint(*it, "seed", ~0ULL);
        if (auto it = root.find("mode"); it != root.end())
            cfg.mode = parse_mode(it->get<std::string>());
        if (auto it = root.find("slack"); it != root.end())
            cfg.slack = require_number(*it, "slack");

        if (auto it = root.find("policy"); it != root.end()) {
            const json& jp = *it;
            expect_keys(jp, "the policy",
                        {"cir", "cbs", "duration", "expiration"});
            if (auto jt = jp.find("cir"); jt != jp.end())
                cfg.policy.cir = require_number(*jt, "cir");
            if (auto jt = jp.find("cbs"); jt != jp.end())
                cfg.policy.cbs = require_number(*jt, "cbs");
            if (auto jt = jp.find("duration"); jt != jp.end())
                cfg.policy.duration = require_number(*jt, "duration");
            if (auto jt = jp.find("expiration"); jt != jp.end())
                cfg.policy.expiration = require_number(*jt, "expiration");
        }
        if (auto it = root.find("traffic"); it != root.end()) {
            const json& jt = *it;
            expect_keys(jt, "the traffic model",
                        {"rate_fraction", "packets", "payload_len"});
            if (auto jv = jt.find("rate_fraction"); jv != jt.end())
                cfg.traffic.rate_fraction =
                    require_number(*jv, "rate_fraction");
            if (auto jv = jt.find("packets"); jv != jt.end())
                cfg.traffic.packets = static_cast<uint32_t>(
                    require_uint(*jv, "packets", 0xffffffffULL));
            if (auto jv = jt.find("payload_len"); jv != jt.end())
                cfg.traffic.payload_len = static_cast<uint16_t>(
                    require_uint(*jv, "payload_len", 0xffffULL));
        }

        auto it = root.find("path");
        if (it == root.end() || !it->is_array())
            throw ScenarioError("path must be an array of nodes");
        for (const json& jn : *it)
            cfg.topology.nodes.push_back(parse_node(jn));

        if (auto jl = root.find("links"); jl != root.end()) {
            if (!jl->is_array())
                throw ScenarioError("links must be an array of latencies");
            for (const json& l : *jl)
                cfg.topology.link_latency.push_back(
                    require_number(l, "link latency"));
        } else if (cfg.topology.nodes.size() > 1) {
            cfg.topology.link_latency.assign(cfg.topology.nodes.size() - 1,
                                             0.01);
        }
        if (auto je = root.find("evidence"); je != root.end()) {
            if (!je->is_array() || je->size() != 2)
                throw ScenarioError("evidence must be [start, end]");
            cfg.evidence_start = require_number((*je)[0], "evidence start");
            cfg.evidence_end = require_number((*je)[1], "evidence end");
        }

        cfg.validate();
        return cfg;
    } catch (const json::exception& e) {
        throw ScenarioError(origin + ": " + e.what());
    } catch (const ScenarioError& e) {
        throw ScenarioError(origin + ": " + e.what());
    }
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    ScenarioConfig cfg = parse_scenario(text, path);
    Digest32 d =
        hash32(reinterpret_cast<const uint8_t*>(text.data()), text.size());
    cfg.config_digest = to_hex(d.data(), d.size());
    return cfg;
}

}  // namespace fair
