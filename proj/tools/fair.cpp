#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <CLI11.hpp>

#include "fair/analysis.hpp"
#include "fair/bench.hpp"
#include "fair/scenario.hpp"

namespace {

void add_trace_flags(CLI::App* cmd, fair::TraceModel& m) {
    cmd->add_option("--rate", m.rate_gbps, "link rate in Gbps");
    cmd->add_option("--v4-size", m.v4_size, "mean v4 packet bytes");
    cmd->add_option("--v4-share", m.v4_share, "v4 share in [0, 1]");
    cmd->add_option("--v6-size", m.v6_size, "mean v6 packet bytes");
    cmd->add_option("--hops", m.hops, "cooperating transits on the path");
}

void report_overhead(fair::Report& rep, const std::string& prefix,
                     const fair::TraceModel& m) {
    fair::OverheadResult r = fair::overhead(m);
    rep.add(prefix + "rate_gbps", m.rate_gbps);
    rep.add(prefix + "v4_size", m.v4_size);
    rep.add(prefix + "v4_share", m.v4_share);
    rep.add(prefix + "v6_size", m.v6_size);
    rep.add(prefix + "hops", static_cast<uint64_t>(m.hops));
    rep.add(prefix + "v4_pct", 100.0 * r.v4_overhead);
    rep.add(prefix + "v6_pct", 100.0 * r.v6_overhead);
    rep.add(prefix + "packet_weighted_pct", 100.0 * r.packet_weighted);
    rep.add(prefix + "byte_weighted_pct", 100.0 * r.byte_weighted);
}

int cmd_run(const std::string& file, const uint64_t* seed_override,
            const std::string& out_dir) {
    fair::ScenarioConfig cfg = fair::load_scenario(file);
    if (seed_override) cfg.seed = *seed_override;
    fair::ScenarioResult res = fair::run_scenario(cfg);
    std::fputs(res.report.to_text().c_str(), stdout);
    if (!out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(out_dir);
        const fs::path base = fs::path(out_dir) / cfg.name;
        std::ofstream txt(base.string() + ".report.txt", std::ios::binary);
        txt << res.report.to_text();
        std::ofstream js(base.string() + ".report.json", std::ios::binary);
        js << res.report.to_json() << "\n";
        if (!txt || !js)
            throw std::runtime_error("cannot write reports under " + out_dir);
        if (res.protest_triggered)
            fair::write_dump_file(base.string() + ".evidence.fairdump",
                                  res.bundle.records);
    }
    return 0;
}

int cmd_inspect(const std::string& file) {
    std::vector<fair::PacketRecord> records = fair::read_dump_file(file);
    std::printf("%zu records\n", records.size());
    if (!records.empty())
        std::printf("%6s %14s %6s %8s %4s %3s %5s  %s\n", "idx", "arrival",
                    "ts", "seqno", "icv", "sb", "next", "slots nonce/mac");
    for (size_t i = 0; i < records.size(); ++i) {
        const fair::PacketRecord& r = records[i];
        std::string slots;
        for (const fair::AsSlot& s : r.fair.slots) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "%x/%x ", s.nonce, s.mac);
            slots += buf;
        }
        std::printf("%6zu %14.3f %6u %8u 0x%02x %3u %5u  %s\n", i,
                    r.arrival_time, r.fair.src_timestamp, r.fair.seqno,
                    r.fair.icv, r.fair.suspicious() ? 1 : 0,
                    r.fair.as_index(), slots.c_str());
    }
    fair::EvidenceBundle bundle;
    bundle.records = records;
    std::vector<fair::DuplicateGroup> groups = fair::detect_replay(bundle);
    std::printf("%zu duplicate groups\n", groups.size());
    for (const fair::DuplicateGroup& g : groups) {
        std::printf("  ts=%u seqno=%u records=[", g.ts, g.seqno);
        for (size_t k = 0; k < g.indices.size(); ++k)
            std::printf("%s%zu", k ? "," : "", g.indices[k]);
        std::printf("]\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"forwarding accountability toolkit"};
    app.require_subcommand(1);

    std::string scen_file, out_dir;
    uint64_t seed = 0;
    CLI::App* run = app.add_subcommand("run", "run a scenario file");
    run->add_option("file", scen_file, "scenario JSON file")->required();
    CLI::Option* seed_opt =
        run->add_option("--seed", seed, "override the scenario seed");
    run->add_option("--out", out_dir, "directory for reports and evidence");

    fair::TraceModel model = fair::backbone_traces()[0];
    bool presets = false;
    CLI::App* ov = app.add_subcommand(
        "overhead", "bandwidth overhead of the marking bytes");
    add_trace_flags(ov, model);
    ov->add_flag("--traces", presets, "print the three backbone presets");

    fair::TraceModel smodel = fair::backbone_traces()[0];
    uint64_t channels = 50000;
    double rotation = 60, retention_hours = 12;
    unsigned keys_per_epoch = 2;
    CLI::App* st = app.add_subcommand("storage", "storage calculators");
    add_trace_flags(st, smodel);
    st->add_option("--duration", smodel.duration, "seconds of traffic stored");
    st->add_option("--channels", channels, "active channels at one AS");
    st->add_option("--rotation-seconds", rotation, "marking-key epoch length");
    st->add_option("--keys-per-epoch", keys_per_epoch,
                   "keys retained per epoch");
    st->add_option("--retention-hours", retention_hours,
                   "complaint margin in hours");

    fair::BenchConfig bcfg;
    CLI::App* be =
        app.add_subcommand("bench", "marking pipeline vs plain forwarding");
    be->add_option("--packets", bcfg.packets, "packets per pass");
    be->add_option("--hops", bcfg.hops, "slots per frame");
    be->add_option("--workers", bcfg.workers, "isolated worker threads");
    be->add_option("--pkt-size", bcfg.pkt_size, "frame bytes");
    be->add_option("--fib", bcfg.fib_entries, "FIB entries per worker");
    be->add_option("--seed", bcfg.seed, "traffic seed");

    std::string dump_file;
    CLI::App* in = app.add_subcommand("inspect", "decode an evidence dump");
    in->add_option("file", dump_file, "FAIRDUMP file")->required();

    double cap_pkt = 413, cap_window = 3;
    unsigned cap_bits = 24;
    CLI::App* cap = app.add_subcommand(
        "capacity", "rate at which the sequence space forces repeats");
    cap->add_option("--pkt-size", cap_pkt, "mean packet bytes");
    cap->add_option("--window", cap_window, "freshness window seconds");
    cap->add_option("--seqno-bits", cap_bits, "sequence number width");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (run->parsed())
            return cmd_run(scen_file, seed_opt->count() ? &seed : nullptr,
                           out_dir);
        if (ov->parsed()) {
            fair::Report rep;
            if (presets) {
                for (const fair::TraceModel& m : fair::backbone_traces())
                    report_overhead(rep, m.name + ".", m);
            } else {
                report_overhead(rep, "overhead.", model);
            }
            std::fputs(rep.to_text().c_str(), stdout);
            return 0;
        }
        if (st->parsed()) {
            fair::Report rep;
            rep.add("dest_store.duration", smodel.duration);
            rep.add("dest_store.bytes", fair::storage_dest_bytes(smodel));
            rep.add("dest_store.gb",
                    fair::storage_dest_bytes(smodel) / 1e9);
            rep.add("channel_keys.channels", channels);
            rep.add("channel_keys.bytes",
                    fair::storage_channel_bytes(channels));
            rep.add("rotation.epoch_seconds", rotation);
            rep.add("rotation.keys_per_epoch",
                    static_cast<uint64_t>(keys_per_epoch));
            rep.add("rotation.retention_hours", retention_hours);
            rep.add("rotation.bytes",
                    fair::storage_rotation_bytes(rotation, keys_per_epoch,
                                                 retention_hours * 3600));
            std::fputs(rep.to_text().c_str(), stdout);
            return 0;
        }
        if (be->parsed()) {
            fair::BenchResult r = fair::run_bench(bcfg);
            fair::Report rep;
            rep.add("bench.packets", bcfg.packets);
            rep.add("bench.workers", static_cast<uint64_t>(bcfg.workers));
            rep.add("bench.pkt_size", static_cast<uint64_t>(bcfg.pkt_size));
            rep.add("bench.aes_hw", r.aes_hw);
            rep.add("bench.baseline_pps", r.baseline_pps);
            rep.add("bench.fair_pps", r.fair_pps);
            rep.add("bench.overhead_pct", 100.0 * r.overhead);
            rep.add("bench.wall_seconds", r.wall_seconds);
            rep.add("bench.wall_pps", bcfg.packets / r.wall_seconds);
            std::fputs(rep.to_text().c_str(), stdout);
            return 0;
        }
        if (in->parsed()) return cmd_inspect(dump_file);
        if (cap->parsed()) {
            if (cap_bits < 1 || cap_bits > 52)
                throw std::invalid_argument("seqno width must be in [1, 52]");
            fair::Report rep;
            rep.add("capacity.pkt_bytes", cap_pkt);
            rep.add("capacity.window_seconds", cap_window);
            rep.add("capacity.seqno_bits", static_cast<uint64_t>(cap_bits));
            rep.add("capacity.gbps",
                    fair::replay_capacity_gbps(
                        cap_pkt, cap_window,
                        static_cast<double>(uint64_t(1) << cap_bits)));
            std::fputs(rep.to_text().c_str(), stdout);
            return 0;
        }
    } catch (const fair::ScenarioError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const fair::DecodeError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const fair::PolicyError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
