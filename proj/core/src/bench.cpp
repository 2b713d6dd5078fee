#include "fair/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <stdexcept>
#include <thread>
#include <vector>

#include "fair/dataplane.hpp"
#include "fair/lcg.hpp"
#include "fair/wire.hpp"

namespace fair {
namespace {

// Both passes run the same store-and-forward pipeline: parse the network
// and marking headers into structs, look the destination up in the
// forwarding table, re-serialize, and copy the frame onto a transmit
// ring. The marked pass adds exactly the per-hop marking steps on top:
// freshness check against a cached current second, nonce draw, one MAC,
// slot write, pointer bump. MACs are computed in batches so the AES
// units stay busy across independent packets, the way a forwarding loop
// would issue them.
constexpr size_t kBatch = 16;
constexpr size_t kRingSlots = 1024;
constexpr size_t kFrameSlots = 1u << 15;
constexpr double kBenchNow = 1.7e9;

struct Frame {
    ByteVec net;   // fixed-size network header bytes
    ByteVec fair;  // marking block, raw framing
};

struct Decoded {
    NetHeader net;
    FairHeader fair;
    uint8_t port = 0;
};

struct Worker {
    Fib fib;
    std::vector<Frame> frames;
    std::vector<uint8_t> ring;
    std::vector<std::array<uint8_t, 16>> dsts;  // insertion order, for frames
    Aes128 key;
    Lcg64 rng;
    uint64_t check = 0;
    double baseline_seconds = 0;
    double fair_seconds = 0;

    Worker(const BenchConfig& cfg, unsigned id)
        : key(Aes128(worker_key(cfg.seed, id))),
          rng(cfg.seed * 0x9e3779b97f4a7c15ULL + id + 1) {
        dsts.reserve(cfg.fib_entries);
        for (uint32_t i = 0; i < cfg.fib_entries; ++i) {
            FibEntry e;
            e.dst = make_addr(i * 2654435761u + id);
            e.port = static_cast<uint8_t>(i & 0xff);
            fib.insert(e);
            dsts.push_back(e.dst);
        }
        size_t count = kFrameSlots;
        frames.reserve(count);
        uint16_t ts = low16_seconds(kBenchNow);
        size_t fair_len = encoded_fair_size(cfg.hops, FairMode::raw);
        uint16_t payload_len =
            static_cast<uint16_t>(cfg.pkt_size - kNetHeaderSize);
        for (size_t i = 0; i < count; ++i) {
            NetHeader net;
            net.version = 6;
            net.next_header = 0xfd;
            net.payload_len = payload_len;
            net.src_addr = make_addr(0xabc00000u + static_cast<uint32_t>(i));
            net.dst_addr = dsts[rng.next_below(dsts.size())];
            FairHeader h;
            h.src_timestamp = ts;
            h.seqno = static_cast<uint32_t>(i) & 0xffffff;
            h.icv = static_cast<uint8_t>(rng.next_bits(8));
            h.set_as_index(static_cast<uint8_t>(i % cfg.hops));
            h.slots.assign(cfg.hops, AsSlot{});
            for (auto& s : h.slots) {
                s.nonce = rng.next_nibble();
                s.mac = rng.next_nibble();
            }
            frames.push_back({encode_net(net), encode_fair(h, FairMode::raw)});
            if (frames.back().net.size() + frames.back().fair.size() >
                cfg.pkt_size)
                throw std::invalid_argument("pkt_size smaller than headers");
            (void)fair_len;
        }
        ring.assign(kRingSlots * cfg.pkt_size, 0);
    }

    static SymKey worker_key(uint64_t seed, unsigned id) {
        uint8_t buf[12];
        for (int i = 0; i < 8; ++i)
            buf[i] = static_cast<uint8_t>(seed >> (56 - 8 * i));
        for (int i = 0; i < 4; ++i)
            buf[8 + i] = static_cast<uint8_t>(id >> (24 - 8 * i));
        Digest32 h = hash32(buf, sizeof buf);
        SymKey k{};
        std::memcpy(k.data(), h.data(), k.size());
        return k;
    }

    template <bool Mark>
    uint64_t pass(uint64_t packets, uint16_t pkt_size) {
        uint64_t acc = 0;
        uint16_t now16 = low16_seconds(kBenchNow);
        Decoded d[kBatch];
        Block16 in[kBatch] = {};
        Block16 out[kBatch] = {};
        uint8_t nonce[kBatch] = {};
        for (uint64_t i = 0; i < packets; i += kBatch) {
            size_t m = static_cast<size_t>(
                packets - i < kBatch ? packets - i : kBatch);
            for (size_t j = 0; j < m; ++j) {
                const Frame& f = frames[(i + j) & (kFrameSlots - 1)];
                ByteReader r(f.net.data(), f.net.size());
                d[j].net = decode_net(r);
                d[j].fair = decode_fair(f.fair, FairMode::raw);
                FibEntry* e = fib.find(d[j].net.dst_addr);
                d[j].port = e ? e->port : 0;
            }
            if constexpr (Mark) {
                for (size_t j = 0; j < m; ++j) {
                    FairHeader& h = d[j].fair;
                    acc += clock_check16(h.src_timestamp, now16);
                    nonce[j] = rng.next_nibble();
                    in[j] = slot_mac_input(d[j].net.payload_len,
                                           h.src_timestamp, h.seqno, nonce[j]);
                }
                key.encrypt4(in, out);
                key.encrypt4(in + 4, out + 4);
                key.encrypt4(in + 8, out + 8);
                key.encrypt4(in + 12, out + 12);
                for (size_t j = 0; j < m; ++j) {
                    FairHeader& h = d[j].fair;
                    uint8_t idx = h.as_index();
                    h.slots[idx] =
                        AsSlot{nonce[j], static_cast<uint8_t>(out[j][0] >> 4)};
                    h.set_as_index(static_cast<uint8_t>(idx + 1));
                }
            }
            for (size_t j = 0; j < m; ++j) {
                ByteVec nb = encode_net(d[j].net);
                ByteVec fb = encode_fair(d[j].fair, FairMode::raw);
                uint8_t* slot =
                    ring.data() + ((i + j) & (kRingSlots - 1)) * pkt_size;
                std::memcpy(slot, nb.data(), nb.size());
                std::memcpy(slot + nb.size(), fb.data(), fb.size());
                acc += d[j].port + fb.back() + nb.front();
            }
        }
        return acc;
    }

    // The passes run as adjacent chunk pairs of identical work, order
    // swapped every repetition. Clock-speed drift and interruptions hit
    // both halves of a pair about equally, so the per-pair time ratio is
    // the stable quantity; the median over all pairs rejects the spikes.
    // Baseline speed is the best sustained chunk; the marked time is
    // derived from it through the median ratio so the two stay paired.
    void run(const BenchConfig& cfg, uint64_t packets) {
        using clock = std::chrono::steady_clock;
        uint64_t warm = packets < (1u << 16) ? packets : (1u << 16);
        check += pass<false>(warm, cfg.pkt_size);
        check += pass<true>(warm, cfg.pkt_size);
        constexpr uint64_t kChunk = 1u << 17;
        uint64_t full = kChunk < packets ? kChunk : packets;
        double b_pp = 1e300;
        std::vector<double> ratios;
        for (int rep = 0; rep < 5; ++rep) {
            bool fair_first = rep & 1;
            for (uint64_t off = 0; off < packets; off += kChunk) {
                uint64_t n = packets - off < kChunk ? packets - off : kChunk;
                auto t0 = clock::now();
                check += fair_first ? pass<true>(n, cfg.pkt_size)
                                    : pass<false>(n, cfg.pkt_size);
                auto t1 = clock::now();
                check += fair_first ? pass<false>(n, cfg.pkt_size)
                                    : pass<true>(n, cfg.pkt_size);
                auto t2 = clock::now();
                if (n != full) continue;
                double first =
                    std::chrono::duration<double>(t1 - t0).count() / n;
                double second =
                    std::chrono::duration<double>(t2 - t1).count() / n;
                double b = fair_first ? second : first;
                double f = fair_first ? first : second;
                b_pp = b < b_pp ? b : b_pp;
                ratios.push_back(f / b);
            }
        }
        std::nth_element(ratios.begin(),
                         ratios.begin() + ratios.size() / 2, ratios.end());
        double ratio = ratios[ratios.size() / 2];
        baseline_seconds = b_pp * packets;
        fair_seconds = baseline_seconds * ratio;
    }
};

}  // namespace

BenchResult run_bench(const BenchConfig& cfg) {
    if (cfg.packets == 0) throw std::invalid_argument("packets == 0");
    if (cfg.workers == 0) throw std::invalid_argument("workers == 0");
    if (cfg.hops == 0 || cfg.hops > kMaxSlots)
        throw std::invalid_argument("hops out of range");
    if (cfg.fib_entries == 0) throw std::invalid_argument("fib_entries == 0");
    size_t header_bytes =
        kNetHeaderSize + encoded_fair_size(cfg.hops, FairMode::raw);
    if (cfg.pkt_size < header_bytes)
        throw std::invalid_argument("pkt_size smaller than headers");

    std::vector<std::unique_ptr<Worker>> workers;
    workers.reserve(cfg.workers);
    for (unsigned w = 0; w < cfg.workers; ++w)
        workers.push_back(std::make_unique<Worker>(cfg, w));

    uint64_t per = cfg.packets / cfg.workers;
    uint64_t extra = cfg.packets % cfg.workers;
    auto w0 = std::chrono::steady_clock::now();
    if (cfg.workers == 1) {
        workers[0]->run(cfg, cfg.packets);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(cfg.workers);
        for (unsigned w = 0; w < cfg.workers; ++w) {
            uint64_t n = per + (w < extra ? 1 : 0);
            threads.emplace_back(
                [&cfg, n, wk = workers[w].get()] { wk->run(cfg, n); });
        }
        for (auto& t : threads) t.join();
    }
    auto w1 = std::chrono::steady_clock::now();

    BenchResult r;
    r.wall_seconds = std::chrono::duration<double>(w1 - w0).count();
    double bs = 0, fs = 0;
    for (auto& w : workers) {
        bs = bs > w->baseline_seconds ? bs : w->baseline_seconds;
        fs = fs > w->fair_seconds ? fs : w->fair_seconds;
        r.check += w->check;
    }
    r.baseline_seconds = bs;
    r.fair_seconds = fs;
    r.baseline_pps = cfg.packets / bs;
    r.fair_pps = cfg.packets / fs;
    r.overhead = 1.0 - r.fair_pps / r.baseline_pps;
    r.aes_hw = aes_hw_available();
    return r;
}

}  // namespace fair
