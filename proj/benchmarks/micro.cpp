#include <benchmark/benchmark.h>

#include "fair/dataplane.hpp"
#include "fair/tokenbucket.hpp"

namespace {

using namespace fair;

SymKey test_key() {
    SymKey k{};
    for (int i = 0; i < 16; ++i) k[i] = static_cast<uint8_t>(i * 17 + 3);
    return k;
}

void BM_AesBlock(benchmark::State& state) {
    const Aes128 aes(test_key());
    Block16 b{};
    for (auto _ : state) {
        b = aes.encrypt(b);
        benchmark::DoNotOptimize(b);
    }
}
BENCHMARK(BM_AesBlock);

void BM_AesBlock4(benchmark::State& state) {
    const Aes128 aes(test_key());
    Block16 in[4] = {}, out[4];
    for (auto _ : state) {
        aes.encrypt4(in, out);
        in[0] = out[3];
        benchmark::DoNotOptimize(out);
    }
    state.SetItemsProcessed(state.iterations() * 4);
}
BENCHMARK(BM_AesBlock4);

void BM_KeySchedule(benchmark::State& state) {
    SymKey k = test_key();
    for (auto _ : state) {
        Aes128 aes(k);
        benchmark::DoNotOptimize(aes);
        k[0]++;
    }
}
BENCHMARK(BM_KeySchedule);

void BM_SlotMac(benchmark::State& state) {
    const Aes128 aes(test_key());
    uint32_t seq = 0;
    for (auto _ : state) {
        uint8_t m = slot_mac4(aes, 400, 4096, seq & 0xffffff,
                              static_cast<uint8_t>(seq & 0xf));
        ++seq;
        benchmark::DoNotOptimize(m);
    }
}
BENCHMARK(BM_SlotMac);

void BM_Icv(benchmark::State& state) {
    const Aes128 aes(test_key());
    uint32_t seq = 0;
    for (auto _ : state) {
        uint8_t v = icv8(aes, 400, 4096, seq++ & 0xffffff);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_Icv);

void BM_ClockCheck(benchmark::State& state) {
    uint16_t ts = 0;
    for (auto _ : state) {
        bool ok = clock_check(ts++, 1.6e9);
        benchmark::DoNotOptimize(ok);
    }
}
BENCHMARK(BM_ClockCheck);

void BM_TokenBucketPolice(benchmark::State& state) {
    TokenBucket tb = TokenBucket::make(125000, 125000, 0);
    double t = 0;
    for (auto _ : state) {
        auto r = tb.police(64, t += 1e-6);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_TokenBucketPolice);

void BM_TransitForward(benchmark::State& state) {
    const Aes128 aes(test_key());
    Lcg64 rng(7);
    NetHeader net{};
    net.payload_len = 412;
    FairHeader fair{};
    fair.src_timestamp = low16_seconds(1.6e9);
    fair.slots.assign(static_cast<size_t>(state.range(0)), AsSlot{});
    for (auto _ : state) {
        fair.set_as_index(0);
        ForwardAction act = transit_forward(aes, rng, net, fair, 1.6e9);
        benchmark::DoNotOptimize(act);
    }
}
BENCHMARK(BM_TransitForward)->Arg(5)->Arg(16);

void BM_EncodeFair(benchmark::State& state) {
    FairHeader fair{};
    fair.src_timestamp = 4096;
    fair.seqno = 12345;
    fair.slots.assign(static_cast<size_t>(state.range(0)), AsSlot{0x5, 0xa});
    for (auto _ : state) {
        ByteVec out = encode_fair(fair, FairMode::ipv6_eh);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_EncodeFair)->Arg(5)->Arg(16);

void BM_DecodeFair(benchmark::State& state) {
    FairHeader fair{};
    fair.src_timestamp = 4096;
    fair.seqno = 12345;
    fair.slots.assign(static_cast<size_t>(state.range(0)), AsSlot{0x5, 0xa});
    const ByteVec bytes = encode_fair(fair, FairMode::ipv6_eh);
    for (auto _ : state) {
        FairHeader out = decode_fair(bytes, FairMode::ipv6_eh);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_DecodeFair)->Arg(5)->Arg(16);

void BM_Hash32(benchmark::State& state) {
    ByteVec buf(64, 0x42);
    for (auto _ : state) {
        Digest32 d = hash32(buf);
        buf[0] = d[0];
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(BM_Hash32);

}  // namespace

BENCHMARK_MAIN();
