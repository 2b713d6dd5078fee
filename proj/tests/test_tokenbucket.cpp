#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fair/tokenbucket.hpp"
#include "support.hpp"

using namespace fair;
using namespace fair::testsupport;

TEST_CASE("refill is linear, capped, and rejects time reversal") {
    TokenBucket tb = TokenBucket::make(1000, 1000, 0);
    tb.tokens = 0;
    tb.refill(0.5);
    CHECK(tb.tokens == doctest::Approx(500));
    tb.tokens = 0;
    tb.last_update = 0.5;
    tb.refill(10.5);
    CHECK(tb.tokens == doctest::Approx(1000));
    tb.refill(10.5);
    CHECK(tb.tokens == doctest::Approx(1000));
    CHECK_THROWS_AS(tb.refill(10.4), std::invalid_argument);
    CHECK_THROWS_AS(TokenBucket::make(0, 1000, 0), std::invalid_argument);
    CHECK_THROWS_AS(TokenBucket::make(1000, -1, 0), std::invalid_argument);
}

TEST_CASE("policer worked example: 600-byte packets at 0, 0.5, 0.6") {
    TokenBucket tb = TokenBucket::make(1000, 1000, 0);
    CHECK(tb.police(600, 0.0) == PoliceResult::conform);
    CHECK(tb.tokens == doctest::Approx(400));
    CHECK(tb.police(600, 0.5) == PoliceResult::conform);
    CHECK(tb.tokens == doctest::Approx(300));
    CHECK(tb.police(600, 0.6) == PoliceResult::violate);
    CHECK(tb.tokens == doctest::Approx(400));  // violations leave tokens alone
}

TEST_CASE("full-burst packet conforms; the next byte violates") {
    TokenBucket tb = TokenBucket::make(1000, 5000, 0);
    CHECK(tb.police(5000, 0.0) == PoliceResult::conform);
    CHECK(tb.police(1, 0.0) == PoliceResult::violate);
}

TEST_CASE("shaper releases immediately when full, linearly when drained") {
    TokenBucket tb = TokenBucket::make(1000, 1000, 0);
    CHECK(tb.shape(1000, 0.0) == doctest::Approx(0.0));
    CHECK(tb.shape(500, 0.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(tb.shape(1001, 1.0), std::invalid_argument);
}

TEST_CASE("policer decisions match the stepped fluid oracle") {
    Lcg64 rng(53);
    for (int trial = 0; trial < 100; ++trial) {
        PolicerInstance inst = random_policer_instance(rng);
        TokenBucket tb = TokenBucket::make(inst.cir, inst.cbs, 0);
        FluidOracle oracle(inst.cir, inst.cbs);
        bool margin_ok = true;
        for (size_t i = 0; i < inst.arrival.size(); ++i) {
            bool expect =
                oracle.police(inst.length[i], inst.arrival[i], margin_ok);
            PoliceResult got = tb.police(inst.length[i], inst.arrival[i]);
            CHECK((got == PoliceResult::conform) == expect);
        }
    }
}

TEST_CASE("shaped traffic replayed through a policer is all-conform") {
    Lcg64 rng(59);
    for (int trial = 0; trial < 50; ++trial) {
        double cir = 1000 + static_cast<double>(rng.next_below(100000));
        double cbs = 600 + static_cast<double>(rng.next_below(50000));
        TokenBucket shaper = TokenBucket::make(cir, cbs, 0);
        TokenBucket policer = TokenBucket::make(cir, cbs, 0);
        double t = 0;
        for (int i = 0; i < 200; ++i) {
            t += static_cast<double>(rng.next_below(50)) * 1e-3;
            double len = 40 + static_cast<double>(
                                  rng.next_below(static_cast<uint64_t>(
                                      std::min(cbs, 1500.0) - 39)));
            double release = shaper.shape(len, t);
            CHECK(release >= t);
            CHECK(policer.police(len, release) == PoliceResult::conform);
            t = release;
        }
    }
}

TEST_CASE("long-run admitted rate stays under cir plus burst amortized") {
    Lcg64 rng(61);
    double cir = 10000, cbs = 8000;
    TokenBucket tb = TokenBucket::make(cir, cbs, 0);
    double admitted = 0, t = 0;
    const double kDuration = 50;
    while (t < kDuration) {
        t += 1e-3 * static_cast<double>(1 + rng.next_below(5));
        double len = 200 + static_cast<double>(rng.next_below(1300));
        if (tb.police(len, t) == PoliceResult::conform) admitted += len;
    }
    CHECK(admitted / kDuration <= cir + cbs / kDuration + 1e-6);
}

TEST_CASE("bucket fill never leaves its bounds") {
    Lcg64 rng(67);
    TokenBucket tb = TokenBucket::make(5000, 3000, 0);
    double t = 0;
    for (int i = 0; i < 5000; ++i) {
        t += static_cast<double>(rng.next_below(100)) * 1e-3;
        tb.police(40 + static_cast<double>(rng.next_below(1460)), t);
        CHECK(tb.tokens >= 0);
        CHECK(tb.tokens <= tb.cbs);
    }
    CHECK(tb.tc() == doctest::Approx(3000.0 / 5000.0));
}
