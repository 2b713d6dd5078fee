#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <openssl/evp.h>

#include <cmath>
#include <cstring>

#include "fair/crypto.hpp"
#include "fair/lcg.hpp"

using namespace fair;

namespace {

Block16 from_hex16(const char* hex) {
    Block16 b{};
    for (int i = 0; i < 16; ++i) {
        unsigned v;
        sscanf(hex + 2 * i, "%2x", &v);
        b[i] = static_cast<uint8_t>(v);
    }
    return b;
}

std::string to_hex(const uint8_t* p, size_t n) {
    static const char* d = "0123456789abcdef";
    std::string s;
    for (size_t i = 0; i < n; ++i) {
        s.push_back(d[p[i] >> 4]);
        s.push_back(d[p[i] & 0xf]);
    }
    return s;
}

Block16 openssl_aes128(const SymKey& key, const Block16& in) {
    Block16 out{};
    EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
    REQUIRE(ctx != nullptr);
    REQUIRE(EVP_EncryptInit_ex(ctx, EVP_aes_128_ecb(), nullptr, key.data(),
                               nullptr) == 1);
    EVP_CIPHER_CTX_set_padding(ctx, 0);
    int len = 0;
    REQUIRE(EVP_EncryptUpdate(ctx, out.data(), &len, in.data(), 16) == 1);
    REQUIRE(len == 16);
    EVP_CIPHER_CTX_free(ctx);
    return out;
}

Key32 seed32(uint8_t fill) {
    Key32 k{};
    k.fill(fill);
    return k;
}

}  // namespace

TEST_CASE("aes128 matches the published known-answer vector") {
    SymKey key = from_hex16("000102030405060708090a0b0c0d0e0f");
    Block16 pt = from_hex16("00112233445566778899aabbccddeeff");
    Block16 expect = from_hex16("69c4e0d86a7b0430d8cdb78070b4c55a");
    CHECK(Aes128(key).encrypt(pt) == expect);
}

TEST_CASE("aes128 agrees with the system cipher on random inputs") {
    Lcg64 rng(7);
    for (int trial = 0; trial < 64; ++trial) {
        SymKey key{};
        Block16 pt{};
        for (auto& b : key) b = static_cast<uint8_t>(rng.next_bits(8));
        for (auto& b : pt) b = static_cast<uint8_t>(rng.next_bits(8));
        Aes128 aes(key);
        Block16 ours = aes.encrypt(pt);
        CHECK(ours == openssl_aes128(key, pt));

        Block16 in4[4], out4[4];
        for (int i = 0; i < 4; ++i) {
            in4[i] = pt;
            in4[i][0] ^= static_cast<uint8_t>(i);
        }
        aes.encrypt4(in4, out4);
        for (int i = 0; i < 4; ++i) CHECK(out4[i] == aes.encrypt(in4[i]));
    }
}

TEST_CASE("one-block mac is a single encryption of the padded message") {
    SymKey key = from_hex16("2b7e151628aed2a6abf7158809cf4f3c");
    uint8_t msg[5] = {1, 2, 3, 4, 5};
    Block16 padded = pad_block(msg, sizeof msg);
    for (int i = 0; i < 5; ++i) CHECK(padded[i] == msg[i]);
    for (int i = 5; i < 16; ++i) CHECK(padded[i] == 0);
    CHECK(prf_block(key, padded) == Aes128(key).encrypt(padded));
    CHECK_THROWS_AS(pad_block(nullptr, 17), std::invalid_argument);
}

TEST_CASE("tag truncation keeps the most significant bits") {
    Block16 tag = from_hex16("f123456789abcdef0011223344556677");
    CHECK(truncate_msb(tag, 1).value() == 1);
    CHECK(truncate_msb(tag, 4).value() == 0xf);
    CHECK(truncate_msb(tag, 8).value() == 0xf1);
    CHECK(truncate_msb(tag, 64).value() == 0xf123456789abcdefULL);
    MacTag wide = truncate_msb(tag, 128);
    CHECK(wide.hi == 0xf123456789abcdefULL);
    CHECK(wide.lo == 0x0011223344556677ULL);
    CHECK_THROWS_AS(wide.value(), std::logic_error);
    CHECK_THROWS_AS(truncate_msb(tag, 0), std::invalid_argument);
    CHECK_THROWS_AS(truncate_msb(tag, 129), std::invalid_argument);
}

TEST_CASE("truncation is a prefix: width 4 equals the top of width 8") {
    Lcg64 rng(11);
    for (int trial = 0; trial < 256; ++trial) {
        Block16 tag{};
        for (auto& b : tag) b = static_cast<uint8_t>(rng.next_bits(8));
        CHECK(truncate_msb(tag, 4).value() ==
              (truncate_msb(tag, 8).value() >> 4));
        CHECK(truncate_msb(tag, 1).value() ==
              (truncate_msb(tag, 8).value() >> 7));
    }
}

TEST_CASE("random forged tags pass at the truncation width's chance rate") {
    SymKey key = from_hex16("000102030405060708090a0b0c0d0e0f");
    Aes128 aes(key);
    Lcg64 rng(23);
    const int kTrials = 20000;
    int pass4 = 0, pass8 = 0, pass1 = 0;
    for (int i = 0; i < kTrials; ++i) {
        Block16 in = slot_mac_input(static_cast<uint16_t>(rng.next_bits(16)),
                                    static_cast<uint16_t>(rng.next_bits(16)),
                                    rng.next_bits(24), rng.next_nibble());
        Block16 tag = aes.encrypt(in);
        pass4 += rng.next_nibble() == truncate_msb(tag, 4).value();
        pass8 += rng.next_bits(8) == truncate_msb(tag, 8).value();
        pass1 += rng.next_bits(1) == truncate_msb(tag, 1).value();
    }
    auto sigma = [&](double p) { return std::sqrt(p * (1 - p) / kTrials); };
    CHECK(std::abs(pass4 / double(kTrials) - 1.0 / 16) < 4 * sigma(1.0 / 16));
    CHECK(std::abs(pass8 / double(kTrials) - 1.0 / 256) < 4 * sigma(1.0 / 256));
    CHECK(std::abs(pass1 / double(kTrials) - 0.5) < 4 * sigma(0.5));
}

TEST_CASE("digest matches the published sha3-256 vectors") {
    Digest32 empty = hash32(nullptr, 0);
    CHECK(to_hex(empty.data(), empty.size()) ==
          "a7ffc6f8bf1ed76651c14756a061d662f580ff4de43b49fa82d80a4b80f8434a");
    ByteVec abc = {'a', 'b', 'c'};
    Digest32 d = hash32(abc);
    CHECK(to_hex(d.data(), d.size()) ==
          "3a985da74fe225b2045c172d6bd390bd855f086e3e9d525b46bfe24511431532");
}

TEST_CASE("signatures verify only for the signed message and key") {
    SigKeyPair a = sig_keypair_from_seed(seed32(1));
    SigKeyPair b = sig_keypair_from_seed(seed32(2));
    ByteVec msg = {'p', 'o', 'l', 'i', 'c', 'y'};
    ByteVec sig = sign(a.priv, msg);
    CHECK(verify(a.pub, msg, sig));

    ByteVec altered = msg;
    altered[0] ^= 1;
    CHECK_FALSE(verify(a.pub, altered, sig));
    CHECK_FALSE(verify(b.pub, msg, sig));

    ByteVec truncated(sig.begin(), sig.end() - 1);
    CHECK_FALSE(verify(a.pub, msg, truncated));
    ByteVec garbage(64, 0xab);
    CHECK_FALSE(verify(a.pub, msg, garbage));
    CHECK_FALSE(verify(a.pub, msg, ByteVec{}));
}

TEST_CASE("key exchange is symmetric and peer-specific") {
    DhKeyPair a = dh_keypair_from_seed(seed32(3));
    DhKeyPair b = dh_keypair_from_seed(seed32(4));
    DhKeyPair c = dh_keypair_from_seed(seed32(5));
    SymKey ab = derive_shared_key(a.priv, b.pub);
    SymKey ba = derive_shared_key(b.priv, a.pub);
    CHECK(ab == ba);
    CHECK(derive_shared_key(a.priv, c.pub) != ab);
}

TEST_CASE("registry returns the registered key and rejects unknown asns") {
    KeyRegistry reg;
    AsKeys keys = KeyRegistry::derive(42, 100);
    CHECK(keys.asn == 100);
    reg.add(keys);
    CHECK(reg.contains(100));
    CHECK_FALSE(reg.contains(101));
    CHECK(reg.at(100).transit_key == keys.transit_key);
    CHECK(reg.at(100).sig.pub == keys.sig.pub);
    try {
        reg.at(101);
        FAIL("missing asn should throw");
    } catch (const UnknownAsError& e) {
        CHECK(e.asn == 101);
    }
}

TEST_CASE("derived key material is deterministic per seed and asn") {
    AsKeys a1 = KeyRegistry::derive(42, 100);
    AsKeys a2 = KeyRegistry::derive(42, 100);
    CHECK(a1.transit_key == a2.transit_key);
    CHECK(a1.control_key == a2.control_key);
    CHECK(a1.sig.priv == a2.sig.priv);
    CHECK(a1.dh.priv == a2.dh.priv);
    CHECK(KeyRegistry::derive(42, 101).transit_key != a1.transit_key);
    CHECK(KeyRegistry::derive(43, 100).transit_key != a1.transit_key);
    CHECK(a1.transit_key != a1.control_key);
}

TEST_CASE("mac inputs pack fields big-endian in argument order") {
    Block16 b = icv_input(0x0102, 0x0304, 0x050607);
    Block16 expect{};
    expect[0] = 0x01;
    expect[1] = 0x02;
    expect[2] = 0x03;
    expect[3] = 0x04;
    expect[4] = 0x05;
    expect[5] = 0x06;
    expect[6] = 0x07;
    CHECK(b == expect);
    Block16 s = slot_mac_input(0x0102, 0x0304, 0x050607, 0x0c);
    expect[7] = 0x0c;
    CHECK(s == expect);
}

TEST_CASE("hot-path tags are truncations of the full block tag") {
    SymKey key = from_hex16("8899aabbccddeeff0011223344556677");
    Aes128 aes(key);
    Block16 full = aes.encrypt(icv_input(500, 4096, 7));
    CHECK(icv8(aes, 500, 4096, 7) == truncate_msb(full, 8).value());
    Block16 sfull = aes.encrypt(slot_mac_input(500, 4096, 7, 0xe));
    CHECK(slot_mac4(aes, 500, 4096, 7, 0xe) ==
          truncate_msb(sfull, 4).value());
}
