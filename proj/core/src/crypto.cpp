#include "fair/crypto.hpp"

#include <openssl/evp.h>

#include <cstring>
#include <memory>

namespace fair {
namespace {

struct PkeyDeleter {
    void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
struct CtxDeleter {
    void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};
struct PctxDeleter {
    void operator()(EVP_PKEY_CTX* c) const { EVP_PKEY_CTX_free(c); }
};

using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyDeleter>;
using MdCtxPtr = std::unique_ptr<EVP_MD_CTX, CtxDeleter>;
using PkeyCtxPtr = std::unique_ptr<EVP_PKEY_CTX, PctxDeleter>;

PkeyPtr raw_private(int type, const Key32& priv) {
    PkeyPtr p(EVP_PKEY_new_raw_private_key(type, nullptr, priv.data(),
                                           priv.size()));
    if (!p) throw std::runtime_error("raw private key import failed");
    return p;
}

PkeyPtr raw_public(int type, const Key32& pub) {
    PkeyPtr p(EVP_PKEY_new_raw_public_key(type, nullptr, pub.data(),
                                          pub.size()));
    if (!p) throw std::runtime_error("raw public key import failed");
    return p;
}

Key32 public_half(EVP_PKEY* pkey) {
    Key32 pub{};
    size_t len = pub.size();
    if (EVP_PKEY_get_raw_public_key(pkey, pub.data(), &len) != 1 ||
        len != pub.size())
        throw std::runtime_error("public key export failed");
    return pub;
}

}  // namespace

uint64_t MacTag::value() const {
    if (width > 64) throw std::logic_error("wide tag has no scalar value");
    return lo;
}

MacTag truncate_msb(const Block16& tag, unsigned bits) {
    if (bits < 1 || bits > 128)
        throw std::invalid_argument("truncation width out of range");
    unsigned __int128 x = 0;
    for (uint8_t b : tag) x = x << 8 | b;
    x >>= (128 - bits);
    MacTag t;
    t.hi = static_cast<uint64_t>(x >> 64);
    t.lo = static_cast<uint64_t>(x);
    t.width = bits;
    return t;
}

Digest32 hash32(const uint8_t* data, size_t len) {
    Digest32 out{};
    unsigned out_len = 0;
    if (EVP_Digest(data, len, out.data(), &out_len, EVP_sha3_256(), nullptr) !=
            1 ||
        out_len != out.size())
        throw std::runtime_error("digest failed");
    return out;
}

Digest32 hash32(const ByteVec& data) { return hash32(data.data(), data.size()); }

SigKeyPair sig_keypair_from_seed(const Key32& seed) {
    SigKeyPair kp;
    kp.priv = seed;
    kp.pub = public_half(raw_private(EVP_PKEY_ED25519, seed).get());
    return kp;
}

DhKeyPair dh_keypair_from_seed(const Key32& seed) {
    DhKeyPair kp;
    kp.priv = seed;
    kp.pub = public_half(raw_private(EVP_PKEY_X25519, seed).get());
    return kp;
}

ByteVec sign(const Key32& priv, const ByteVec& message) {
    Digest32 digest = hash32(message);
    PkeyPtr pkey = raw_private(EVP_PKEY_ED25519, priv);
    MdCtxPtr ctx(EVP_MD_CTX_new());
    if (!ctx ||
        EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, pkey.get()) !=
            1)
        throw std::runtime_error("sign init failed");
    size_t sig_len = 0;
    if (EVP_DigestSign(ctx.get(), nullptr, &sig_len, digest.data(),
                       digest.size()) != 1)
        throw std::runtime_error("sign failed");
    ByteVec sig(sig_len);
    if (EVP_DigestSign(ctx.get(), sig.data(), &sig_len, digest.data(),
                       digest.size()) != 1)
        throw std::runtime_error("sign failed");
    sig.resize(sig_len);
    return sig;
}

bool verify(const Key32& pub, const ByteVec& message, const ByteVec& sig) {
    Digest32 digest = hash32(message);
    PkeyPtr pkey;
    try {
        pkey = raw_public(EVP_PKEY_ED25519, pub);
    } catch (const std::runtime_error&) {
        return false;
    }
    MdCtxPtr ctx(EVP_MD_CTX_new());
    if (!ctx ||
        EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr,
                             pkey.get()) != 1)
        return false;
    return EVP_DigestVerify(ctx.get(), sig.data(), sig.size(), digest.data(),
                            digest.size()) == 1;
}

SymKey derive_shared_key(const Key32& my_priv, const Key32& peer_pub) {
    PkeyPtr mine = raw_private(EVP_PKEY_X25519, my_priv);
    PkeyPtr peer = raw_public(EVP_PKEY_X25519, peer_pub);
    PkeyCtxPtr ctx(EVP_PKEY_CTX_new(mine.get(), nullptr));
    if (!ctx || EVP_PKEY_derive_init(ctx.get()) != 1 ||
        EVP_PKEY_derive_set_peer(ctx.get(), peer.get()) != 1)
        throw std::runtime_error("key exchange init failed");
    std::array<uint8_t, 32> secret{};
    size_t len = secret.size();
    if (EVP_PKEY_derive(ctx.get(), secret.data(), &len) != 1 ||
        len != secret.size())
        throw std::runtime_error("key exchange failed");
    Digest32 digest = hash32(secret.data(), secret.size());
    SymKey key{};
    std::memcpy(key.data(), digest.data(), key.size());
    return key;
}

UnknownAsError::UnknownAsError(uint32_t asn_)
    : std::runtime_error("unknown AS " + std::to_string(asn_)), asn(asn_) {}

void KeyRegistry::add(AsKeys keys) { keys_[keys.asn] = std::move(keys); }

bool KeyRegistry::contains(uint32_t asn) const { return keys_.count(asn) > 0; }

const AsKeys& KeyRegistry::at(uint32_t asn) const {
    auto it = keys_.find(asn);
    if (it == keys_.end()) throw UnknownAsError(asn);
    return it->second;
}

AsKeys KeyRegistry::derive(uint64_t scenario_seed, uint32_t asn) {
    auto material = [&](const char* label) {
        ByteVec input;
        put_u64(input, scenario_seed);
        put_u32(input, asn);
        put_bytes(input, reinterpret_cast<const uint8_t*>(label),
                  std::strlen(label));
        return hash32(input);
    };
    auto low16 = [](const Digest32& d) {
        SymKey k{};
        std::memcpy(k.data(), d.data(), k.size());
        return k;
    };
    AsKeys keys;
    keys.asn = asn;
    keys.transit_key = low16(material("transit"));
    keys.control_key = low16(material("control"));
    keys.sig = sig_keypair_from_seed(material("sig"));
    keys.dh = dh_keypair_from_seed(material("dh"));
    return keys;
}

Block16 icv_input(uint16_t payload_len, uint16_t ts, uint32_t seqno) {
    Block16 b{};
    b[0] = static_cast<uint8_t>(payload_len >> 8);
    b[1] = static_cast<uint8_t>(payload_len);
    b[2] = static_cast<uint8_t>(ts >> 8);
    b[3] = static_cast<uint8_t>(ts);
    b[4] = static_cast<uint8_t>(seqno >> 16);
    b[5] = static_cast<uint8_t>(seqno >> 8);
    b[6] = static_cast<uint8_t>(seqno);
    return b;
}

Block16 slot_mac_input(uint16_t payload_len, uint16_t ts, uint32_t seqno,
                       uint8_t nonce) {
    Block16 b = icv_input(payload_len, ts, seqno);
    b[7] = nonce;
    return b;
}

uint8_t icv8(const Aes128& k_sd, uint16_t payload_len, uint16_t ts,
             uint32_t seqno) {
    Block16 tag = k_sd.encrypt(icv_input(payload_len, ts, seqno));
    return tag[0];
}

uint8_t slot_mac4(const Aes128& k_i, uint16_t payload_len, uint16_t ts,
                  uint32_t seqno, uint8_t nonce) {
    Block16 tag = k_i.encrypt(slot_mac_input(payload_len, ts, seqno, nonce));
    return static_cast<uint8_t>(tag[0] >> 4);
}

}  // namespace fair
