#include "fair/crypto.hpp"

#include <cstring>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define FAIR_X86 1
#endif

namespace fair {
namespace {

constexpr uint8_t kSbox[256] = {
    0x63, 0x7c, 0x77, 0x7b, 0xf2, 0x6b, 0x6f, 0xc5, 0x30, 0x01, 0x67, 0x2b,
    0xfe, 0xd7, 0xab, 0x76, 0xca, 0x82, 0xc9, 0x7d, 0xfa, 0x59, 0x47, 0xf0,
    0xad, 0xd4, 0xa2, 0xaf, 0x9c, 0xa4, 0x72, 0xc0, 0xb7, 0xfd, 0x93, 0x26,
    0x36, 0x3f, 0xf7, 0xcc, 0x34, 0xa5, 0xe5, 0xf1, 0x71, 0xd8, 0x31, 0x15,
    0x04, 0xc7, 0x23, 0xc3, 0x18, 0x96, 0x05, 0x9a, 0x07, 0x12, 0x80, 0xe2,
    0xeb, 0x27, 0xb2, 0x75, 0x09, 0x83, 0x2c, 0x1a, 0x1b, 0x6e, 0x5a, 0xa0,
    0x52, 0x3b, 0xd6, 0xb3, 0x29, 0xe3, 0x2f, 0x84, 0x53, 0xd1, 0x00, 0xed,
    0x20, 0xfc, 0xb1, 0x5b, 0x6a, 0xcb, 0xbe, 0x39, 0x4a, 0x4c, 0x58, 0xcf,
    0xd0, 0xef, 0xaa, 0xfb, 0x43, 0x4d, 0x33, 0x85, 0x45, 0xf9, 0x02, 0x7f,
    0x50, 0x3c, 0x9f, 0xa8, 0x51, 0xa3, 0x40, 0x8f, 0x92, 0x9d, 0x38, 0xf5,
    0xbc, 0xb6, 0xda, 0x21, 0x10, 0xff, 0xf3, 0xd2, 0xcd, 0x0c, 0x13, 0xec,
    0x5f, 0x97, 0x44, 0x17, 0xc4, 0xa7, 0x7e, 0x3d, 0x64, 0x5d, 0x19, 0x73,
    0x60, 0x81, 0x4f, 0xdc, 0x22, 0x2a, 0x90, 0x88, 0x46, 0xee, 0xb8, 0x14,
    0xde, 0x5e, 0x0b, 0xdb, 0xe0, 0x32, 0x3a, 0x0a, 0x49, 0x06, 0x24, 0x5c,
    0xc2, 0xd3, 0xac, 0x62, 0x91, 0x95, 0xe4, 0x79, 0xe7, 0xc8, 0x37, 0x6d,
    0x8d, 0xd5, 0x4e, 0xa9, 0x6c, 0x56, 0xf4, 0xea, 0x65, 0x7a, 0xae, 0x08,
    0xba, 0x78, 0x25, 0x2e, 0x1c, 0xa6, 0xb4, 0xc6, 0xe8, 0xdd, 0x74, 0x1f,
    0x4b, 0xbd, 0x8b, 0x8a, 0x70, 0x3e, 0xb5, 0x66, 0x48, 0x03, 0xf6, 0x0e,
    0x61, 0x35, 0x57, 0xb9, 0x86, 0xc1, 0x1d, 0x9e, 0xe1, 0xf8, 0x98, 0x11,
    0x69, 0xd9, 0x8e, 0x94, 0x9b, 0x1e, 0x87, 0xe9, 0xce, 0x55, 0x28, 0xdf,
    0x8c, 0xa1, 0x89, 0x0d, 0xbf, 0xe6, 0x42, 0x68, 0x41, 0x99, 0x2d, 0x0f,
    0xb0, 0x54, 0xbb, 0x16};

constexpr uint8_t kRcon[10] = {0x01, 0x02, 0x04, 0x08, 0x10,
                               0x20, 0x40, 0x80, 0x1b, 0x36};

inline uint8_t xtime(uint8_t x) {
    return static_cast<uint8_t>((x << 1) ^ ((x >> 7) * 0x1b));
}

void expand_key(const SymKey& key, std::array<std::array<uint8_t, 16>, 11>& rk) {
    std::memcpy(rk[0].data(), key.data(), 16);
    for (int r = 1; r <= 10; ++r) {
        const uint8_t* prev = rk[r - 1].data();
        uint8_t* out = rk[r].data();
        // Rotate + substitute the previous last word, add the round constant.
        out[0] = static_cast<uint8_t>(prev[0] ^ kSbox[prev[13]] ^ kRcon[r - 1]);
        out[1] = static_cast<uint8_t>(prev[1] ^ kSbox[prev[14]]);
        out[2] = static_cast<uint8_t>(prev[2] ^ kSbox[prev[15]]);
        out[3] = static_cast<uint8_t>(prev[3] ^ kSbox[prev[12]]);
        for (int i = 4; i < 16; ++i)
            out[i] = static_cast<uint8_t>(prev[i] ^ out[i - 4]);
    }
}

void encrypt_sw(const std::array<std::array<uint8_t, 16>, 11>& rk,
                const uint8_t in[16], uint8_t out[16]) {
    uint8_t s[16];
    for (int i = 0; i < 16; ++i) s[i] = in[i] ^ rk[0][i];

    for (int round = 1; round <= 10; ++round) {
        uint8_t t[16];
        // SubBytes + ShiftRows in one indexing pass (column-major state).
        for (int c = 0; c < 4; ++c)
            for (int r = 0; r < 4; ++r)
                t[4 * c + r] = kSbox[s[4 * ((c + r) & 3) + r]];
        if (round < 10) {
            for (int c = 0; c < 4; ++c) {
                uint8_t* col = t + 4 * c;
                uint8_t a0 = col[0], a1 = col[1], a2 = col[2], a3 = col[3];
                uint8_t x = static_cast<uint8_t>(a0 ^ a1 ^ a2 ^ a3);
                col[0] = static_cast<uint8_t>(a0 ^ x ^ xtime(static_cast<uint8_t>(a0 ^ a1)));
                col[1] = static_cast<uint8_t>(a1 ^ x ^ xtime(static_cast<uint8_t>(a1 ^ a2)));
                col[2] = static_cast<uint8_t>(a2 ^ x ^ xtime(static_cast<uint8_t>(a2 ^ a3)));
                col[3] = static_cast<uint8_t>(a3 ^ x ^ xtime(static_cast<uint8_t>(a3 ^ a0)));
            }
        }
        for (int i = 0; i < 16; ++i) s[i] = t[i] ^ rk[round][i];
    }
    std::memcpy(out, s, 16);
}

#ifdef FAIR_X86
__attribute__((target("aes,sse2"))) void encrypt_hw(
    const std::array<std::array<uint8_t, 16>, 11>& rk, const uint8_t in[16],
    uint8_t out[16]) {
    __m128i s = _mm_loadu_si128(reinterpret_cast<const __m128i*>(in));
    s = _mm_xor_si128(s, _mm_loadu_si128(reinterpret_cast<const __m128i*>(rk[0].data())));
    for (int r = 1; r < 10; ++r)
        s = _mm_aesenc_si128(s, _mm_loadu_si128(reinterpret_cast<const __m128i*>(rk[r].data())));
    s = _mm_aesenclast_si128(s, _mm_loadu_si128(reinterpret_cast<const __m128i*>(rk[10].data())));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out), s);
}

__attribute__((target("aes,sse2"))) void encrypt4_hw(
    const std::array<std::array<uint8_t, 16>, 11>& rk,
    const uint8_t in[4][16], uint8_t out[4][16]) {
    __m128i k = _mm_loadu_si128(reinterpret_cast<const __m128i*>(rk[0].data()));
    __m128i s0 = _mm_xor_si128(_mm_loadu_si128(reinterpret_cast<const __m128i*>(in[0])), k);
    __m128i s1 = _mm_xor_si128(_mm_loadu_si128(reinterpret_cast<const __m128i*>(in[1])), k);
    __m128i s2 = _mm_xor_si128(_mm_loadu_si128(reinterpret_cast<const __m128i*>(in[2])), k);
    __m128i s3 = _mm_xor_si128(_mm_loadu_si128(reinterpret_cast<const __m128i*>(in[3])), k);
    for (int r = 1; r < 10; ++r) {
        k = _mm_loadu_si128(reinterpret_cast<const __m128i*>(rk[r].data()));
        s0 = _mm_aesenc_si128(s0, k);
        s1 = _mm_aesenc_si128(s1, k);
        s2 = _mm_aesenc_si128(s2, k);
        s3 = _mm_aesenc_si128(s3, k);
    }
    k = _mm_loadu_si128(reinterpret_cast<const __m128i*>(rk[10].data()));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out[0]), _mm_aesenclast_si128(s0, k));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out[1]), _mm_aesenclast_si128(s1, k));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out[2]), _mm_aesenclast_si128(s2, k));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out[3]), _mm_aesenclast_si128(s3, k));
}

bool detect_hw() { return __builtin_cpu_supports("aes"); }
#else
bool detect_hw() { return false; }
#endif

}  // namespace

bool aes_hw_available() {
    static const bool hw = detect_hw();
    return hw;
}

Aes128::Aes128(const SymKey& key) { expand_key(key, rk_); }

Block16 Aes128::encrypt(const Block16& in) const {
    Block16 out;
#ifdef FAIR_X86
    if (aes_hw_available()) {
        encrypt_hw(rk_, in.data(), out.data());
        return out;
    }
#endif
    encrypt_sw(rk_, in.data(), out.data());
    return out;
}

void Aes128::encrypt4(const Block16 in[4], Block16 out[4]) const {
#ifdef FAIR_X86
    if (aes_hw_available()) {
        // Four independent dependency chains keep the AES units busy.
        encrypt4_hw(rk_,
                    reinterpret_cast<const uint8_t(*)[16]>(in[0].data()),
                    reinterpret_cast<uint8_t(*)[16]>(out[0].data()));
        return;
    }
#endif
    for (int i = 0; i < 4; ++i) out[i] = encrypt(in[i]);
}

Block16 prf_block(const SymKey& key, const Block16& block) {
    return Aes128(key).encrypt(block);
}

Block16 pad_block(const uint8_t* msg, size_t len) {
    if (len > 16) throw std::invalid_argument("message exceeds one block");
    Block16 b{};
    for (size_t i = 0; i < len; ++i) b[i] = msg[i];
    return b;
}

}  // namespace fair
