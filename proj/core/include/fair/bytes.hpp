#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fair {

using ByteVec = std::vector<uint8_t>;

struct DecodeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void put_u8(ByteVec& out, uint8_t v) { out.push_back(v); }

inline void put_u16(ByteVec& out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

inline void put_u24(ByteVec& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v >> 16));
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

inline void put_u32(ByteVec& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v >> 24));
    out.push_back(static_cast<uint8_t>(v >> 16));
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

inline void put_u64(ByteVec& out, uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8)
        out.push_back(static_cast<uint8_t>(v >> shift));
}

inline void put_bytes(ByteVec& out, const uint8_t* p, size_t n) {
    out.insert(out.end(), p, p + n);
}

inline void put_bytes(ByteVec& out, const ByteVec& v) {
    out.insert(out.end(), v.begin(), v.end());
}

// Sequential big-endian reader; every accessor checks bounds.
class ByteReader {
public:
    ByteReader(const uint8_t* data, size_t len) : p_(data), n_(len) {}
    explicit ByteReader(const ByteVec& v) : ByteReader(v.data(), v.size()) {}

    size_t offset() const { return off_; }
    size_t remaining() const { return n_ - off_; }

    uint8_t u8() {
        need(1);
        return p_[off_++];
    }
    uint16_t u16() {
        need(2);
        uint16_t v = static_cast<uint16_t>(p_[off_] << 8 | p_[off_ + 1]);
        off_ += 2;
        return v;
    }
    uint32_t u24() {
        need(3);
        uint32_t v = static_cast<uint32_t>(p_[off_]) << 16 |
                     static_cast<uint32_t>(p_[off_ + 1]) << 8 | p_[off_ + 2];
        off_ += 3;
        return v;
    }
    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = v << 8 | p_[off_ + i];
        off_ += 4;
        return v;
    }
    uint64_t u64() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = v << 8 | p_[off_ + i];
        off_ += 8;
        return v;
    }
    void raw(uint8_t* dst, size_t k) {
        need(k);
        for (size_t i = 0; i < k; ++i) dst[i] = p_[off_ + i];
        off_ += k;
    }
    ByteVec bytes(size_t k) {
        need(k);
        ByteVec v(p_ + off_, p_ + off_ + k);
        off_ += k;
        return v;
    }

private:
    void need(size_t k) const {
        if (off_ + k > n_) throw DecodeError("truncated buffer");
    }
    const uint8_t* p_;
    size_t n_;
    size_t off_ = 0;
};

std::string to_hex(const uint8_t* p, size_t n);
std::string to_hex(const ByteVec& v);
ByteVec from_hex(const std::string& s);

}  // namespace fair
