#include "fair/bytes.hpp"

namespace fair {
namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

std::string to_hex(const uint8_t* p, size_t n) {
    std::string s;
    s.reserve(2 * n);
    for (size_t i = 0; i < n; ++i) {
        s.push_back(kHexDigits[p[i] >> 4]);
        s.push_back(kHexDigits[p[i] & 0xf]);
    }
    return s;
}

std::string to_hex(const ByteVec& v) { return to_hex(v.data(), v.size()); }

ByteVec from_hex(const std::string& s) {
    if (s.size() % 2 != 0) throw DecodeError("odd-length hex string");
    ByteVec out;
    out.reserve(s.size() / 2);
    for (size_t i = 0; i < s.size(); i += 2) {
        int hi = hex_value(s[i]);
        int lo = hex_value(s[i + 1]);
        if (hi < 0 || lo < 0) throw DecodeError("invalid hex digit");
        out.push_back(static_cast<uint8_t>(hi << 4 | lo));
    }
    return out;
}

}  // namespace fair
