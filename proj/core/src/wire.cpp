#include "fair/wire.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

namespace fair {
namespace {

constexpr char kDumpMagic[8] = {'F', 'A', 'I', 'R', 'D', 'U', 'M', 'P'};
constexpr uint8_t kDumpVersion = 0x01;

constexpr uint8_t kTagSource = 0x00;
constexpr uint8_t kTagTransit = 0x01;
constexpr uint8_t kTagDest = 0x02;

void check_header(const FairHeader& h) {
    if (h.slots.size() > kMaxSlots)
        throw std::invalid_argument("slot count exceeds 127");
    if (h.seqno >= kSeqnoSpace)
        throw std::invalid_argument("sequence number exceeds 24 bits");
    if (h.as_index() > h.slots.size())
        throw std::invalid_argument("slot pointer past allocated slots");
}

void put_fair_raw(ByteVec& out, const FairHeader& h) {
    put_u16(out, h.src_timestamp);
    put_u24(out, h.seqno);
    put_u8(out, h.icv);
    put_u8(out, h.next_as);
    for (const AsSlot& s : h.slots)
        put_u8(out, static_cast<uint8_t>((s.nonce & 0xf) << 4 | (s.mac & 0xf)));
}

FairHeader get_fair_raw(ByteReader& r, size_t slot_count) {
    FairHeader h;
    h.src_timestamp = r.u16();
    h.seqno = r.u24();
    h.icv = r.u8();
    h.next_as = r.u8();
    h.slots.reserve(slot_count);
    for (size_t i = 0; i < slot_count; ++i) {
        uint8_t b = r.u8();
        h.slots.push_back({static_cast<uint8_t>(b >> 4),
                           static_cast<uint8_t>(b & 0xf)});
    }
    return h;
}

}  // namespace

size_t encoded_fair_size(size_t slot_count, FairMode mode) {
    size_t raw = 7 + slot_count;
    switch (mode) {
        case FairMode::raw:
            return raw;
        case FairMode::ipv6_eh:
            return raw + 2;
        case FairMode::ipv6_eh_strict:
            return (raw + 2 + 7) & ~size_t{7};
    }
    throw std::invalid_argument("bad mode");
}

ByteVec encode_fair(const FairHeader& h, FairMode mode) {
    check_header(h);
    ByteVec out;
    out.reserve(encoded_fair_size(h.slots.size(), mode));
    if (mode == FairMode::raw) {
        put_fair_raw(out, h);
        return out;
    }
    size_t total = encoded_fair_size(h.slots.size(), mode);
    put_u8(out, h.eh_next_header);
    if (mode == FairMode::ipv6_eh)
        put_u8(out, static_cast<uint8_t>(total));
    else
        put_u8(out, static_cast<uint8_t>(total / 8 - 1));
    put_fair_raw(out, h);
    out.resize(total, 0);
    return out;
}

FairHeader decode_fair(const ByteVec& bytes, FairMode mode) {
    ByteReader r(bytes);
    if (mode == FairMode::raw) {
        if (bytes.size() < 7) throw DecodeError("marking block shorter than 7 bytes");
        return get_fair_raw(r, bytes.size() - 7);
    }
    if (bytes.size() < 9) throw DecodeError("extension header shorter than 9 bytes");
    uint8_t next_header = r.u8();
    uint8_t len_byte = r.u8();
    size_t total = mode == FairMode::ipv6_eh
                       ? len_byte
                       : (static_cast<size_t>(len_byte) + 1) * 8;
    if (total != bytes.size())
        throw DecodeError("header length byte inconsistent with buffer");
    FairHeader h = get_fair_raw(r, total - 9);
    h.eh_next_header = next_header;
    return h;
}

ByteVec encode_net(const NetHeader& h) {
    ByteVec out;
    out.reserve(kNetHeaderSize);
    put_u8(out, h.version);
    put_u8(out, h.next_header);
    put_u16(out, h.payload_len);
    put_bytes(out, h.src_addr.data(), h.src_addr.size());
    put_bytes(out, h.dst_addr.data(), h.dst_addr.size());
    return out;
}

NetHeader decode_net(ByteReader& r) {
    NetHeader h;
    h.version = r.u8();
    if (h.version != 4 && h.version != 6)
        throw DecodeError("network header version not 4 or 6");
    h.next_header = r.u8();
    h.payload_len = r.u16();
    r.raw(h.src_addr.data(), h.src_addr.size());
    r.raw(h.dst_addr.data(), h.dst_addr.size());
    return h;
}

std::array<uint8_t, 16> make_addr(uint32_t asn) {
    std::array<uint8_t, 16> a{};
    a[0] = 0xfd;
    a[12] = static_cast<uint8_t>(asn >> 24);
    a[13] = static_cast<uint8_t>(asn >> 16);
    a[14] = static_cast<uint8_t>(asn >> 8);
    a[15] = static_cast<uint8_t>(asn);
    return a;
}

uint32_t addr_asn(const std::array<uint8_t, 16>& addr) {
    return static_cast<uint32_t>(addr[12]) << 24 |
           static_cast<uint32_t>(addr[13]) << 16 |
           static_cast<uint32_t>(addr[14]) << 8 | addr[15];
}

ByteVec encode_dump(const std::vector<PacketRecord>& records) {
    ByteVec out;
    put_bytes(out, reinterpret_cast<const uint8_t*>(kDumpMagic), sizeof kDumpMagic);
    put_u8(out, kDumpVersion);
    for (const PacketRecord& rec : records) {
        ByteVec net = encode_net(rec.net);
        ByteVec fr = encode_fair(rec.fair, FairMode::raw);
        put_u64(out, static_cast<uint64_t>(std::llround(rec.arrival_time * 1e9)));
        put_u16(out, static_cast<uint16_t>(net.size() + fr.size()));
        put_bytes(out, net);
        put_bytes(out, fr);
    }
    return out;
}

std::vector<PacketRecord> decode_dump(const ByteVec& bytes) {
    ByteReader r(bytes);
    char magic[8];
    r.raw(reinterpret_cast<uint8_t*>(magic), sizeof magic);
    if (std::memcmp(magic, kDumpMagic, sizeof magic) != 0)
        throw DecodeError("bad dump magic");
    if (r.u8() != kDumpVersion) throw DecodeError("unsupported dump version");
    std::vector<PacketRecord> records;
    while (r.remaining() > 0) {
        PacketRecord rec;
        rec.arrival_time = static_cast<double>(r.u64()) * 1e-9;
        uint16_t len = r.u16();
        if (len < kNetHeaderSize + 7)
            throw DecodeError("record shorter than its fixed headers");
        if (len - kNetHeaderSize - 7 > kMaxSlots)
            throw DecodeError("record slot count exceeds 127");
        ByteReader body(bytes.data() + r.offset(), len);
        rec.net = decode_net(body);
        rec.fair = get_fair_raw(body, len - kNetHeaderSize - 7);
        r.bytes(len);
        records.push_back(std::move(rec));
    }
    return records;
}

void write_dump_file(const std::string& path,
                     const std::vector<PacketRecord>& records) {
    ByteVec bytes = encode_dump(records);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::vector<PacketRecord> read_dump_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    ByteVec bytes((std::istreambuf_iterator<char>(f)),
                  std::istreambuf_iterator<char>());
    return decode_dump(bytes);
}

ByteVec encode_source_prefix(const SourceRecord& r) {
    ByteVec out;
    put_u8(out, kTagSource);
    put_u32(out, r.asn);
    put_u64(out, r.time);
    put_u16(out, static_cast<uint16_t>(r.path.size()));
    for (uint32_t asn : r.path) put_u32(out, asn);
    return out;
}

ByteVec encode_source_record(const SourceRecord& r) {
    ByteVec out = encode_source_prefix(r);
    put_u16(out, static_cast<uint16_t>(r.sig.size()));
    put_bytes(out, r.sig);
    return out;
}

ByteVec encode_transit_record(const TransitRecord& r) {
    ByteVec out;
    put_u8(out, kTagTransit);
    put_u32(out, r.asn);
    put_bytes(out, r.mac.data(), r.mac.size());
    return out;
}

ByteVec encode_dest_prefix(const DestRecord& r) {
    ByteVec out;
    put_u8(out, kTagDest);
    put_u32(out, r.asn);
    put_u64(out, r.expiration);
    put_u64(out, r.cir);
    put_u64(out, r.cbs);
    return out;
}

ByteVec encode_dest_record(const DestRecord& r) {
    ByteVec out = encode_dest_prefix(r);
    put_u16(out, static_cast<uint16_t>(r.sig.size()));
    put_bytes(out, r.sig);
    return out;
}

ByteVec encode_policy(const PolicyPacket& p) {
    if (!p.final()) throw std::invalid_argument("policy lacks destination record");
    ByteVec out;
    put_u8(out, static_cast<uint8_t>(2 + p.transits.size()));
    put_bytes(out, encode_source_record(p.source));
    for (const TransitRecord& t : p.transits)
        put_bytes(out, encode_transit_record(t));
    put_bytes(out, encode_dest_record(*p.dest));
    return out;
}

PolicyPacket decode_policy(const ByteVec& bytes) {
    ByteReader r(bytes);
    uint8_t count = r.u8();
    if (count < 2) throw DecodeError("policy needs source and destination records");
    PolicyPacket p;
    if (r.u8() != kTagSource) throw DecodeError("first record is not the source");
    p.source.asn = r.u32();
    p.source.time = r.u64();
    uint16_t path_len = r.u16();
    p.source.path.reserve(path_len);
    for (uint16_t i = 0; i < path_len; ++i) p.source.path.push_back(r.u32());
    p.source.sig = r.bytes(r.u16());
    for (unsigned i = 0; i + 2 < count; ++i) {
        if (r.u8() != kTagTransit) throw DecodeError("expected a transit record");
        TransitRecord t;
        t.asn = r.u32();
        r.raw(t.mac.data(), t.mac.size());
        p.transits.push_back(t);
    }
    if (r.u8() != kTagDest) throw DecodeError("last record is not the destination");
    DestRecord d;
    d.asn = r.u32();
    d.expiration = r.u64();
    d.cir = r.u64();
    d.cbs = r.u64();
    d.sig = r.bytes(r.u16());
    p.dest = std::move(d);
    if (r.remaining() != 0) throw DecodeError("trailing bytes after policy");
    return p;
}

}  // namespace fair
