// Small byte-string helpers shared by every module: hex codecs, big-endian
// integer packing and a canonical length-prefixed string encoding used
// wherever strings are hashed or serialized.
#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dim {

using Bytes = std::vector<uint8_t>;

inline std::string to_hex(std::span<const uint8_t> data) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

inline Bytes from_hex(const std::string& hex) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::invalid_argument("from_hex: bad digit");
    };
    if (hex.size() % 2 != 0) throw std::invalid_argument("from_hex: odd length");
    Bytes out(hex.size() / 2);
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
    return out;
}

inline void put_u16be(Bytes& out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

inline void put_u32be(Bytes& out, uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<uint8_t>(v >> s));
}

inline void put_u64be(Bytes& out, uint64_t v) {
    for (int s = 56; s >= 0; s -= 8) out.push_back(static_cast<uint8_t>(v >> s));
}

inline void put_f64be(Bytes& out, double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    put_u64be(out, bits);
}

// Canonical string encoding: u16 big-endian byte length followed by the
// UTF-8 bytes.  Used for hashing ids and for wire fields with variable size.
inline void put_lp_string(Bytes& out, const std::string& s) {
    if (s.size() > 0xffff) throw std::invalid_argument("put_lp_string: too long");
    put_u16be(out, static_cast<uint16_t>(s.size()));
    out.insert(out.end(), s.begin(), s.end());
}

inline void put_lp_bytes(Bytes& out, std::span<const uint8_t> b) {
    if (b.size() > 0xffff) throw std::invalid_argument("put_lp_bytes: too long");
    put_u16be(out, static_cast<uint16_t>(b.size()));
    out.insert(out.end(), b.begin(), b.end());
}

// Cursor-style reader matching the put_* helpers.  Throws std::out_of_range
// when a read runs past the end; wire decoders translate that into their own
// error taxonomy.
struct ByteReader {
    std::span<const uint8_t> data;
    size_t pos = 0;

    size_t remaining() const { return data.size() - pos; }

    void need(size_t n) const {
        if (pos + n > data.size()) throw std::out_of_range("ByteReader: truncated input");
    }
    uint8_t u8() {
        need(1);
        return data[pos++];
    }
    uint16_t u16be() {
        need(2);
        uint16_t v = static_cast<uint16_t>(data[pos] << 8 | data[pos + 1]);
        pos += 2;
        return v;
    }
    uint32_t u32be() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = v << 8 | data[pos + i];
        pos += 4;
        return v;
    }
    uint64_t u64be() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = v << 8 | data[pos + i];
        pos += 8;
        return v;
    }
    double f64be() {
        uint64_t bits = u64be();
        double v;
        std::memcpy(&v, &bits, sizeof v);
        return v;
    }
    Bytes take(size_t n) {
        need(n);
        Bytes out(data.begin() + pos, data.begin() + pos + n);
        pos += n;
        return out;
    }
    std::string lp_string() {
        uint16_t n = u16be();
        need(n);
        std::string s(data.begin() + pos, data.begin() + pos + n);
        pos += n;
        return s;
    }
    Bytes lp_bytes() {
        uint16_t n = u16be();
        return take(n);
    }
};

}  // namespace dim
