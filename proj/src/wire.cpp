#include "dim/wire.hpp"

#include "dim/errors.hpp"
#include "dim/hash.hpp"

namespace dim {

namespace {

void put_header(Bytes& out, WireType type) {
    out.push_back(kWireMagic0);
    out.push_back(kWireMagic1);
    out.push_back(kWireVersion);
    out.push_back(static_cast<uint8_t>(type));
}

WireType read_header(ByteReader& r) {
    if (r.u8() != kWireMagic0 || r.u8() != kWireMagic1)
        throw EncodingError("frame: bad magic");
    if (r.u8() != kWireVersion) throw EncodingError("frame: unsupported version");
    uint8_t t = r.u8();
    if (t < 1 || t > 4) throw EncodingError("frame: unknown type");
    return static_cast<WireType>(t);
}

void check_id(const std::string& id) {
    if (id.empty() || id.size() > kMaxIdBytes)
        throw EncodingError("wire: id must be 1..64 bytes");
}

void check_digest(const Bytes& d, const char* what) {
    if (d.size() != kDigestSize) throw EncodingError(std::string("wire: ") + what);
}

void expect_done(const ByteReader& r, const char* what) {
    if (r.remaining() != 0) throw EncodingError(std::string("wire: trailing bytes in ") + what);
}

[[noreturn]] void truncated(const char* what) {
    throw EncodingError(std::string("wire: truncated ") + what);
}

}  // namespace

Bytes encode_query(const QueryRequest& q) {
    check_id(q.target_id);
    if (q.target_id.find('\0') != std::string::npos)
        throw EncodingError("wire: query id may not contain NUL");
    if (q.nonce.size() != kQueryNonceSize) throw EncodingError("wire: query nonce must be 12 bytes");
    Bytes out;
    out.reserve(kQueryWireSize);
    put_header(out, WireType::Query);
    put_u64be(out, static_cast<uint64_t>(q.timestamp_ms));
    out.insert(out.end(), q.nonce.begin(), q.nonce.end());
    put_u16be(out, q.flags);
    out.insert(out.end(), q.target_id.begin(), q.target_id.end());
    out.resize(kQueryWireSize, 0);  // zero-pad the id slot
    return out;
}

QueryRequest decode_query(std::span<const uint8_t> wire) {
    if (wire.size() != kQueryWireSize) throw EncodingError("wire: query frame must be 90 bytes");
    try {
        ByteReader r{wire};
        if (read_header(r) != WireType::Query) throw EncodingError("wire: not a query frame");
        QueryRequest q;
        q.timestamp_ms = static_cast<int64_t>(r.u64be());
        q.nonce = r.take(kQueryNonceSize);
        q.flags = r.u16be();
        Bytes slot = r.take(kQueryIdSlot);
        size_t len = slot.size();
        while (len > 0 && slot[len - 1] == 0) --len;
        if (len == 0) throw EncodingError("wire: empty query id");
        q.target_id.assign(slot.begin(), slot.begin() + static_cast<ptrdiff_t>(len));
        expect_done(r, "query");
        return q;
    } catch (const std::out_of_range&) {
        truncated("query");
    }
}

Bytes encode_challenge_body(const ChallengeMessage& m) {
    check_id(m.recipient_id);
    check_digest(m.commitment_echo, "commitment echo must be 32 bytes");
    Bytes out;
    out.reserve(challenge_body_size(m.recipient_id.size()));
    out.push_back(static_cast<uint8_t>(WireType::Challenge));
    put_lp_string(out, m.recipient_id);
    Bytes pk = to_element_slot(m.sender_public);
    out.insert(out.end(), pk.begin(), pk.end());
    put_u64be(out, static_cast<uint64_t>(m.timestamp_ms));
    Bytes ch = to_element_slot(m.challenge);
    out.insert(out.end(), ch.begin(), ch.end());
    out.insert(out.end(), m.commitment_echo.begin(), m.commitment_echo.end());
    return out;
}

ChallengeMessage decode_challenge_body(std::span<const uint8_t> body) {
    try {
        ByteReader r{body};
        if (r.u8() != static_cast<uint8_t>(WireType::Challenge))
            throw EncodingError("wire: body is not a challenge");
        ChallengeMessage m;
        m.recipient_id = r.lp_string();
        check_id(m.recipient_id);
        m.sender_public = from_element_slot(r.take(kElementSlot));
        m.timestamp_ms = static_cast<int64_t>(r.u64be());
        m.challenge = from_element_slot(r.take(kElementSlot));
        m.commitment_echo = r.take(kDigestSize);
        expect_done(r, "challenge");
        return m;
    } catch (const std::out_of_range&) {
        truncated("challenge");
    }
}

Bytes encode_response_body(const ResponseMessage& m) {
    check_id(m.recipient_id);
    check_digest(m.binding, "binding must be 32 bytes");
    Bytes out;
    out.reserve(response_body_size(m.recipient_id.size()));
    out.push_back(static_cast<uint8_t>(WireType::Response));
    put_lp_string(out, m.recipient_id);
    put_u64be(out, static_cast<uint64_t>(m.timestamp_ms));
    Bytes rv = to_element_slot(m.response_value);
    out.insert(out.end(), rv.begin(), rv.end());
    out.insert(out.end(), m.binding.begin(), m.binding.end());
    return out;
}

ResponseMessage decode_response_body(std::span<const uint8_t> body) {
    try {
        ByteReader r{body};
        if (r.u8() != static_cast<uint8_t>(WireType::Response))
            throw EncodingError("wire: body is not a response");
        ResponseMessage m;
        m.recipient_id = r.lp_string();
        check_id(m.recipient_id);
        m.timestamp_ms = static_cast<int64_t>(r.u64be());
        m.response_value = from_element_slot(r.take(kElementSlot));
        m.binding = r.take(kDigestSize);
        expect_done(r, "response");
        return m;
    } catch (const std::out_of_range&) {
        truncated("response");
    }
}

Bytes frame_payload(WireType type, const Bytes& payload) {
    Bytes out;
    out.reserve(kWireHeaderSize + payload.size());
    put_header(out, type);
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

Frame parse_frame(std::span<const uint8_t> wire) {
    try {
        ByteReader r{wire};
        Frame f;
        f.type = read_header(r);
        f.payload = r.take(r.remaining());
        return f;
    } catch (const std::out_of_range&) {
        truncated("frame");
    }
}

Bytes encode_data(const DataRecord& rec) {
    check_digest(rec.session_id, "session id must be 32 bytes");
    if (rec.direction > 1) throw EncodingError("wire: direction must be 0 or 1");
    if (rec.tag.size() != kEnvelopeTagSize) throw EncodingError("wire: tag must be 16 bytes");
    if (rec.ciphertext.size() > kMaxSealPayload)
        throw EncodingError("wire: data record ciphertext too large");
    Bytes out;
    out.reserve(kWireHeaderSize + kDigestSize + 1 + 8 + 4 + rec.ciphertext.size() +
                kEnvelopeTagSize);
    put_header(out, WireType::Data);
    out.insert(out.end(), rec.session_id.begin(), rec.session_id.end());
    out.push_back(rec.direction);
    put_u64be(out, rec.counter);
    put_u32be(out, static_cast<uint32_t>(rec.ciphertext.size()));
    out.insert(out.end(), rec.ciphertext.begin(), rec.ciphertext.end());
    out.insert(out.end(), rec.tag.begin(), rec.tag.end());
    return out;
}

DataRecord decode_data(std::span<const uint8_t> wire) {
    try {
        ByteReader r{wire};
        if (read_header(r) != WireType::Data) throw EncodingError("wire: not a data record");
        DataRecord rec;
        rec.session_id = r.take(kDigestSize);
        rec.direction = r.u8();
        if (rec.direction > 1) throw EncodingError("wire: direction must be 0 or 1");
        rec.counter = r.u64be();
        uint32_t n = r.u32be();
        if (n > kMaxSealPayload) throw EncodingError("wire: data record ciphertext too large");
        rec.ciphertext = r.take(n);
        rec.tag = r.take(kEnvelopeTagSize);
        expect_done(r, "data record");
        return rec;
    } catch (const std::out_of_range&) {
        truncated("data record");
    }
}

}  // namespace dim
