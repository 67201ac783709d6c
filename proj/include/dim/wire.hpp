#pragma once
// Framed wire formats for the identity protocol: ledger lookup queries, the
// two sealed handshake messages, and post-handshake authenticated data
// records.  Every frame starts with the same 4-byte header:
//
//   [0] 0xD1  [1] 0x4D   magic
//   [2] 0x01            format version
//   [3] type            see WireType
//
// Sealed frames carry an opaque envelope after the header; the decrypted
// body repeats the type in its first byte so a body can never be replayed
// in a different protocol position.

#include <cstdint>
#include <span>
#include <string>

#include "dim/bytes.hpp"
#include "dim/identity.hpp"

namespace dim {

inline constexpr uint8_t kWireMagic0 = 0xD1;
inline constexpr uint8_t kWireMagic1 = 0x4D;
inline constexpr uint8_t kWireVersion = 1;
inline constexpr size_t kWireHeaderSize = 4;

enum class WireType : uint8_t {
    Query = 1,      // plaintext ledger lookup
    Challenge = 2,  // sealed: opens the handshake
    Response = 3,   // sealed: answers the challenge
    Data = 4,       // session-keyed payload record
};

// ---- ledger lookup query ------------------------------------------------
// Fixed 90-byte frame: header 4 + timestamp 8 + nonce 12 + flags 2 +
// zero-padded id slot 64.  Ids may not contain NUL (the slot pad byte).
inline constexpr size_t kQueryNonceSize = 12;
inline constexpr size_t kQueryIdSlot = 64;
inline constexpr size_t kQueryWireSize =
    kWireHeaderSize + 8 + kQueryNonceSize + 2 + kQueryIdSlot;

struct QueryRequest {
    int64_t timestamp_ms = 0;
    Bytes nonce;            // 12 bytes, caller supplied
    uint16_t flags = 0;     // reserved, zero today
    std::string target_id;  // identity being looked up
};

Bytes encode_query(const QueryRequest& q);
QueryRequest decode_query(std::span<const uint8_t> wire);

// ---- handshake bodies (encrypted before framing) ------------------------
// Challenge body: type 1 + recipient id (u16 length prefix) + sender public
// key slot 512 + timestamp 8 + challenge slot 512 + commitment echo 32.
struct ChallengeMessage {
    std::string recipient_id;  // who this challenge is for
    Bytes sender_public;       // initiator's long-term public key
    int64_t timestamp_ms = 0;
    Bytes challenge;           // initiator's ephemeral public value
    Bytes commitment_echo;     // recipient's on-chain commitment, 32 bytes
};

// Response body: type 1 + recipient id (u16 length prefix) + timestamp 8 +
// response slot 512 + binding 32.
struct ResponseMessage {
    std::string recipient_id;  // the original initiator
    int64_t timestamp_ms = 0;
    Bytes response_value;      // responder's ephemeral public value
    Bytes binding;             // hash tying this response to the challenge
};

Bytes encode_challenge_body(const ChallengeMessage& m);
ChallengeMessage decode_challenge_body(std::span<const uint8_t> body);
Bytes encode_response_body(const ResponseMessage& m);
ResponseMessage decode_response_body(std::span<const uint8_t> body);

// ---- sealed frame wrapper ----------------------------------------------
struct Frame {
    WireType type = WireType::Query;
    Bytes payload;  // envelope (Challenge/Response) or record body (Data)
};

Bytes frame_payload(WireType type, const Bytes& payload);
// Validates magic and version; throws EncodingError otherwise.
Frame parse_frame(std::span<const uint8_t> wire);

// ---- authenticated data records ----------------------------------------
// header 4 + session id 32 + direction 1 + counter 8 + u32 ct len + ct +
// tag 16.
struct DataRecord {
    Bytes session_id;       // 32 bytes
    uint8_t direction = 0;  // 0 initiator->responder, 1 the reverse
    uint64_t counter = 0;
    Bytes ciphertext;
    Bytes tag;              // 16 bytes
};

Bytes encode_data(const DataRecord& rec);
DataRecord decode_data(std::span<const uint8_t> wire);

// ---- size budget helpers ------------------------------------------------
inline constexpr size_t challenge_body_size(size_t recipient_id_len) {
    return 1 + 2 + recipient_id_len + kElementSlot + 8 + kElementSlot + 32;
}
inline constexpr size_t response_body_size(size_t recipient_id_len) {
    return 1 + 2 + recipient_id_len + 8 + kElementSlot + 32;
}
inline constexpr size_t sealed_frame_size(size_t body_size) {
    return kWireHeaderSize + kEnvelopeOverhead + body_size;
}

}  // namespace dim
