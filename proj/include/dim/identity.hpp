// Identity primitives: keypairs, ledger records, commitment hashes, the
// Diffie-Hellman challenge/response values and the sealed envelope that
// protects protocol messages in transit.
//
// The asymmetric scheme is a DH-based hybrid (integrated-encryption style):
// a keypair is a secret exponent x and public element g^x over the fixed
// 2048-bit safe-prime group; sealing generates an ephemeral exponent, derives
// an AES-256-GCM key from the shared element, and authenticates the payload.
// Everything is deterministic given the caller-supplied seeds.
#pragma once

#include <cstdint>
#include <string>

#include "dim/bytes.hpp"
#include "dim/group.hpp"

namespace dim {

inline constexpr size_t kMaxIdBytes = 64;
inline constexpr size_t kMaxSealPayload = 64 * 1024;
inline constexpr size_t kSessionKeySize = 32;

/// Wire slot width for group elements / public keys: fixed 512 bytes
// (big-endian, left padded) so one layout carries up to 4096-bit groups.
inline constexpr size_t kElementSlot = 512;

// Envelope layout: [ephemeral public, 512][GCM nonce, 12][u32 ct len][ct][tag, 16].
inline constexpr size_t kEnvelopeNonceSize = 12;
inline constexpr size_t kEnvelopeTagSize = 16;
inline constexpr size_t kEnvelopeOverhead =
    kElementSlot + kEnvelopeNonceSize + 4 + kEnvelopeTagSize;

struct KeyPair {
    Bytes public_key;   // g^x mod p, big-endian minimal
    Bytes private_key;  // x, big-endian minimal
};

struct IdentityRecord {
    std::string id;        // UTF-8, 1..64 bytes
    Bytes public_key;
    int64_t timestamp_ms;  // registration time claimed by the submitter
    double x, y;           // registration location, meters
    Bytes commitment;      // commitment_hash(id, private_key), 32 bytes
};

struct DhChallenge {
    Bytes secret;        // exponent, never serialized
    Bytes public_value;  // g^secret mod p
};

struct SessionKey {
    Bytes key;  // 32 bytes

    bool operator==(const SessionKey& other) const { return key == other.key; }
};

// Deterministic keypair from a seed.  Distinct seeds give distinct keys.
KeyPair generate_keypair(uint64_t rng_seed, const DhGroup& group = production_group());

// SHA-256 over the id's canonical encoding (u16 length prefix + UTF-8)
// concatenated with the private key octets.  Rejects empty or oversize ids.
Bytes commitment_hash(const std::string& id, const Bytes& private_key);

// g^secret mod p; secret must be in [1, order-1].
Bytes dh_public(const Bytes& secret, const DhGroup& group = production_group());

DhChallenge make_challenge(uint64_t rng_seed, const DhGroup& group = production_group());

// Shared key from own secret and the peer's public element.  The peer value
// is validated (1 < v < p-1) before use; the key is the SHA-256 of the
// shared element's big-endian minimal encoding under a fixed context label.
SessionKey derive_session_key(const Bytes& own_secret, const Bytes& peer_public,
                              const DhGroup& group = production_group());

// Sealed envelope layout (no outer header; the wire codec adds one):
//   [ephemeral public, 512 B][GCM nonce, 12 B][u32 ct length][ciphertext][tag, 16 B]
Bytes seal(std::span<const uint8_t> payload, const Bytes& recipient_public, uint64_t rng_seed,
           const DhGroup& group = production_group());

// Inverse of seal.  Any parse or authentication failure throws
// TamperedEnvelope; nothing about the failure position leaks.
Bytes open_envelope(std::span<const uint8_t> envelope, const Bytes& private_key,
                    const DhGroup& group = production_group());

// Fixed-width wire slot helpers for group elements.
Bytes to_element_slot(const Bytes& v);
Bytes from_element_slot(std::span<const uint8_t> slot);

// Raw AES-256-GCM with additional authenticated data; the building block
// behind seal/open_envelope (empty aad) and the per-session record layer.
// Key is 32 bytes, nonce 12, tag 16.  aead_decrypt returns false on any
// authentication failure.
Bytes aead_encrypt(const Bytes& key, const Bytes& nonce, std::span<const uint8_t> plaintext,
                   std::span<const uint8_t> aad, Bytes& tag_out);
bool aead_decrypt(const Bytes& key, const Bytes& nonce, std::span<const uint8_t> ciphertext,
                  std::span<const uint8_t> aad, const Bytes& tag, Bytes& plain_out);

}  // namespace dim
