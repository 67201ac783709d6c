#include "dim/identity.hpp"

#include <openssl/evp.h>

#include <stdexcept>

#include "dim/errors.hpp"
#include "dim/hash.hpp"
#include "dim/rng.hpp"

namespace dim {

namespace {

// Context labels keep the session-key and envelope-key derivations in
// disjoint hash domains.
constexpr const char* kSessionLabel = "dimv2x.v1.session-key";
constexpr const char* kEnvelopeLabel = "dimv2x.v1.envelope-key";

constexpr size_t kGcmNonceSize = kEnvelopeNonceSize;
constexpr size_t kGcmTagSize = kEnvelopeTagSize;

Bytes kdf(const char* label, const Bytes& shared_element) {
    std::string l(label);
    return sha256_cat({as_span(l), as_span(shared_element)});
}

void check_id(const std::string& id) {
    if (id.empty()) throw InvalidIdentity("identity id must be non-empty");
    if (id.size() > kMaxIdBytes) throw InvalidIdentity("identity id exceeds 64 bytes");
}

}  // namespace

KeyPair generate_keypair(uint64_t rng_seed, const DhGroup& group) {
    HashDrbg drbg(rng_seed);
    Bytes secret = draw_secret(drbg, group);
    return KeyPair{dh_public(secret, group), secret};
}

Bytes commitment_hash(const std::string& id, const Bytes& private_key) {
    check_id(id);
    Bytes canonical;
    put_lp_string(canonical, id);
    return sha256_cat({as_span(canonical), as_span(private_key)});
}

Bytes dh_public(const Bytes& secret, const DhGroup& group) {
    Bytes trimmed = trim_leading_zeros(secret);
    if (trimmed.empty()) throw InvalidSecret("dh secret must be nonzero");
    if (compare_bytes(trimmed, group.order) >= 0)
        throw InvalidSecret("dh secret must be below the group order");
    return mod_exp(group.g, trimmed, group.p);
}

DhChallenge make_challenge(uint64_t rng_seed, const DhGroup& group) {
    HashDrbg drbg(rng_seed);
    Bytes secret = draw_secret(drbg, group);
    return DhChallenge{secret, dh_public(secret, group)};
}

SessionKey derive_session_key(const Bytes& own_secret, const Bytes& peer_public,
                              const DhGroup& group) {
    Bytes secret = trim_leading_zeros(own_secret);
    if (secret.empty() || compare_bytes(secret, group.order) >= 0)
        throw InvalidSecret("dh secret out of range");
    if (!valid_element(peer_public, group))
        throw InvalidPublicValue("peer public value outside (1, p-1)");
    Bytes shared = mod_exp(peer_public, secret, group.p);
    return SessionKey{kdf(kSessionLabel, shared)};
}

Bytes to_element_slot(const Bytes& v) {
    Bytes trimmed = trim_leading_zeros(v);
    if (trimmed.size() > kElementSlot) throw EncodingError("group element exceeds wire slot");
    Bytes slot(kElementSlot - trimmed.size(), 0);
    slot.insert(slot.end(), trimmed.begin(), trimmed.end());
    return slot;
}

Bytes from_element_slot(std::span<const uint8_t> slot) {
    if (slot.size() != kElementSlot) throw EncodingError("bad element slot size");
    return trim_leading_zeros(Bytes(slot.begin(), slot.end()));
}

Bytes aead_encrypt(const Bytes& key, const Bytes& nonce, std::span<const uint8_t> plaintext,
                   std::span<const uint8_t> aad, Bytes& tag_out) {
    if (key.size() != kSessionKeySize || nonce.size() != kGcmNonceSize)
        throw std::invalid_argument("aead_encrypt: bad key or nonce size");
    EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
    if (!ctx) throw std::runtime_error("EVP_CIPHER_CTX_new failed");
    Bytes ct(plaintext.size());
    tag_out.assign(kGcmTagSize, 0);
    int len = 0;
    bool ok = EVP_EncryptInit_ex(ctx, EVP_aes_256_gcm(), nullptr, nullptr, nullptr) == 1 &&
              EVP_CIPHER_CTX_ctrl(ctx, EVP_CTRL_GCM_SET_IVLEN, kGcmNonceSize, nullptr) == 1 &&
              EVP_EncryptInit_ex(ctx, nullptr, nullptr, key.data(), nonce.data()) == 1;
    if (ok && !aad.empty())
        ok = EVP_EncryptUpdate(ctx, nullptr, &len, aad.data(), static_cast<int>(aad.size())) == 1;
    len = 0;
    if (ok && !plaintext.empty())
        ok = EVP_EncryptUpdate(ctx, ct.data(), &len, plaintext.data(),
                               static_cast<int>(plaintext.size())) == 1;
    int fin = 0;
    ok = ok && EVP_EncryptFinal_ex(ctx, ct.data() + len, &fin) == 1 &&
         EVP_CIPHER_CTX_ctrl(ctx, EVP_CTRL_GCM_GET_TAG, kGcmTagSize, tag_out.data()) == 1;
    EVP_CIPHER_CTX_free(ctx);
    if (!ok) throw std::runtime_error("gcm encrypt failed");
    return ct;
}

bool aead_decrypt(const Bytes& key, const Bytes& nonce, std::span<const uint8_t> ciphertext,
                  std::span<const uint8_t> aad, const Bytes& tag, Bytes& plain_out) {
    if (key.size() != kSessionKeySize || nonce.size() != kGcmNonceSize ||
        tag.size() != kGcmTagSize)
        return false;
    EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
    if (!ctx) throw std::runtime_error("EVP_CIPHER_CTX_new failed");
    plain_out.assign(ciphertext.size(), 0);
    int len = 0;
    bool ok = EVP_DecryptInit_ex(ctx, EVP_aes_256_gcm(), nullptr, nullptr, nullptr) == 1 &&
              EVP_CIPHER_CTX_ctrl(ctx, EVP_CTRL_GCM_SET_IVLEN, kGcmNonceSize, nullptr) == 1 &&
              EVP_DecryptInit_ex(ctx, nullptr, nullptr, key.data(), nonce.data()) == 1;
    if (ok && !aad.empty())
        ok = EVP_DecryptUpdate(ctx, nullptr, &len, aad.data(), static_cast<int>(aad.size())) == 1;
    len = 0;
    if (ok && !ciphertext.empty())
        ok = EVP_DecryptUpdate(ctx, plain_out.data(), &len, ciphertext.data(),
                               static_cast<int>(ciphertext.size())) == 1;
    Bytes tag_copy = tag;
    int fin = 0;
    ok = ok &&
         EVP_CIPHER_CTX_ctrl(ctx, EVP_CTRL_GCM_SET_TAG, kGcmTagSize, tag_copy.data()) == 1 &&
         EVP_DecryptFinal_ex(ctx, plain_out.data() + len, &fin) == 1;
    EVP_CIPHER_CTX_free(ctx);
    return ok;
}

Bytes seal(std::span<const uint8_t> payload, const Bytes& recipient_public, uint64_t rng_seed,
           const DhGroup& group) {
    if (payload.size() > kMaxSealPayload) throw EncodingError("seal payload exceeds 64 KiB");
    if (!valid_element(recipient_public, group))
        throw InvalidPublicValue("recipient public value outside (1, p-1)");
    HashDrbg drbg(rng_seed);
    Bytes eph_secret = draw_secret(drbg, group);
    Bytes eph_public = dh_public(eph_secret, group);
    Bytes kek = kdf(kEnvelopeLabel, mod_exp(recipient_public, eph_secret, group.p));
    Bytes nonce = drbg.bytes(kGcmNonceSize);
    Bytes tag;
    Bytes ct = aead_encrypt(kek, nonce, payload, {}, tag);

    Bytes out;
    out.reserve(kElementSlot + kGcmNonceSize + 4 + ct.size() + kGcmTagSize);
    Bytes slot = to_element_slot(eph_public);
    out.insert(out.end(), slot.begin(), slot.end());
    out.insert(out.end(), nonce.begin(), nonce.end());
    put_u32be(out, static_cast<uint32_t>(ct.size()));
    out.insert(out.end(), ct.begin(), ct.end());
    out.insert(out.end(), tag.begin(), tag.end());
    return out;
}

Bytes open_envelope(std::span<const uint8_t> envelope, const Bytes& private_key,
                    const DhGroup& group) {
    try {
        ByteReader r{envelope};
        Bytes slot = r.take(kElementSlot);
        Bytes eph_public = from_element_slot(slot);
        Bytes nonce = r.take(kGcmNonceSize);
        uint32_t ct_len = r.u32be();
        Bytes ct = r.take(ct_len);
        Bytes tag = r.take(kGcmTagSize);
        if (r.remaining() != 0) throw TamperedEnvelope("trailing bytes");
        if (!valid_element(eph_public, group)) throw TamperedEnvelope("bad ephemeral element");
        Bytes kek = kdf(kEnvelopeLabel, mod_exp(eph_public, trim_leading_zeros(private_key), group.p));
        Bytes plain;
        if (!aead_decrypt(kek, nonce, ct, {}, tag, plain))
            throw TamperedEnvelope("authentication failed");
        return plain;
    } catch (const TamperedEnvelope&) {
        throw;
    } catch (const std::exception&) {
        // truncated/garbled structure is indistinguishable from tampering
        throw TamperedEnvelope("malformed envelope");
    }
}

}  // namespace dim
