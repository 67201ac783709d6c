#include "dim/handshake.hpp"

#include <climits>

#include "dim/errors.hpp"
#include "dim/hash.hpp"
#include "dim/rng.hpp"

namespace dim {

namespace {

bool within_window(int64_t now_ms, int64_t stamp_ms, int64_t window_ms) {
    if (window_ms == INT64_MAX) return true;  // expiry disabled
    int64_t delta = now_ms >= stamp_ms ? now_ms - stamp_ms : stamp_ms - now_ms;
    return delta <= window_ms;
}

Bytes record_nonce(uint8_t direction, uint64_t counter) {
    Bytes nonce{direction, 0, 0, 0};
    put_u64be(nonce, counter);
    return nonce;
}

Bytes record_aad(const Bytes& session_id, uint8_t direction, uint64_t counter) {
    Bytes aad = session_id;
    aad.push_back(direction);
    put_u64be(aad, counter);
    return aad;
}

}  // namespace

const char* reason_string(RejectReason r) {
    switch (r) {
        case RejectReason::None: return "none";
        case RejectReason::UnknownPeer: return "unknown-peer";
        case RejectReason::RevokedPeer: return "revoked-peer";
        case RejectReason::KeyMismatch: return "key-mismatch";
        case RejectReason::CommitmentMismatch: return "commitment-mismatch";
        case RejectReason::StaleTimestamp: return "stale-timestamp";
        case RejectReason::TamperedEnvelope: return "tampered-envelope";
        case RejectReason::MalformedMessage: return "malformed-message";
        case RejectReason::WrongRecipient: return "wrong-recipient";
        case RejectReason::ChallengeBindingMismatch: return "challenge-binding-mismatch";
        case RejectReason::UnexpectedMessage: return "unexpected-message";
        case RejectReason::SessionViolation: return "session-violation";
    }
    return "unknown";
}

Participant make_participant(const std::string& id, uint64_t key_seed, const DhGroup& group) {
    Participant p;
    p.id = id;
    p.keys = generate_keypair(key_seed, group);
    p.commitment = commitment_hash(id, p.keys.private_key);
    p.group = group;
    return p;
}

IdentityRecord enrollment_record(const Participant& p, int64_t now_ms, double x, double y) {
    IdentityRecord rec;
    rec.id = p.id;
    rec.public_key = p.keys.public_key;
    rec.timestamp_ms = now_ms;
    rec.x = x;
    rec.y = y;
    rec.commitment = p.commitment;
    return rec;
}

bool register_participant(LedgerNetwork& net, const Participant& p, int64_t now_ms, double x,
                          double y) {
    submit_tx(net, make_register_tx(enrollment_record(p, now_ms, x, y), p.id));
    for (size_t i = 0; i < net.nodes.size(); ++i)
        if (run_consensus_round(net).committed) return true;
    return false;
}

Bytes challenge_binding(const std::string& responder_id, const Bytes& challenge) {
    Bytes buf;
    put_lp_string(buf, responder_id);
    Bytes q = trim_leading_zeros(challenge);
    buf.insert(buf.end(), q.begin(), q.end());
    return sha256(buf);
}

Bytes session_identifier(const std::string& initiator_id, const std::string& responder_id,
                         const Bytes& challenge) {
    Bytes buf;
    put_lp_string(buf, initiator_id);
    put_lp_string(buf, responder_id);
    Bytes q = trim_leading_zeros(challenge);
    buf.insert(buf.end(), q.begin(), q.end());
    return sha256(buf);
}

InitiateResult initiate(Participant& initiator, const std::string& peer_id,
                        const LedgerNetwork& net, size_t node_index, uint64_t seed,
                        int64_t now_ms, const HandshakeConfig& cfg) {
    InitiateResult out;
    QueryResult peer = query_identity(net, node_index, peer_id);
    if (peer.status == QueryStatus::NotFound) {
        out.reason = RejectReason::UnknownPeer;
        return out;
    }
    if (peer.status == QueryStatus::Revoked && cfg.guards.revocation) {
        out.reason = RejectReason::RevokedPeer;
        return out;
    }

    HashDrbg drbg(seed);
    uint64_t eph_seed = drbg.next_u64();
    uint64_t seal_seed = drbg.next_u64();
    DhChallenge challenge = make_challenge(eph_seed, initiator.group);

    ChallengeMessage m;
    m.recipient_id = peer_id;
    m.sender_public = initiator.keys.public_key;
    m.timestamp_ms = now_ms;
    m.challenge = challenge.public_value;
    m.commitment_echo = peer.record.commitment;  // what the chain says *now*
    Bytes body = encode_challenge_body(m);
    out.wire = frame_payload(WireType::Challenge,
                             seal(body, peer.record.public_key, seal_seed, initiator.group));
    initiator.pending[peer_id] = {challenge, now_ms};
    out.ok = true;
    return out;
}

RespondResult respond(Participant& responder, std::span<const uint8_t> wire,
                      const std::string& claimed_sender_id, const LedgerNetwork& net,
                      size_t node_index, uint64_t seed, int64_t now_ms,
                      const HandshakeConfig& cfg) {
    RespondResult out;
    ChallengeMessage m;
    try {
        Frame f = parse_frame(wire);
        if (f.type != WireType::Challenge) {
            out.reason = RejectReason::MalformedMessage;
            return out;
        }
        Bytes body = open_envelope(f.payload, responder.keys.private_key, responder.group);
        m = decode_challenge_body(body);
    } catch (const TamperedEnvelope&) {
        out.reason = RejectReason::TamperedEnvelope;
        return out;
    } catch (const EncodingError&) {
        out.reason = RejectReason::MalformedMessage;
        return out;
    }
    if (m.recipient_id != responder.id) {
        out.reason = RejectReason::WrongRecipient;
        return out;
    }

    QueryResult sender = query_identity(net, node_index, claimed_sender_id);
    if (sender.status == QueryStatus::NotFound) {
        out.reason = RejectReason::UnknownPeer;
        return out;
    }
    if (cfg.guards.key_match && m.sender_public != sender.record.public_key) {
        out.reason = RejectReason::KeyMismatch;
        return out;
    }
    if (cfg.guards.commitment && m.commitment_echo != responder.commitment) {
        out.reason = RejectReason::CommitmentMismatch;
        return out;
    }
    if (cfg.guards.freshness && !within_window(now_ms, m.timestamp_ms, cfg.freshness_window_ms)) {
        out.reason = RejectReason::StaleTimestamp;
        return out;
    }
    if (cfg.guards.revocation && sender.status == QueryStatus::Revoked) {
        out.reason = RejectReason::RevokedPeer;
        return out;
    }

    HashDrbg drbg(seed);
    uint64_t eph_seed = drbg.next_u64();
    uint64_t seal_seed = drbg.next_u64();
    DhChallenge reply = make_challenge(eph_seed, responder.group);

    ResponseMessage r;
    r.recipient_id = claimed_sender_id;
    r.timestamp_ms = now_ms;
    r.response_value = reply.public_value;
    r.binding = challenge_binding(responder.id, m.challenge);
    Bytes body = encode_response_body(r);
    try {
        // Sealed to the key the challenge presented; with the key-match
        // guard on, that key has already been checked against the chain.
        out.wire = frame_payload(WireType::Response,
                                 seal(body, m.sender_public, seal_seed, responder.group));
        out.key = derive_session_key(reply.secret, m.challenge, responder.group);
    } catch (const Error&) {
        out.reason = RejectReason::MalformedMessage;  // degenerate group values
        return out;
    }
    out.session_id = session_identifier(claimed_sender_id, responder.id, m.challenge);
    out.ok = true;
    return out;
}

FinalizeResult finalize(Participant& initiator, std::span<const uint8_t> wire,
                        const std::string& claimed_sender_id, int64_t now_ms,
                        const HandshakeConfig& cfg) {
    FinalizeResult out;
    ResponseMessage m;
    try {
        Frame f = parse_frame(wire);
        if (f.type != WireType::Response) {
            out.reason = RejectReason::MalformedMessage;
            return out;
        }
        Bytes body = open_envelope(f.payload, initiator.keys.private_key, initiator.group);
        m = decode_response_body(body);
    } catch (const TamperedEnvelope&) {
        out.reason = RejectReason::TamperedEnvelope;
        return out;
    } catch (const EncodingError&) {
        out.reason = RejectReason::MalformedMessage;
        return out;
    }
    if (m.recipient_id != initiator.id) {
        out.reason = RejectReason::WrongRecipient;
        return out;
    }
    auto it = initiator.pending.find(claimed_sender_id);
    if (it == initiator.pending.end()) {
        out.reason = RejectReason::UnexpectedMessage;
        return out;
    }
    const DhChallenge& challenge = it->second.challenge;

    if (cfg.guards.binding &&
        m.binding != challenge_binding(claimed_sender_id, challenge.public_value)) {
        out.reason = RejectReason::ChallengeBindingMismatch;
        return out;
    }
    if (cfg.guards.freshness && !within_window(now_ms, m.timestamp_ms, cfg.freshness_window_ms)) {
        out.reason = RejectReason::StaleTimestamp;
        return out;
    }
    try {
        out.key = derive_session_key(challenge.secret, m.response_value, initiator.group);
    } catch (const Error&) {
        out.reason = RejectReason::MalformedMessage;
        return out;
    }
    out.session_id = session_identifier(initiator.id, claimed_sender_id, challenge.public_value);
    initiator.pending.erase(it);
    out.ok = true;
    return out;
}

HandshakeOutcome run_handshake(Participant& initiator, Participant& responder,
                               const LedgerNetwork& net, size_t node_index, uint64_t seed,
                               int64_t now_ms, const HandshakeConfig& cfg) {
    HandshakeOutcome out;
    HashDrbg drbg(seed ^ 0x68736b6472766572ull);  // driver substream
    uint64_t init_seed = drbg.next_u64();
    uint64_t resp_seed = drbg.next_u64();

    InitiateResult ir = initiate(initiator, responder.id, net, node_index, init_seed, now_ms, cfg);
    if (!ir.ok) {
        out.reason = ir.reason;
        return out;
    }
    RespondResult rr =
        respond(responder, ir.wire, initiator.id, net, node_index, resp_seed, now_ms, cfg);
    out.transcript.push_back({"init->resp", "challenge", ir.wire.size(), now_ms,
                              rr.ok ? "ok" : reason_string(rr.reason)});
    if (!rr.ok) {
        out.reason = rr.reason;
        return out;
    }
    FinalizeResult fr = finalize(initiator, rr.wire, responder.id, now_ms, cfg);
    out.transcript.push_back({"resp->init", "response", rr.wire.size(), now_ms,
                              fr.ok ? "ok" : reason_string(fr.reason)});
    if (!fr.ok) {
        out.reason = fr.reason;
        return out;
    }
    out.established = true;
    out.initiator_key = fr.key;
    out.responder_key = rr.key;
    out.session_id = fr.session_id;
    return out;
}

SecureChannel make_channel(const Bytes& session_id, const SessionKey& key,
                           uint8_t send_direction) {
    if (session_id.size() != kDigestSize)
        throw EncodingError("channel: session id must be 32 bytes");
    if (key.key.size() != kSessionKeySize)
        throw EncodingError("channel: key must be 32 bytes");
    if (send_direction > 1) throw EncodingError("channel: direction must be 0 or 1");
    SecureChannel ch;
    ch.session_id = session_id;
    ch.key = key;
    ch.send_direction = send_direction;
    return ch;
}

Bytes channel_send(SecureChannel& ch, std::span<const uint8_t> plaintext) {
    DataRecord rec;
    rec.session_id = ch.session_id;
    rec.direction = ch.send_direction;
    rec.counter = ch.send_counter;
    Bytes nonce = record_nonce(rec.direction, rec.counter);
    Bytes aad = record_aad(ch.session_id, rec.direction, rec.counter);
    rec.ciphertext = aead_encrypt(ch.key.key, nonce, plaintext, aad, rec.tag);
    ++ch.send_counter;
    return encode_data(rec);
}

ChannelRecv channel_recv(SecureChannel& ch, std::span<const uint8_t> wire) {
    ChannelRecv out;
    DataRecord rec;
    try {
        rec = decode_data(wire);
    } catch (const EncodingError&) {
        out.reason = RejectReason::MalformedMessage;
        return out;
    }
    if (rec.session_id != ch.session_id) {
        out.reason = RejectReason::SessionViolation;
        return out;
    }
    if (rec.direction == ch.send_direction) {  // reflected traffic
        out.reason = RejectReason::SessionViolation;
        return out;
    }
    if (rec.counter < ch.recv_counter) {  // replayed or reordered record
        out.reason = RejectReason::SessionViolation;
        return out;
    }
    Bytes nonce = record_nonce(rec.direction, rec.counter);
    Bytes aad = record_aad(ch.session_id, rec.direction, rec.counter);
    if (!aead_decrypt(ch.key.key, nonce, rec.ciphertext, aad, rec.tag, out.plaintext)) {
        out.reason = RejectReason::TamperedEnvelope;
        return out;
    }
    ch.recv_counter = rec.counter + 1;
    out.ok = true;
    return out;
}

}  // namespace dim
