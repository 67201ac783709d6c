#pragma once
// Mutual authentication between two registered identities, anchored in the
// replicated ledger.  One exchange:
//
//   initiator                                   responder
//     ledger lookup(responder)  ------------------>
//     sealed Challenge {resp id, init public key,
//                       timestamp, ephemeral Q,
//                       responder's chain commitment}
//                               <------------------  ledger lookup(initiator)
//                                                    sealed Response {init id,
//                                                    timestamp, ephemeral R,
//                                                    binding hash}
//
// Both sides end with the same session key (DH over the two ephemerals).
// Each verification can be individually disabled through GuardConfig so the
// adversary suite can show which attack each one stops.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dim/identity.hpp"
#include "dim/ledger.hpp"
#include "dim/wire.hpp"

namespace dim {

struct GuardConfig {
    bool freshness = true;    // timestamps must be within the window
    bool key_match = true;    // challenge's sender key must match the chain
    bool commitment = true;   // challenge must echo our current commitment
    bool binding = true;      // response must bind to our challenge
    bool revocation = true;   // revoked peers are refused
};

struct HandshakeConfig {
    // Max allowed |local clock - message timestamp|.  INT64_MAX disables
    // expiry entirely (messages never go stale).
    int64_t freshness_window_ms = 5000;
    GuardConfig guards;
};

enum class RejectReason : uint8_t {
    None = 0,
    UnknownPeer,               // no chain record for the id
    RevokedPeer,               // chain marks the id revoked
    KeyMismatch,               // in-message key differs from the chain key
    CommitmentMismatch,        // echoed commitment is not our current one
    StaleTimestamp,            // outside the freshness window
    TamperedEnvelope,          // decryption/authentication failed
    MalformedMessage,          // authenticated but undecodable body
    WrongRecipient,            // body addressed to someone else
    ChallengeBindingMismatch,  // response does not bind to our challenge
    UnexpectedMessage,         // no handshake pending with that peer
    SessionViolation,          // record-layer misuse (replay, wrong direction)
};

const char* reason_string(RejectReason r);

// A protocol endpoint: long-term keys plus in-flight handshake state.
struct Participant {
    std::string id;
    KeyPair keys;
    Bytes commitment;  // commitment_hash(id, private key), what the chain should hold
    DhGroup group;

    struct PendingHandshake {
        DhChallenge challenge;  // our ephemeral pair
        int64_t issued_at_ms = 0;
    };
    std::map<std::string, PendingHandshake> pending;  // keyed by peer id
};

Participant make_participant(const std::string& id, uint64_t key_seed,
                             const DhGroup& group = production_group());

IdentityRecord enrollment_record(const Participant& p, int64_t now_ms, double x = 0,
                                 double y = 0);

// Submits the participant's record and drives consensus rounds until it
// commits (at most one full leader rotation).  Returns false if no round
// could commit, e.g. too many verifiers are down.
bool register_participant(LedgerNetwork& net, const Participant& p, int64_t now_ms,
                          double x = 0, double y = 0);

// Hash tying a response to the challenge it answers: SHA-256 over the
// responder id (length-prefixed) and the challenge element.
Bytes challenge_binding(const std::string& responder_id, const Bytes& challenge);

// Session identifier both sides can compute: SHA-256 over both ids
// (length-prefixed, initiator first) and the challenge element.
Bytes session_identifier(const std::string& initiator_id, const std::string& responder_id,
                         const Bytes& challenge);

struct InitiateResult {
    bool ok = false;
    RejectReason reason = RejectReason::None;
    Bytes wire;  // framed sealed challenge when ok
};

// Looks the peer up on the given verifier node, refuses unknown/revoked
// peers, and emits the sealed challenge.  `seed` drives the ephemeral and
// the sealing randomness deterministically.
InitiateResult initiate(Participant& initiator, const std::string& peer_id,
                        const LedgerNetwork& net, size_t node_index, uint64_t seed,
                        int64_t now_ms, const HandshakeConfig& cfg);

struct RespondResult {
    bool ok = false;
    RejectReason reason = RejectReason::None;
    Bytes wire;        // framed sealed response when ok
    SessionKey key;    // responder's session key when ok
    Bytes session_id;  // 32 bytes when ok
};

// Verifies a received challenge and, if every enabled guard passes, answers
// it.  The sender id is claimed by the transport (the challenge body does
// not assert it); the guards are what make the claim trustworthy.
RespondResult respond(Participant& responder, std::span<const uint8_t> wire,
                      const std::string& claimed_sender_id, const LedgerNetwork& net,
                      size_t node_index, uint64_t seed, int64_t now_ms,
                      const HandshakeConfig& cfg);

struct FinalizeResult {
    bool ok = false;
    RejectReason reason = RejectReason::None;
    SessionKey key;
    Bytes session_id;
};

// Verifies the response against the pending challenge and derives the
// session key.  Consumes the pending state on success.
FinalizeResult finalize(Participant& initiator, std::span<const uint8_t> wire,
                        const std::string& claimed_sender_id, int64_t now_ms,
                        const HandshakeConfig& cfg);

// ---- full-exchange driver ----------------------------------------------

struct TranscriptEntry {
    std::string direction;  // "init->resp" or "resp->init"
    std::string message;    // "challenge" or "response"
    size_t size_bytes = 0;
    int64_t timestamp_ms = 0;
    std::string verdict;    // "ok" or a reject reason
};

struct HandshakeOutcome {
    bool established = false;
    RejectReason reason = RejectReason::None;  // first rejection
    SessionKey initiator_key;
    SessionKey responder_key;
    Bytes session_id;
    std::vector<TranscriptEntry> transcript;
};

// Runs initiate -> respond -> finalize in memory and logs the transcript.
HandshakeOutcome run_handshake(Participant& initiator, Participant& responder,
                               const LedgerNetwork& net, size_t node_index, uint64_t seed,
                               int64_t now_ms, const HandshakeConfig& cfg);

// ---- post-handshake record layer ---------------------------------------

// Authenticated channel endpoint.  Counters are per-direction and strictly
// increasing; replayed or reordered records are refused.
struct SecureChannel {
    Bytes session_id;
    SessionKey key;
    uint8_t send_direction = 0;  // 0 = initiator side, 1 = responder side
    uint64_t send_counter = 0;   // next record number to send
    uint64_t recv_counter = 0;   // lowest acceptable incoming record number
};

SecureChannel make_channel(const Bytes& session_id, const SessionKey& key,
                           uint8_t send_direction);

// Encrypts one payload into a framed data record and bumps the counter.
Bytes channel_send(SecureChannel& ch, std::span<const uint8_t> plaintext);

struct ChannelRecv {
    bool ok = false;
    RejectReason reason = RejectReason::None;
    Bytes plaintext;
};

// Authenticates and decrypts one framed data record.
ChannelRecv channel_recv(SecureChannel& ch, std::span<const uint8_t> wire);

}  // namespace dim
