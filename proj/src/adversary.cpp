#include "dim/adversary.hpp"

#include <sstream>

#include "dim/rng.hpp"

namespace dim {

namespace {

constexpr int64_t kBase = 1700000000000;  // scripts run on a fixed local clock

struct AttackWorld {
    LedgerNetwork net = make_network(4);
    Participant init;
    Participant resp;
};

AttackWorld make_attack_world(HashDrbg& drbg) {
    AttackWorld w;
    w.init = make_participant("veh-init", drbg.next_u64());
    w.resp = make_participant("veh-resp", drbg.next_u64());
    register_participant(w.net, w.init, kBase);
    register_participant(w.net, w.resp, kBase);
    return w;
}

Bytes craft_challenge(const std::string& recipient, const Bytes& recipient_key,
                      const Bytes& sender_public, const Bytes& challenge, const Bytes& echo,
                      int64_t ts, uint64_t seal_seed, const DhGroup& group) {
    ChallengeMessage m;
    m.recipient_id = recipient;
    m.sender_public = sender_public;
    m.timestamp_ms = ts;
    m.challenge = challenge;
    m.commitment_echo = echo;
    return frame_payload(WireType::Challenge,
                         seal(encode_challenge_body(m), recipient_key, seal_seed, group));
}

AttackOutcome impersonate(int variant, HashDrbg& drbg, const HandshakeConfig& cfg) {
    AttackWorld w = make_attack_world(drbg);
    Participant mallory = make_participant("veh-mall", drbg.next_u64());
    QueryResult resp_rec = query_identity(w.net, 0, w.resp.id);
    QueryResult init_rec = query_identity(w.net, 0, w.init.id);
    DhChallenge q = make_challenge(drbg.next_u64(), mallory.group);

    Bytes presented_key;
    Bytes echo;
    if (variant == 0) {
        // presents its own key, echoes the real commitment read off the chain
        presented_key = mallory.keys.public_key;
        echo = resp_rec.record.commitment;
    } else {
        // copies the victim's chain key but fabricates the echo blind
        presented_key = init_rec.record.public_key;
        echo = HashDrbg(drbg.next_u64()).bytes(32);
    }
    Bytes wire = craft_challenge(w.resp.id, resp_rec.record.public_key, presented_key,
                                 q.public_value, echo, kBase, drbg.next_u64(), mallory.group);
    RespondResult rr =
        respond(w.resp, wire, w.init.id, w.net, 0, drbg.next_u64(), kBase, cfg);
    return {AttackKind::Impersonate, variant, rr.ok, rr.reason};
}

AttackOutcome challenge_replay(int variant, HashDrbg& drbg, const HandshakeConfig& cfg) {
    AttackWorld w = make_attack_world(drbg);
    InitiateResult ir = initiate(w.init, w.resp.id, w.net, 0, drbg.next_u64(), kBase, cfg);
    if (!ir.ok) return {AttackKind::ChallengeReplay, variant, false, ir.reason};

    if (variant == 0) {
        // same responder, ten seconds late
        RespondResult rr = respond(w.resp, ir.wire, w.init.id, w.net, 0, drbg.next_u64(),
                                   kBase + 10000, cfg);
        return {AttackKind::ChallengeReplay, variant, rr.ok, rr.reason};
    }
    // responder rotated keys in between; the capture is sealed to dead keys
    Participant rotated = make_participant(w.resp.id, drbg.next_u64());
    register_participant(w.net, rotated, kBase + 500);
    RespondResult rr =
        respond(rotated, ir.wire, w.init.id, w.net, 0, drbg.next_u64(), kBase + 1000, cfg);
    return {AttackKind::ChallengeReplay, variant, rr.ok, rr.reason};
}

AttackOutcome response_replay(int variant, HashDrbg& drbg, const HandshakeConfig& cfg) {
    AttackWorld w = make_attack_world(drbg);
    InitiateResult ir = initiate(w.init, w.resp.id, w.net, 0, drbg.next_u64(), kBase, cfg);
    if (!ir.ok) return {AttackKind::ResponseReplay, variant, false, ir.reason};
    RespondResult rr =
        respond(w.resp, ir.wire, w.init.id, w.net, 0, drbg.next_u64(), kBase, cfg);
    if (!rr.ok) return {AttackKind::ResponseReplay, variant, false, rr.reason};

    if (variant == 0) {
        // let the first exchange finish, then replay its response into a
        // second, fresh handshake
        finalize(w.init, rr.wire, w.resp.id, kBase, cfg);
        InitiateResult second =
            initiate(w.init, w.resp.id, w.net, 0, drbg.next_u64(), kBase + 100, cfg);
        if (!second.ok) return {AttackKind::ResponseReplay, variant, false, second.reason};
        FinalizeResult fr = finalize(w.init, rr.wire, w.resp.id, kBase + 100, cfg);
        return {AttackKind::ResponseReplay, variant, fr.ok, fr.reason};
    }
    // hold the genuine response back and deliver it ten seconds late
    FinalizeResult fr = finalize(w.init, rr.wire, w.resp.id, kBase + 10000, cfg);
    return {AttackKind::ResponseReplay, variant, fr.ok, fr.reason};
}

AttackOutcome challenge_swap(int variant, HashDrbg& drbg, const HandshakeConfig& cfg) {
    AttackWorld w = make_attack_world(drbg);
    // victim opens a handshake; the in-path attacker drops the real
    // challenge and substitutes one with its own ephemeral, built entirely
    // from public chain data
    InitiateResult ir = initiate(w.init, w.resp.id, w.net, 0, drbg.next_u64(), kBase, cfg);
    if (!ir.ok) return {AttackKind::ChallengeSwap, variant, false, ir.reason};
    QueryResult resp_rec = query_identity(w.net, 0, w.resp.id);
    QueryResult init_rec = query_identity(w.net, 0, w.init.id);
    DhChallenge swapped = make_challenge(drbg.next_u64(), w.init.group);
    Bytes forged = craft_challenge(w.resp.id, resp_rec.record.public_key,
                                   init_rec.record.public_key, swapped.public_value,
                                   resp_rec.record.commitment, kBase, drbg.next_u64(),
                                   w.init.group);
    RespondResult rr =
        respond(w.resp, forged, w.init.id, w.net, 0, drbg.next_u64(), kBase, cfg);
    if (!rr.ok) return {AttackKind::ChallengeSwap, variant, false, rr.reason};
    // forward the response to the victim, who still holds its own ephemeral
    FinalizeResult fr = finalize(w.init, rr.wire, w.resp.id, kBase, cfg);
    return {AttackKind::ChallengeSwap, variant, fr.ok, fr.reason};
}

AttackOutcome revoked_resurrection(int variant, HashDrbg& drbg, const HandshakeConfig& cfg) {
    AttackWorld w = make_attack_world(drbg);
    if (variant == 0) {
        // the attacker-held identity is revoked but keeps initiating
        revoke_identity(w.net, w.init.id, "node-0");
        run_consensus_round(w.net);
        HandshakeConfig attacker_cfg = cfg;
        attacker_cfg.guards.revocation = false;  // the attacker skips its own checks
        InitiateResult ir =
            initiate(w.init, w.resp.id, w.net, 0, drbg.next_u64(), kBase + 100, attacker_cfg);
        if (!ir.ok) return {AttackKind::RevokedResurrection, variant, false, ir.reason};
        RespondResult rr =
            respond(w.resp, ir.wire, w.init.id, w.net, 0, drbg.next_u64(), kBase + 100, cfg);
        return {AttackKind::RevokedResurrection, variant, rr.ok, rr.reason};
    }
    // honest vehicle tries to talk *to* a revoked identity
    revoke_identity(w.net, w.resp.id, "node-0");
    run_consensus_round(w.net);
    InitiateResult ir =
        initiate(w.init, w.resp.id, w.net, 0, drbg.next_u64(), kBase + 100, cfg);
    return {AttackKind::RevokedResurrection, variant, ir.ok, ir.reason};
}

}  // namespace

const char* attack_name(AttackKind kind) {
    switch (kind) {
        case AttackKind::Impersonate: return "impersonate";
        case AttackKind::ChallengeReplay: return "challenge-replay";
        case AttackKind::ResponseReplay: return "response-replay";
        case AttackKind::ChallengeSwap: return "challenge-swap";
        case AttackKind::RevokedResurrection: return "revoked-resurrection";
    }
    return "unknown";
}

int variant_count(AttackKind kind) {
    return kind == AttackKind::ChallengeSwap ? 1 : 2;
}

AttackOutcome run_attack(AttackKind kind, int variant, uint64_t seed,
                         const HandshakeConfig& cfg) {
    HashDrbg drbg(mix_seed(seed, static_cast<uint64_t>(kind), static_cast<uint64_t>(variant)));
    switch (kind) {
        case AttackKind::Impersonate: return impersonate(variant, drbg, cfg);
        case AttackKind::ChallengeReplay: return challenge_replay(variant, drbg, cfg);
        case AttackKind::ResponseReplay: return response_replay(variant, drbg, cfg);
        case AttackKind::ChallengeSwap: return challenge_swap(variant, drbg, cfg);
        case AttackKind::RevokedResurrection: return revoked_resurrection(variant, drbg, cfg);
    }
    throw std::invalid_argument("unknown attack kind");
}

AttackReport attack_suite(int instances_per_kind, uint64_t seed, const HandshakeConfig& cfg) {
    AttackReport report;
    for (AttackKind kind : kAllAttackKinds) {
        AttackStats stats;
        stats.kind = kind;
        for (int i = 0; i < instances_per_kind; ++i) {
            int variant = i % variant_count(kind);
            AttackOutcome out =
                run_attack(kind, variant, mix_seed(seed, static_cast<uint64_t>(kind),
                                                   static_cast<uint64_t>(i)),
                           cfg);
            stats.attempts += 1;
            if (out.succeeded) {
                stats.successes += 1;
            } else {
                stats.rejections[reason_string(out.reason)] += 1;
            }
        }
        report.attempts += stats.attempts;
        report.successes += stats.successes;
        report.per_kind.push_back(std::move(stats));
    }
    return report;
}

std::string format_report(const AttackReport& report) {
    std::ostringstream os;
    os << "attack                  attempts  successes  rejections\n";
    for (const AttackStats& s : report.per_kind) {
        std::string name = attack_name(s.kind);
        os << name << std::string(name.size() < 24 ? 24 - name.size() : 1, ' ');
        std::string attempts = std::to_string(s.attempts);
        os << std::string(attempts.size() < 8 ? 8 - attempts.size() : 0, ' ') << attempts;
        std::string successes = std::to_string(s.successes);
        os << std::string(successes.size() < 11 ? 11 - successes.size() : 0, ' ') << successes;
        os << "  ";
        bool first = true;
        for (const auto& [reason, count] : s.rejections) {
            if (!first) os << ", ";
            os << reason << ":" << count;
            first = false;
        }
        if (s.rejections.empty()) os << "-";
        os << "\n";
    }
    os << "total" << std::string(19, ' ');
    std::string attempts = std::to_string(report.attempts);
    os << std::string(attempts.size() < 8 ? 8 - attempts.size() : 0, ' ') << attempts;
    std::string successes = std::to_string(report.successes);
    os << std::string(successes.size() < 11 ? 11 - successes.size() : 0, ' ') << successes;
    os << "\n";
    return os.str();
}

}  // namespace dim
