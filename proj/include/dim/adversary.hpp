#pragma once
// Scripted adversaries against the handshake.  Each script plays a concrete
// attack in a fresh world and reports whether the protocol state machine
// accepted something it should have refused.  Running the suite with single
// guards disabled shows which check stops which attack.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dim/handshake.hpp"

namespace dim {

enum class AttackKind : uint8_t {
    Impersonate = 0,          // challenge under someone else's name
    ChallengeReplay,          // captured challenge delivered again later
    ResponseReplay,           // captured response delivered again
    ChallengeSwap,            // in-path swap of the DH challenge
    RevokedResurrection,      // revoked identity keeps talking
};

inline constexpr std::array<AttackKind, 5> kAllAttackKinds = {
    AttackKind::Impersonate,        AttackKind::ChallengeReplay,
    AttackKind::ResponseReplay,     AttackKind::ChallengeSwap,
    AttackKind::RevokedResurrection,
};

const char* attack_name(AttackKind kind);

// Scripts come in variants (e.g. the impersonator either presents its own
// key or copies the chain key and guesses the commitment).
int variant_count(AttackKind kind);

struct AttackOutcome {
    AttackKind kind{};
    int variant = 0;
    bool succeeded = false;                     // accepted where a refusal was required
    RejectReason reason = RejectReason::None;   // the guard that stopped it
};

// Plays one attack instance in a fresh 4-verifier world.  `seed` drives all
// key material deterministically; `cfg` is the configuration the *honest*
// parties run (the attacker ignores it).
AttackOutcome run_attack(AttackKind kind, int variant, uint64_t seed,
                         const HandshakeConfig& cfg);

struct AttackStats {
    AttackKind kind{};
    int attempts = 0;
    int successes = 0;
    std::map<std::string, int> rejections;  // reason string -> count
};

struct AttackReport {
    std::vector<AttackStats> per_kind;
    int attempts = 0;
    int successes = 0;
};

// Runs `instances_per_kind` of every attack kind, cycling variants.
AttackReport attack_suite(int instances_per_kind, uint64_t seed, const HandshakeConfig& cfg);

// Plain-text table, one row per attack kind plus a total row.
std::string format_report(const AttackReport& report);

}  // namespace dim
