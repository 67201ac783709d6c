// Replicated append-only identity ledger.  The replication protocol is
// modeled as leader proposal + majority vote over an in-process bus: the
// leader rotates round-robin each round, every live node validates and votes,
// and a block commits only when votes reach floor(n/2)+1.  Nodes fail by
// crashing (no Byzantine behavior); a recovered node catches up by replaying
// the committed chain from a live replica.  Membership is fixed in the
// genesis block.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dim/bytes.hpp"
#include "dim/identity.hpp"

namespace dim {

enum class TxKind : uint8_t { RegisterIdentity = 1, RevokeIdentity = 2 };

struct LedgerTx {
    TxKind kind;
    std::string submitter;   // vehicle id or verifier node id
    uint64_t seq_hint = 0;   // submitter-local ordering hint, part of tx identity
    IdentityRecord record;   // RegisterIdentity payload
    std::string target_id;   // RevokeIdentity payload
};

// Content digest of the canonical tx encoding; identical submissions are
// deduplicated by this id.
Bytes tx_id(const LedgerTx& tx);

struct LedgerBlock {
    uint64_t height = 0;
    Bytes prev_digest;                      // 32 bytes, zero for genesis
    std::vector<LedgerTx> txs;
    std::string proposer;
    std::vector<std::string> commit_votes;  // node ids that voted commit
};

Bytes block_digest(const LedgerBlock& block);

struct VerifierNode {
    std::string node_id;
    bool alive = true;
    std::vector<LedgerBlock> chain;    // committed blocks, genesis first
    std::vector<LedgerTx> mempool;     // submitted, not yet committed
};

struct LedgerNetwork {
    std::vector<VerifierNode> nodes;
    uint64_t round = 0;  // advances every consensus attempt, drives rotation

    std::vector<std::string> roster() const;
};

// n nodes named node-0..node-(n-1), each starting from the same genesis
// block (which carries the roster in its vote list).
LedgerNetwork make_network(int n);

int quorum_size(const LedgerNetwork& net);

LedgerTx make_register_tx(const IdentityRecord& record, const std::string& submitter,
                          uint64_t seq_hint = 0);
LedgerTx make_revoke_tx(const std::string& target_id, const std::string& authority,
                        uint64_t seq_hint = 0);

// Validates and broadcasts to every live node's mempool; duplicate
// submissions (same tx id) are absorbed.  Throws RejectedTx on structural
// problems, e.g. a commitment that is not 32 bytes.
void submit_tx(LedgerNetwork& net, const LedgerTx& tx);

struct RoundOutcome {
    bool committed = false;
    LedgerBlock block;    // valid when committed
    std::string leader;
    int votes = 0;
};

// One consensus attempt.  The current leader proposes its mempool in arrival
// order; the block commits iff live votes reach the quorum.  The round
// counter advances whether or not the attempt succeeds, rotating leadership
// past crashed nodes.
RoundOutcome run_consensus_round(LedgerNetwork& net);

enum class QueryStatus { Found, NotFound, Revoked };

struct QueryResult {
    QueryStatus status = QueryStatus::NotFound;
    IdentityRecord record;  // latest committed record when Found or Revoked
};

// Reads only the node's committed chain.  The latest register wins; a revoke
// committed at or after it dominates.  Throws NodeUnavailable if the node is
// crashed.
QueryResult query_identity(const LedgerNetwork& net, size_t node_index, const std::string& id);

// Submits a revocation on behalf of `authority`, which must be a verifier
// node id (otherwise Unauthorized).
void revoke_identity(LedgerNetwork& net, const std::string& id, const std::string& authority);

// Digest of the node's chain head; equal digests imply equal chains.
Bytes chain_digest(const VerifierNode& node);

void crash_node(LedgerNetwork& net, size_t node_index);

// Marks the node live again and replays the committed chain (and pending
// mempool) from the most advanced live replica.
void recover_node(LedgerNetwork& net, size_t node_index);

// One block per line: height, digest, prev digest, proposer, votes and tx
// summaries.  Replicas in agreement produce byte-identical dumps.
std::string chain_dump(const VerifierNode& node);

}  // namespace dim
