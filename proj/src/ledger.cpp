#include "dim/ledger.hpp"

#include <algorithm>
#include <sstream>

#include "dim/errors.hpp"
#include "dim/hash.hpp"

namespace dim {

namespace {

Bytes encode_tx(const LedgerTx& tx) {
    Bytes out;
    out.push_back(static_cast<uint8_t>(tx.kind));
    put_lp_string(out, tx.submitter);
    put_u64be(out, tx.seq_hint);
    if (tx.kind == TxKind::RegisterIdentity) {
        put_lp_string(out, tx.record.id);
        put_lp_bytes(out, tx.record.public_key);
        put_u64be(out, static_cast<uint64_t>(tx.record.timestamp_ms));
        put_f64be(out, tx.record.x);
        put_f64be(out, tx.record.y);
        put_lp_bytes(out, tx.record.commitment);
    } else {
        put_lp_string(out, tx.target_id);
    }
    return out;
}

void validate_tx(const LedgerTx& tx) {
    if (tx.submitter.empty()) throw RejectedTx("tx submitter must be non-empty");
    if (tx.kind == TxKind::RegisterIdentity) {
        if (tx.record.id.empty() || tx.record.id.size() > kMaxIdBytes)
            throw RejectedTx("register: bad id length");
        if (tx.record.commitment.size() != kDigestSize)
            throw RejectedTx("register: commitment must be 32 bytes");
        if (tx.record.public_key.empty()) throw RejectedTx("register: empty public key");
    } else if (tx.kind == TxKind::RevokeIdentity) {
        if (tx.target_id.empty()) throw RejectedTx("revoke: empty target id");
    } else {
        throw RejectedTx("unknown tx kind");
    }
}

bool contains_tx(const std::vector<LedgerTx>& txs, const Bytes& id) {
    return std::any_of(txs.begin(), txs.end(),
                       [&](const LedgerTx& t) { return tx_id(t) == id; });
}

bool chain_has_tx(const VerifierNode& node, const Bytes& id) {
    return std::any_of(node.chain.begin(), node.chain.end(),
                       [&](const LedgerBlock& b) { return contains_tx(b.txs, id); });
}

}  // namespace

Bytes tx_id(const LedgerTx& tx) { return sha256(as_span(encode_tx(tx))); }

Bytes block_digest(const LedgerBlock& block) {
    Bytes out;
    put_u64be(out, block.height);
    out.insert(out.end(), block.prev_digest.begin(), block.prev_digest.end());
    put_u32be(out, static_cast<uint32_t>(block.txs.size()));
    for (const auto& tx : block.txs) {
        Bytes id = tx_id(tx);
        out.insert(out.end(), id.begin(), id.end());
    }
    put_lp_string(out, block.proposer);
    put_u32be(out, static_cast<uint32_t>(block.commit_votes.size()));
    for (const auto& vote : block.commit_votes) put_lp_string(out, vote);
    return sha256(as_span(out));
}

std::vector<std::string> LedgerNetwork::roster() const {
    // membership is static: the genesis vote list names every verifier
    return nodes.empty() ? std::vector<std::string>{} : nodes[0].chain[0].commit_votes;
}

LedgerNetwork make_network(int n) {
    if (n < 1) throw InvalidScenario("ledger network needs at least one node");
    LedgerNetwork net;
    LedgerBlock genesis;
    genesis.height = 0;
    genesis.prev_digest.assign(kDigestSize, 0);
    for (int i = 0; i < n; ++i) genesis.commit_votes.push_back("node-" + std::to_string(i));
    for (int i = 0; i < n; ++i) {
        VerifierNode node;
        node.node_id = "node-" + std::to_string(i);
        node.chain.push_back(genesis);
        net.nodes.push_back(std::move(node));
    }
    return net;
}

int quorum_size(const LedgerNetwork& net) {
    return static_cast<int>(net.nodes.size()) / 2 + 1;
}

LedgerTx make_register_tx(const IdentityRecord& record, const std::string& submitter,
                          uint64_t seq_hint) {
    LedgerTx tx;
    tx.kind = TxKind::RegisterIdentity;
    tx.submitter = submitter;
    tx.seq_hint = seq_hint;
    tx.record = record;
    return tx;
}

LedgerTx make_revoke_tx(const std::string& target_id, const std::string& authority,
                        uint64_t seq_hint) {
    LedgerTx tx;
    tx.kind = TxKind::RevokeIdentity;
    tx.submitter = authority;
    tx.seq_hint = seq_hint;
    tx.target_id = target_id;
    return tx;
}

void submit_tx(LedgerNetwork& net, const LedgerTx& tx) {
    validate_tx(tx);
    Bytes id = tx_id(tx);
    for (auto& node : net.nodes) {
        if (!node.alive) continue;
        if (contains_tx(node.mempool, id) || chain_has_tx(node, id)) continue;
        node.mempool.push_back(tx);
    }
}

RoundOutcome run_consensus_round(LedgerNetwork& net) {
    RoundOutcome out;
    size_t leader_idx = net.round % net.nodes.size();
    net.round += 1;
    VerifierNode& leader = net.nodes[leader_idx];
    out.leader = leader.node_id;
    if (!leader.alive) return out;  // nobody proposes; rotation will move on

    LedgerBlock proposal;
    proposal.height = leader.chain.size();
    proposal.prev_digest = block_digest(leader.chain.back());
    proposal.txs = leader.mempool;  // arrival order
    proposal.proposer = leader.node_id;

    // every live node validates the proposal and votes
    for (const auto& node : net.nodes) {
        if (!node.alive) continue;
        bool valid = std::all_of(proposal.txs.begin(), proposal.txs.end(), [](const LedgerTx& t) {
            try {
                validate_tx(t);
                return true;
            } catch (const RejectedTx&) {
                return false;
            }
        });
        if (valid) out.votes += 1;
    }
    if (out.votes < quorum_size(net)) return out;

    for (const auto& node : net.nodes)
        if (node.alive) proposal.commit_votes.push_back(node.node_id);
    for (auto& node : net.nodes) {
        if (!node.alive) continue;
        node.chain.push_back(proposal);
        std::erase_if(node.mempool, [&](const LedgerTx& t) {
            return contains_tx(proposal.txs, tx_id(t));
        });
    }
    out.committed = true;
    out.block = proposal;
    return out;
}

QueryResult query_identity(const LedgerNetwork& net, size_t node_index, const std::string& id) {
    const VerifierNode& node = net.nodes.at(node_index);
    if (!node.alive) throw NodeUnavailable("query on crashed node " + node.node_id);
    QueryResult result;
    long last_register = -1, last_revoke = -1;
    long ordinal = 0;
    for (const auto& block : node.chain) {
        for (const auto& tx : block.txs) {
            if (tx.kind == TxKind::RegisterIdentity && tx.record.id == id) {
                result.record = tx.record;
                last_register = ordinal;
            } else if (tx.kind == TxKind::RevokeIdentity && tx.target_id == id) {
                last_revoke = ordinal;
            }
            ++ordinal;
        }
    }
    if (last_register < 0) {
        result.status = QueryStatus::NotFound;  // revocations alone publish nothing
        result.record = IdentityRecord{};
    } else {
        result.status = last_revoke >= last_register ? QueryStatus::Revoked : QueryStatus::Found;
    }
    return result;
}

void revoke_identity(LedgerNetwork& net, const std::string& id, const std::string& authority) {
    auto roster = net.roster();
    if (std::find(roster.begin(), roster.end(), authority) == roster.end())
        throw Unauthorized("revocation authority must be a verifier node: " + authority);
    submit_tx(net, make_revoke_tx(id, authority));
}

Bytes chain_digest(const VerifierNode& node) { return block_digest(node.chain.back()); }

void crash_node(LedgerNetwork& net, size_t node_index) {
    net.nodes.at(node_index).alive = false;
}

void recover_node(LedgerNetwork& net, size_t node_index) {
    VerifierNode& node = net.nodes.at(node_index);
    node.alive = true;
    const VerifierNode* source = nullptr;
    for (const auto& other : net.nodes) {
        if (!other.alive || other.node_id == node.node_id) continue;
        if (!source || other.chain.size() > source->chain.size()) source = &other;
    }
    if (source) {
        node.chain = source->chain;
        node.mempool = source->mempool;
    }
}

std::string chain_dump(const VerifierNode& node) {
    std::ostringstream out;
    for (const auto& block : node.chain) {
        out << "height=" << block.height << " digest=" << to_hex(block_digest(block))
            << " prev=" << to_hex(block.prev_digest) << " proposer="
            << (block.proposer.empty() ? "-" : block.proposer) << " votes=";
        for (size_t i = 0; i < block.commit_votes.size(); ++i)
            out << (i ? "|" : "") << block.commit_votes[i];
        out << " txs=";
        for (size_t i = 0; i < block.txs.size(); ++i) {
            const auto& tx = block.txs[i];
            out << (i ? ";" : "")
                << (tx.kind == TxKind::RegisterIdentity ? "register:" + tx.record.id
                                                        : "revoke:" + tx.target_id);
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace dim
