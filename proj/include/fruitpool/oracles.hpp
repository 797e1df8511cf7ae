// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef FRUITPOOL_ORACLES_HPP
#define FRUITPOOL_ORACLES_HPP

#include <fruitpool/chain.hpp>
#include <fruitpool/random_oracle.hpp>
#include <fruitpool/types.hpp>

#include <array>
#include <list>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace fruitpool {

enum class OracleTag : std::uint8_t { lc = 0, fs = 1, tx = 2, ltx = 3, ro = 4 };
inline constexpr std::size_t kOracleCount = 5;
const char* oracle_name(OracleTag tag);

class QuotaExceeded : public ProtocolViolation {
public:
    using ProtocolViolation::ProtocolViolation;
};

/** One metered query. The outcome field depends on the oracle (see docs). */
struct QueryRecord {
    Round round = 0;
    PartyId party = 0;
    OracleTag tag = OracleTag::ro;
    Digest outcome;
};

/** Append-only per-party query counts; costs are count times unit price. */
class CostLedger {
public:
    explicit CostLedger(std::size_t parties = 0) : counts_(parties) {}

    void charge(PartyId p, OracleTag tag) { ++counts_.at(p)[static_cast<std::size_t>(tag)]; }
    std::uint64_t count(PartyId p, OracleTag tag) const { return counts_.at(p)[static_cast<std::size_t>(tag)]; }
    Amount total(PartyId p, const CostSchedule& costs) const;
    std::size_t parties() const { return counts_.size(); }

private:
    std::vector<std::array<std::uint64_t, kOracleCount>> counts_;
};

Amount unit_cost(const CostSchedule& costs, OracleTag tag);

/** Fruits in arrival order with lookup by identity and by the block they point at. */
class FruitStore {
public:
    bool contains(const Fruit& f) const;
    /** False when already present. */
    bool add(const Fruit& f);
    const std::vector<Fruit>& items() const { return items_; }
    std::size_t size() const { return items_.size(); }
    /** Positions of fruits with this h_f, ascending. */
    const std::vector<std::size_t>* pointing_at(const Digest& ref) const;

private:
    std::vector<Fruit> items_;
    std::unordered_map<Digest, std::vector<std::size_t>, DigestHash> by_h_;
    std::unordered_map<Digest, std::vector<std::size_t>, DigestHash> by_pointer_;
};

/**
 * Every block a party has handed to O_lc, organised as a tree rooted at
 * genesis. Validity of the path to each node is computed once.
 */
class BlockTree {
public:
    struct Node {
        BlockPtr block;
        const Node* parent = nullptr;
        std::size_t index = 0;
        bool valid = false;
        std::uint64_t ordinal = 0;
    };

    explicit BlockTree(const ValidityContext& ctx);

    void insert(const BlockPtr& b);
    const Node* find(const Digest& ref) const;
    /** Longest valid tip; ties by position in current, then first seen, then smallest reference. */
    const Node* best(const std::vector<BlockPtr>& current) const;
    Chain path(const Node* tip) const;
    std::size_t size() const { return nodes_.size(); }

private:
    void attach(const BlockPtr& b, const Node* parent);

    const ValidityContext* ctx_;
    std::unordered_map<Digest, std::unique_ptr<Node>, DigestHash> nodes_;
    std::unordered_map<Digest, std::vector<BlockPtr>, DigestHash> orphans_;
    std::unordered_map<Digest, std::uint64_t, DigestHash> seen_;
    std::vector<const Node*> leaders_;
    std::size_t max_index_ = 0;
    std::uint64_t next_ordinal_ = 0;
};

struct LcResult {
    Chain chain;
    Digest h_prev;
    Digest h_f;
    ChainSummaryPtr summary;
    bool adopted = false;
};

struct FsResult {
    std::vector<Fruit> f_rec;
    Digest digest;
};

/**
 * The five metered oracles of one execution. O_ro allows q queries per
 * party per round, the others one.
 */
class OracleSuite {
public:
    OracleSuite(const ProtocolParams& params, const RandomOracle& ro, std::vector<QueryRecord>* log = nullptr);

    void begin_round(Round t);
    Round round() const { return round_; }

    /** Longest valid chain over everything stored for this party plus chain; adopts only if strictly longer. */
    LcResult query_lc(PartyId p, const Chain& chain, const std::vector<BlockPtr>& new_blocks);

    /** known becomes known plus the valid received fruits; returns the recent ones not yet in chain. */
    FsResult query_fs(PartyId p, const Chain& chain, FruitStore& known, const std::vector<Fruit>& received);

    /** Record(p, txs whose ids are not in the ledger). */
    Record query_tx(PartyId p, const std::vector<Transaction>& txs, const ChainSummary& ledger);
    Record query_tx(PartyId p, const std::vector<Transaction>& txs, const std::vector<Record>& records);

    /** 1 iff tx is in m.txs and well formed. */
    bool query_ltx(PartyId p, const Record& m, const Transaction& tx);

    Digest query_ro(PartyId p, const Instance& inst, std::uint64_t eta);
    Digest query_ro(PartyId p, std::span<const std::uint8_t> query);

    const CostLedger& ledger() const { return ledger_; }
    const ValidityContext& validity() const { return ctx_; }
    const ProtocolParams& params() const { return params_; }
    const RandomOracle& random_oracle() const { return *ro_; }
    std::uint32_t used(PartyId p, OracleTag tag) const { return used_.at(p)[static_cast<std::size_t>(tag)]; }

    /** Unmetered; cached by tip reference. */
    ChainSummaryPtr summary(const Chain& chain);
    const BlockTree& tree(PartyId p) const { return *trees_.at(p); }

private:
    void admit(PartyId p, OracleTag tag);
    void log(PartyId p, OracleTag tag, const Digest& outcome);

    ProtocolParams params_;
    const RandomOracle* ro_;
    ValidityContext ctx_;
    std::vector<QueryRecord>* log_;
    CostLedger ledger_;
    Round round_ = 0;
    std::vector<std::array<std::uint32_t, kOracleCount>> used_;
    std::vector<std::unique_ptr<BlockTree>> trees_;
    std::vector<std::pair<Digest, Chain>> last_best_;
    // Encoded mining query of the party's last instance; only eta changes.
    std::vector<std::pair<Instance, ByteWriter>> ro_query_;
    std::list<std::pair<Digest, ChainSummaryPtr>> summaries_;
};

bool is_well_formed(const Transaction& tx);

} // namespace fruitpool

#endif // FRUITPOOL_ORACLES_HPP
