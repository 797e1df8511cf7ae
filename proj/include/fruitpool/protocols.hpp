// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef FRUITPOOL_PROTOCOLS_HPP
#define FRUITPOOL_PROTOCOLS_HPP

#include <fruitpool/network.hpp>
#include <fruitpool/oracles.hpp>
#include <fruitpool/types.hpp>

#include <deque>
#include <limits>
#include <optional>
#include <random>
#include <unordered_set>
#include <vector>

namespace fruitpool {

enum class Role : std::uint8_t { honest_fruit = 0, pool_leader = 1, pool_member = 2, fallback = 3 };
const char* role_name(Role r);

enum class PoolVariant : std::uint8_t {
    standard = 0,
    /** Leader skips O_tx; inst4 becomes {tx_T} on payment rounds. */
    empty_block = 1,
};

/** Why a party left its pool. */
enum class ExitReason : std::uint8_t {
    none = 0,
    mismatch = 1,        // received object mined on another instance
    missing_payment = 2, // block seen but no payment in the auth message
    wrong_amount = 3,    // own share differs from the sharing rule
    ltx_rejected = 4,    // payment not in the leader's record
    no_message = 5,      // no auth message this round
    switched = 6,        // deliberate move to the fruit protocol
    breakaway = 7,       // joined a breakaway pool
};
const char* exit_reason_name(ExitReason r);

struct PaymentComputation {
    Round round = 0;
    PartyId payer = 0;
    std::uint32_t pool = 0;
    std::uint32_t pool_size = 0;
    Amount rew;
    Amount cost;
    Amount w_leader;
    Amount w_member;
    Transaction tx;
};

/** W_L = min{cost, rew} + max{(rew-cost)/n, 0}, W = max{(rew-cost)/n, 0}. */
PaymentComputation compute_payment(const Amount& rew, const Amount& cost, unsigned n);

/** Block array non-empty and every received object matches the instance. */
bool is_payment_round(const std::vector<BlockPtr>& blocks, const std::vector<Fruit>& fruits, const Instance& inst);

/** Some received block or fruit was mined on a different instance. */
bool has_mismatch(const std::vector<BlockPtr>& blocks, const std::vector<Fruit>& fruits, const Instance& inst);

struct RoundWindow {
    Round from = 1;
    Round to = std::numeric_limits<Round>::max();

    bool contains(Round t) const { return t >= from && t <= to; }
    bool overlaps(const RoundWindow& o) const { return from <= o.to && o.from <= to; }
};

enum class TamperKind : std::uint8_t {
    self_record = 0,    // (i)
    other_prev = 1,     // (ii)
    other_pointer = 2,  // (iii)
    other_digest = 3,   // (iv)
    stale = 4,          // (v)
};

struct Breakaway {
    Round start = 1;
    PartyId leader = 0;
    std::vector<PartyId> members;
    /** Fraction of the protocol share paid to each breakaway member. */
    Amount member_scale = 1;
};

struct Underpay {
    /** Fraction of the due share actually paid to each victim. */
    Amount paid_fraction = 1;
    std::vector<PartyId> victims;
};

template <typename T>
struct Windowed {
    RoundWindow window;
    T value{};
};

/**
 * Departures from the honest program consulted at fixed steps. The default
 * value is the honest party.
 */
struct Behavior {
    std::vector<Windowed<TamperKind>> tamper;
    std::uint8_t stale_mask = 0xF;
    std::vector<RoundWindow> skip_ltx;
    std::vector<Windowed<unsigned>> ro_budget;
    std::vector<RoundWindow> withhold;
    std::vector<Windowed<unsigned>> delay;
    std::optional<Breakaway> breakaway;
    std::vector<RoundWindow> ignore_exit;
    std::optional<Round> switch_round;
    std::vector<RoundWindow> skip_fs;
    std::vector<RoundWindow> skip_tx;
    std::vector<RoundWindow> skip_lc;
    std::vector<Windowed<Underpay>> underpay;
    std::vector<Windowed<std::vector<PartyId>>> selective;

    std::optional<TamperKind> tamper_at(Round t) const;
    unsigned budget_at(Round t, unsigned q) const;
    bool skips_ltx(Round t) const;
    bool withholds(Round t) const;
    std::optional<unsigned> delay_at(Round t) const;
    bool ignores_exit(Round t) const;
    bool skips_fs(Round t) const;
    bool skips_tx(Round t) const;
    bool skips_lc(Round t) const;
    std::optional<Underpay> underpay_at(Round t) const;
    std::optional<std::vector<PartyId>> recipients_at(Round t) const;
};

struct PartyState {
    PartyId id = 0;
    Role role = Role::honest_fruit;
    bool corrupted = false;
    std::uint32_t pool = 0;
    PartyId leader = 0;
    /** Pool parties other than the leader; meaningful for leaders. */
    std::vector<PartyId> members;
    std::uint32_t pool_size = 0;
    bool pool_active = false;
    /** Next fruit-protocol round feeds everything received so far to O_lc and O_fs. */
    bool bootstrap = false;
    /** Next pool round refreshes the instance without a payment (breakaway start). */
    bool fresh_pool = false;
    Amount member_scale = 1;

    Chain chain;
    FruitStore fruits;
    bool success = false;
    Instance inst;
    Instance prev_inst;
    bool has_prev_inst = false;
    std::shared_ptr<const std::vector<Fruit>> f_rec;
    ChainSummaryPtr records;
    Amount cost = 0;

    std::unordered_set<Digest, DigestHash> seen_blocks;
    std::vector<BlockPtr> block_log;
    FruitStore fruit_log;
    std::deque<std::pair<Round, Payload>> delayed;

    Behavior behavior;
};

/** Transcript hooks for decisions that are not oracle queries or diffusals. */
class EventSink {
public:
    virtual ~EventSink() = default;
    virtual void payment(const PaymentComputation& pc) = 0;
    virtual void exit(Round t, PartyId p, ExitReason reason) = 0;
    virtual void role(Round t, PartyId p, Role r, std::uint32_t pool) = 0;
    virtual void auth(Round t, PartyId from, PartyId to, bool delivered, const AuthMessage& msg) = 0;
    virtual void diffused(Round t, std::uint64_t arrival, PartyId sender, const Payload& payload,
                          const std::optional<std::vector<PartyId>>& recipients) = 0;
};

struct RoundContext {
    Round t = 0;
    const ProtocolParams* params = nullptr;
    PoolVariant variant = PoolVariant::standard;
    /** F~_{T-1}. */
    std::vector<Fruit> fruits;
    /** B~_{T-1}, blocks this party has not seen before, in arrival order. */
    std::vector<BlockPtr> blocks;
    std::vector<Transaction> txs;
    OracleSuite* oracles = nullptr;
    DiffuseNetwork* net = nullptr;
    AuthChannel* auth = nullptr;
    EventSink* events = nullptr;
    std::mt19937_64 nonces;
    std::uint64_t* next_payment_id = nullptr;
};

/** Fruit protocol round (retrieve, O_lc, O_fs, O_tx, q mining queries, relay). */
void honest_round(PartyState& s, RoundContext& ctx);

/** Pool leader round. */
void leader_round(PartyState& s, RoundContext& ctx);

/** Pool member round. */
void member_round(PartyState& s, RoundContext& ctx);

/** Dispatch on role. */
void party_round(PartyState& s, RoundContext& ctx);

/** Switch and breakaway transitions due at round t; run for every party before activation. */
void apply_transitions(PartyState& s, Round t, EventSink& events);

/** Initial state for a party of the given role. */
PartyState make_party(PartyId id, Role role, const ValidityContext& vctx);

} // namespace fruitpool

#endif // FRUITPOOL_PROTOCOLS_HPP
