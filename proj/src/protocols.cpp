// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fruitpool/protocols.hpp>

#include <algorithm>

namespace fruitpool {

const char* role_name(Role r)
{
    switch (r) {
    case Role::honest_fruit: return "honest_fruit";
    case Role::pool_leader: return "pool_leader";
    case Role::pool_member: return "pool_member";
    case Role::fallback: return "fallback";
    }
    return "?";
}

const char* exit_reason_name(ExitReason r)
{
    switch (r) {
    case ExitReason::none: return "none";
    case ExitReason::mismatch: return "mismatch";
    case ExitReason::missing_payment: return "missing_payment";
    case ExitReason::wrong_amount: return "wrong_amount";
    case ExitReason::ltx_rejected: return "ltx_rejected";
    case ExitReason::no_message: return "no_message";
    case ExitReason::switched: return "switched";
    case ExitReason::breakaway: return "breakaway";
    }
    return "?";
}

PaymentComputation compute_payment(const Amount& rew, const Amount& cost, unsigned n)
{
    PaymentComputation pc;
    pc.rew = rew;
    pc.cost = cost;
    pc.pool_size = n;
    Amount share = (rew - cost) / Amount(n);
    if (share < 0) share = 0;
    pc.w_member = share;
    pc.w_leader = std::min(cost, rew) + share;
    return pc;
}

bool has_mismatch(const std::vector<BlockPtr>& blocks, const std::vector<Fruit>& fruits, const Instance& inst)
{
    for (const auto& b : blocks)
        if (!matches(b->header, inst)) return true;
    for (const auto& f : fruits)
        if (!matches(f, inst)) return true;
    return false;
}

bool is_payment_round(const std::vector<BlockPtr>& blocks, const std::vector<Fruit>& fruits, const Instance& inst)
{
    return !blocks.empty() && !has_mismatch(blocks, fruits, inst);
}

// ---------------------------------------------------------------- Behavior

namespace {

template <typename T>
const T* active(const std::vector<Windowed<T>>& v, Round t)
{
    for (const auto& w : v)
        if (w.window.contains(t)) return &w.value;
    return nullptr;
}

bool active(const std::vector<RoundWindow>& v, Round t)
{
    return std::any_of(v.begin(), v.end(), [&](const RoundWindow& w) { return w.contains(t); });
}

} // namespace

std::optional<TamperKind> Behavior::tamper_at(Round t) const
{
    const TamperKind* k = active(tamper, t);
    return k ? std::optional<TamperKind>(*k) : std::nullopt;
}

unsigned Behavior::budget_at(Round t, unsigned q) const
{
    const unsigned* b = active(ro_budget, t);
    return b ? std::min(*b, q) : q;
}

bool Behavior::skips_ltx(Round t) const { return active(skip_ltx, t); }
bool Behavior::withholds(Round t) const { return active(withhold, t); }
bool Behavior::ignores_exit(Round t) const { return active(ignore_exit, t); }
bool Behavior::skips_fs(Round t) const { return active(skip_fs, t); }
bool Behavior::skips_tx(Round t) const { return active(skip_tx, t); }
bool Behavior::skips_lc(Round t) const { return active(skip_lc, t); }

std::optional<unsigned> Behavior::delay_at(Round t) const
{
    const unsigned* d = active(delay, t);
    return d ? std::optional<unsigned>(*d) : std::nullopt;
}

std::optional<Underpay> Behavior::underpay_at(Round t) const
{
    const Underpay* u = active(underpay, t);
    return u ? std::optional<Underpay>(*u) : std::nullopt;
}

std::optional<std::vector<PartyId>> Behavior::recipients_at(Round t) const
{
    const auto* r = active(selective, t);
    return r ? std::optional<std::vector<PartyId>>(*r) : std::nullopt;
}

// ---------------------------------------------------------------- helpers

namespace {

void send(PartyState& s, RoundContext& ctx, Payload p)
{
    auto to = s.behavior.recipients_at(ctx.t);
    std::uint64_t arrival = ctx.net->diffuse(ctx.t, s.id, p, to);
    ctx.events->diffused(ctx.t, arrival, s.id, p, to);
}

// Own mined objects: withheld, delayed or sent.
void emit(PartyState& s, RoundContext& ctx, Payload p)
{
    if (s.behavior.withholds(ctx.t)) return;
    if (auto d = s.behavior.delay_at(ctx.t)) {
        s.delayed.emplace_back(ctx.t + *d, std::move(p));
        return;
    }
    send(s, ctx, std::move(p));
}

void release_delayed(PartyState& s, RoundContext& ctx)
{
    while (!s.delayed.empty() && s.delayed.front().first <= ctx.t) {
        Payload p = std::move(s.delayed.front().second);
        s.delayed.pop_front();
        send(s, ctx, std::move(p));
    }
}

// Re-diffuse the blocks received this round.
void relay(PartyState& s, RoundContext& ctx)
{
    if (ctx.blocks.empty() || s.behavior.withholds(ctx.t)) return;
    send(s, ctx, std::make_shared<const std::vector<BlockPtr>>(ctx.blocks));
}

// q (or budget) queries on inst; keep_local adds fruits and the block to the party's own state.
void mine(PartyState& s, RoundContext& ctx, const Instance& inst, const std::vector<Fruit>& f_rec, bool keep_local)
{
    const ProtocolParams& P = *ctx.params;
    const unsigned budget = s.behavior.budget_at(ctx.t, P.q);
    const std::uint64_t mask = P.kappa_mask();
    const std::uint64_t d_pf = P.d_pf();
    const std::uint64_t d_pb = P.d_pb();
    for (unsigned k = 0; k < budget; ++k) {
        const std::uint64_t eta = ctx.nonces() & mask;
        const Digest h = ctx.oracles->query_ro(s.id, inst, eta);
        const bool fruit = fruit_success(h, d_pf);
        const bool block = block_success(h, d_pb) && !s.success;
        if (!fruit && !block) continue;
        Fruit obj{inst.h_prev, inst.h_f, eta, inst.dig, inst.m, h};
        if (fruit) {
            if (keep_local) s.fruits.add(obj);
            emit(s, ctx, obj);
        }
        if (block) {
            auto b = std::make_shared<Block>();
            b->header = std::move(obj);
            b->fruits = f_rec;
            BlockPtr bp = b;
            if (keep_local) s.chain.blocks.push_back(bp);
            s.success = true;
            emit(s, ctx, bp);
        }
    }
}

void leave(PartyState& s, RoundContext& ctx, ExitReason why)
{
    ctx.events->exit(ctx.t, s.id, why);
    if (s.role == Role::pool_member) s.bootstrap = true;
    s.role = Role::fallback;
    s.pool_active = false;
    ctx.events->role(ctx.t, s.id, s.role, 0);
}

const Block* find_logged(const PartyState& s, const Digest& ref)
{
    for (const auto& b : s.block_log)
        if (b->ref() == ref) return b.get();
    return nullptr;
}

Digest pick_other(const Digest& current, std::initializer_list<std::optional<Digest>> options)
{
    for (const auto& o : options)
        if (o && *o != current) return *o;
    Digest d = current;
    d.lo ^= 1;
    return d;
}

// Instance a member actually mines on; differs from the received one under instance tampering.
void tampered(const PartyState& s, RoundContext& ctx, Instance& inst, std::vector<Fruit>& f_rec)
{
    auto kind = s.behavior.tamper_at(ctx.t);
    if (!kind) return;
    const Digest genesis = ctx.oracles->validity().genesis->ref();
    switch (*kind) {
    case TamperKind::self_record:
        inst.m.coinbase = s.id;
        break;
    case TamperKind::other_prev: {
        std::optional<Digest> parent;
        if (const Block* tip = find_logged(s, inst.h_prev)) parent = tip->header.h_prev;
        inst.h_prev = pick_other(inst.h_prev, {parent, genesis, inst.h_f});
        break;
    }
    case TamperKind::other_pointer: {
        std::optional<Digest> parent;
        if (const Block* b = find_logged(s, inst.h_f)) parent = b->header.h_prev;
        inst.h_f = pick_other(inst.h_f, {inst.h_prev, genesis, parent});
        break;
    }
    case TamperKind::other_digest: {
        const RandomOracle& ro = ctx.oracles->random_oracle();
        if (!f_rec.empty()) {
            f_rec.clear();
        } else if (s.fruit_log.size() > 0) {
            f_rec = {s.fruit_log.items().back()};
        } else {
            inst.dig.lo ^= 1;
            return;
        }
        inst.dig = ro.fruit_set_digest(f_rec);
        break;
    }
    case TamperKind::stale:
        if (!s.has_prev_inst) return;
        if (s.behavior.stale_mask & 1) inst.h_prev = s.prev_inst.h_prev;
        if (s.behavior.stale_mask & 2) inst.h_f = s.prev_inst.h_f;
        if (s.behavior.stale_mask & 4) inst.dig = s.prev_inst.dig;
        if (s.behavior.stale_mask & 8) inst.m = s.prev_inst.m;
        break;
    }
}

} // namespace

// ---------------------------------------------------------------- programs

PartyState make_party(PartyId id, Role role, const ValidityContext& vctx)
{
    PartyState s;
    s.id = id;
    s.role = role;
    s.chain.blocks.push_back(vctx.genesis);
    s.f_rec = std::make_shared<const std::vector<Fruit>>();
    s.records = summarize(s.chain, vctx.window);
    if (role == Role::pool_leader) {
        // The first instance points at genesis; all-zero pointers would make every block invalid.
        s.inst.h_prev = vctx.genesis->ref();
        s.inst.h_f = vctx.genesis->ref();
    }
    return s;
}

void honest_round(PartyState& s, RoundContext& ctx)
{
    const std::vector<BlockPtr>* blocks_in = &ctx.blocks;
    const std::vector<Fruit>* fruits_in = &ctx.fruits;
    if (s.bootstrap) {
        blocks_in = &s.block_log;
        fruits_in = &s.fruit_log.items();
        s.bootstrap = false;
    }
    LcResult lc = ctx.oracles->query_lc(s.id, s.chain, *blocks_in);
    s.chain = std::move(lc.chain);
    FsResult fs = ctx.oracles->query_fs(s.id, s.chain, s.fruits, *fruits_in);
    Record m = ctx.oracles->query_tx(s.id, ctx.txs, *lc.summary);
    s.records = lc.summary;
    s.inst = Instance{lc.h_prev, lc.h_f, fs.digest, std::move(m)};
    release_delayed(s, ctx);
    mine(s, ctx, s.inst, fs.f_rec, true);
    relay(s, ctx);
    s.success = false;
}

void leader_round(PartyState& s, RoundContext& ctx)
{
    const ProtocolParams& P = *ctx.params;
    const Round t = ctx.t;
    const bool breakaway_pool = s.pool != 0;
    if (!breakaway_pool && !s.behavior.ignores_exit(t) && has_mismatch(ctx.blocks, ctx.fruits, s.inst)) {
        leave(s, ctx, ExitReason::mismatch);
        honest_round(s, ctx);
        return;
    }

    std::optional<Transaction> tx;
    const bool fresh = s.fresh_pool;
    s.fresh_pool = false;
    if (!ctx.blocks.empty() || fresh) {
        if (!fresh) {
            Amount rew = Amount(static_cast<unsigned long>(ctx.blocks.front()->fruits.size())) * P.reward_f;
            PaymentComputation pc = compute_payment(rew, s.cost, s.pool_size);
            pc.round = t;
            pc.payer = s.id;
            pc.pool = s.pool;
            Transaction pay;
            pay.id = kPaymentTxBit | (*ctx.next_payment_id)++;
            pay.sender = s.id;
            auto under = s.behavior.underpay_at(t);
            for (PartyId m : s.members) {
                Amount a = pc.w_member * s.member_scale;
                if (under && std::find(under->victims.begin(), under->victims.end(), m) != under->victims.end())
                    a *= under->paid_fraction;
                pay.payments.push_back(Payment{m, a});
            }
            pc.tx = pay;
            ctx.events->payment(pc);
            tx = std::move(pay);
        }
        if (!s.behavior.skips_lc(t)) {
            const auto& blocks_in = fresh ? s.block_log : ctx.blocks;
            LcResult lc = ctx.oracles->query_lc(s.id, s.chain, blocks_in);
            s.chain = std::move(lc.chain);
            s.inst.h_prev = lc.h_prev;
            s.inst.h_f = lc.h_f;
            s.records = lc.summary;
        }
        s.cost = P.costs.lc;
    }

    if (!s.behavior.skips_fs(t)) {
        const auto& fruits_in = fresh ? s.fruit_log.items() : ctx.fruits;
        FsResult fs = ctx.oracles->query_fs(s.id, s.chain, s.fruits, fruits_in);
        s.f_rec = std::make_shared<const std::vector<Fruit>>(std::move(fs.f_rec));
        s.inst.dig = fs.digest;
    }
    s.cost += P.costs.fs;

    if (ctx.variant == PoolVariant::standard) {
        if (!s.behavior.skips_tx(t)) {
            std::vector<Transaction> txs = ctx.txs;
            if (tx) txs.push_back(*tx);
            s.inst.m = ctx.oracles->query_tx(s.id, txs, *s.records);
        }
        s.cost += P.costs.tx;
    } else if (tx) {
        s.inst.m = Record{s.id, {*tx}};
    }

    AuthMessage msg;
    msg.sender = s.id;
    msg.round = t;
    msg.inst = s.inst;
    msg.f_rec = s.f_rec;
    msg.payment = tx;
    for (PartyId m : s.members) {
        bool delivered = ctx.auth->send(s.id, m, msg);
        ctx.events->auth(t, s.id, m, delivered, msg);
    }

    release_delayed(s, ctx);
    mine(s, ctx, s.inst, *s.f_rec, false);
    relay(s, ctx);
    s.success = false;
}

void member_round(PartyState& s, RoundContext& ctx)
{
    const ProtocolParams& P = *ctx.params;
    const Round t = ctx.t;
    auto msg = ctx.auth->receive(s.id, t, s.leader);
    const bool breakaway_pool = s.pool != 0;

    if (!s.behavior.ignores_exit(t)) {
        ExitReason why = ExitReason::none;
        if (!breakaway_pool && has_mismatch(ctx.blocks, ctx.fruits, s.inst)) {
            why = ExitReason::mismatch;
        } else if (!msg) {
            why = ExitReason::no_message;
        } else if (!ctx.blocks.empty() && !s.fresh_pool) {
            if (!msg->payment) {
                why = ExitReason::missing_payment;
            } else {
                Amount rew = Amount(static_cast<unsigned long>(ctx.blocks.front()->fruits.size())) * P.reward_f;
                Amount expected = (rew - s.cost) / Amount(s.pool_size);
                if (expected < 0) expected = 0;
                expected *= s.member_scale;
                const auto& pays = msg->payment->payments;
                auto mine_it = std::find_if(pays.begin(), pays.end(), [&](const Payment& p) { return p.to == s.id; });
                if (mine_it == pays.end() || mine_it->amount != expected)
                    why = ExitReason::wrong_amount;
                else if (!s.behavior.skips_ltx(t) && !ctx.oracles->query_ltx(s.id, msg->inst.m, *msg->payment))
                    why = ExitReason::ltx_rejected;
            }
        }
        if (why != ExitReason::none) {
            leave(s, ctx, why);
            honest_round(s, ctx);
            return;
        }
    }

    Amount per_round = P.costs.fs;
    if (ctx.variant == PoolVariant::standard) per_round += P.costs.tx;
    if (!ctx.blocks.empty() || s.fresh_pool)
        s.cost = P.costs.lc + per_round;
    else
        s.cost += per_round;
    s.fresh_pool = false;

    if (msg) {
        s.prev_inst = s.inst;
        s.has_prev_inst = t > 1;
        s.inst = msg->inst;
        s.f_rec = msg->f_rec;
    }

    Instance work = s.inst;
    std::vector<Fruit> work_rec = *s.f_rec;
    tampered(s, ctx, work, work_rec);
    release_delayed(s, ctx);
    mine(s, ctx, work, work_rec, false);
    relay(s, ctx);
    s.success = false;
}

void party_round(PartyState& s, RoundContext& ctx)
{
    switch (s.role) {
    case Role::pool_leader: leader_round(s, ctx); break;
    case Role::pool_member: member_round(s, ctx); break;
    case Role::honest_fruit:
    case Role::fallback: honest_round(s, ctx); break;
    }
}

void apply_transitions(PartyState& s, Round t, EventSink& events)
{
    const bool pooled = s.role == Role::pool_leader || s.role == Role::pool_member;
    if (pooled && s.pool == 0 && s.behavior.breakaway && s.behavior.breakaway->start == t) {
        const Breakaway& b = *s.behavior.breakaway;
        events.exit(t, s.id, ExitReason::breakaway);
        if (b.members.size() <= 1) {
            if (s.role == Role::pool_member) s.bootstrap = true;
            s.role = Role::fallback;
            s.pool_active = false;
            events.role(t, s.id, s.role, 0);
            return;
        }
        s.pool = 1;
        s.leader = b.leader;
        s.pool_size = static_cast<std::uint32_t>(b.members.size());
        s.member_scale = b.member_scale;
        s.fresh_pool = true;
        s.cost = 0;
        s.members.clear();
        if (s.id == b.leader) {
            s.role = Role::pool_leader;
            for (PartyId m : b.members)
                if (m != s.id) s.members.push_back(m);
        } else {
            s.role = Role::pool_member;
        }
        events.role(t, s.id, s.role, s.pool);
        return;
    }
    if (pooled && s.behavior.switch_round && t >= *s.behavior.switch_round) {
        events.exit(t, s.id, ExitReason::switched);
        if (s.role == Role::pool_member) s.bootstrap = true;
        s.role = Role::fallback;
        s.pool_active = false;
        events.role(t, s.id, s.role, 0);
    }
}

} // namespace fruitpool
