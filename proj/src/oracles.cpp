// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fruitpool/oracles.hpp>

#include <algorithm>

namespace fruitpool {

const char* oracle_name(OracleTag tag)
{
    switch (tag) {
    case OracleTag::lc: return "lc";
    case OracleTag::fs: return "fs";
    case OracleTag::tx: return "tx";
    case OracleTag::ltx: return "ltx";
    case OracleTag::ro: return "ro";
    }
    return "?";
}

Amount unit_cost(const CostSchedule& costs, OracleTag tag)
{
    switch (tag) {
    case OracleTag::lc: return costs.lc;
    case OracleTag::fs: return costs.fs;
    case OracleTag::tx: return costs.tx;
    case OracleTag::ltx: return costs.ltx;
    case OracleTag::ro: return costs.ro;
    }
    return 0;
}

Amount CostLedger::total(PartyId p, const CostSchedule& costs) const
{
    Amount sum = 0;
    for (std::size_t t = 0; t < kOracleCount; ++t)
        sum += unit_cost(costs, static_cast<OracleTag>(t)) * Amount(static_cast<unsigned long>(counts_.at(p)[t]));
    return sum;
}

bool is_well_formed(const Transaction& tx)
{
    for (const auto& pay : tx.payments)
        if (pay.to == kNoParty || pay.amount < 0) return false;
    return true;
}

// ---------------------------------------------------------------- FruitStore

bool FruitStore::contains(const Fruit& f) const
{
    auto it = by_h_.find(f.h);
    if (it == by_h_.end()) return false;
    for (std::size_t i : it->second)
        if (items_[i] == f) return true;
    return false;
}

bool FruitStore::add(const Fruit& f)
{
    if (contains(f)) return false;
    std::size_t pos = items_.size();
    items_.push_back(f);
    by_h_[f.h].push_back(pos);
    by_pointer_[f.h_f].push_back(pos);
    return true;
}

const std::vector<std::size_t>* FruitStore::pointing_at(const Digest& ref) const
{
    auto it = by_pointer_.find(ref);
    return it == by_pointer_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------- BlockTree

BlockTree::BlockTree(const ValidityContext& ctx) : ctx_(&ctx)
{
    auto g = std::make_unique<Node>();
    g->block = ctx.genesis;
    g->index = 0;
    g->valid = true;
    g->ordinal = next_ordinal_++;
    const Node* raw = g.get();
    seen_[ctx.genesis->ref()] = g->ordinal;
    nodes_.emplace(ctx.genesis->ref(), std::move(g));
    leaders_.push_back(raw);
}

const BlockTree::Node* BlockTree::find(const Digest& ref) const
{
    auto it = nodes_.find(ref);
    return it == nodes_.end() ? nullptr : it->second.get();
}

void BlockTree::insert(const BlockPtr& b)
{
    if (!seen_.emplace(b->ref(), next_ordinal_).second) return;
    ++next_ordinal_;
    const Node* parent = find(b->header.h_prev);
    if (!parent) {
        orphans_[b->header.h_prev].push_back(b);
        return;
    }
    attach(b, parent);
}

void BlockTree::attach(const BlockPtr& first, const Node* first_parent)
{
    std::vector<std::pair<BlockPtr, const Node*>> work{{first, first_parent}};
    while (!work.empty()) {
        auto [b, parent] = work.back();
        work.pop_back();
        auto node = std::make_unique<Node>();
        node->block = b;
        node->parent = parent;
        node->index = parent->index + 1;
        node->ordinal = seen_.at(b->ref());
        bool ok = parent->valid && is_block_valid(*b, *ctx_);
        if (ok && !b->fruits.empty()) {
            long long floor_k = static_cast<long long>(node->index) - static_cast<long long>(ctx_->window);
            std::vector<Digest> window_refs;
            for (const Node* a = parent; a && static_cast<long long>(a->index) > floor_k; a = a->parent)
                window_refs.push_back(a->block->ref());
            for (const auto& f : b->fruits) {
                if (std::find(window_refs.begin(), window_refs.end(), f.h_f) == window_refs.end()) {
                    ok = false;
                    break;
                }
            }
        }
        node->valid = ok;
        const Node* raw = node.get();
        nodes_.emplace(b->ref(), std::move(node));
        if (ok) {
            if (raw->index > max_index_) {
                max_index_ = raw->index;
                leaders_.clear();
            }
            if (raw->index == max_index_) leaders_.push_back(raw);
        }
        auto orphan_it = orphans_.find(b->ref());
        if (orphan_it != orphans_.end()) {
            auto children = std::move(orphan_it->second);
            orphans_.erase(orphan_it);
            for (auto it = children.rbegin(); it != children.rend(); ++it) work.emplace_back(*it, raw);
        }
    }
}

const BlockTree::Node* BlockTree::best(const std::vector<BlockPtr>& current) const
{
    if (leaders_.size() == 1) return leaders_.front();
    auto position = [&](const Node* n) -> std::size_t {
        for (std::size_t i = 0; i < current.size(); ++i)
            if (current[i]->ref() == n->block->ref()) return i;
        return current.size();
    };
    const Node* win = nullptr;
    std::size_t win_pos = 0;
    for (const Node* n : leaders_) {
        std::size_t pos = position(n);
        if (!win) {
            win = n;
            win_pos = pos;
            continue;
        }
        bool better;
        if (pos != win_pos)
            better = pos < win_pos;
        else if (n->ordinal != win->ordinal)
            better = n->ordinal < win->ordinal;
        else
            better = n->block->ref() < win->block->ref();
        if (better) {
            win = n;
            win_pos = pos;
        }
    }
    return win;
}

Chain BlockTree::path(const Node* tip) const
{
    Chain c;
    c.blocks.resize(tip->index + 1);
    for (const Node* n = tip; n; n = n->parent) c.blocks[n->index] = n->block;
    return c;
}

// ---------------------------------------------------------------- OracleSuite

OracleSuite::OracleSuite(const ProtocolParams& params, const RandomOracle& ro, std::vector<QueryRecord>* log)
    : params_(params), ro_(&ro), ctx_(ValidityContext::make(ro, params)), log_(log), ledger_(params.n),
      used_(params.n), last_best_(params.n), ro_query_(params.n)
{
    for (unsigned i = 0; i < params.n; ++i) trees_.push_back(std::make_unique<BlockTree>(ctx_));
}

void OracleSuite::begin_round(Round t)
{
    round_ = t;
    for (auto& u : used_) u.fill(0);
}

void OracleSuite::admit(PartyId p, OracleTag tag)
{
    auto& slot = used_.at(p)[static_cast<std::size_t>(tag)];
    std::uint32_t limit = tag == OracleTag::ro ? params_.q : 1;
    if (slot >= limit)
        throw QuotaExceeded(std::string("party ") + std::to_string(p) + " exceeded the " + oracle_name(tag) +
                            " quota in round " + std::to_string(round_));
    ++slot;
    ledger_.charge(p, tag);
}

void OracleSuite::log(PartyId p, OracleTag tag, const Digest& outcome)
{
    if (log_) log_->push_back(QueryRecord{round_, p, tag, outcome});
}

ChainSummaryPtr OracleSuite::summary(const Chain& chain)
{
    const Digest tip = chain.tip().ref();
    for (auto it = summaries_.begin(); it != summaries_.end(); ++it) {
        if (it->first == tip) {
            summaries_.splice(summaries_.begin(), summaries_, it);
            return it->second;
        }
    }
    ChainSummaryPtr s;
    if (chain.length() >= 2) {
        const Digest parent = chain.at(chain.length() - 2).ref();
        for (const auto& [ref, sum] : summaries_)
            if (ref == parent) {
                s = extend_summary(*sum, chain, ctx_.window);
                break;
            }
    }
    if (!s) s = summarize(chain, ctx_.window);
    summaries_.emplace_front(tip, s);
    if (summaries_.size() > 32) summaries_.pop_back();
    return s;
}

LcResult OracleSuite::query_lc(PartyId p, const Chain& chain, const std::vector<BlockPtr>& new_blocks)
{
    admit(p, OracleTag::lc);
    BlockTree& tree = *trees_.at(p);
    for (const auto& b : new_blocks) tree.insert(b);
    for (const auto& b : chain.blocks) tree.insert(b);
    const BlockTree::Node* best = tree.best(new_blocks);

    LcResult r;
    if (best->index + 1 > chain.length()) {
        auto& cached = last_best_.at(p);
        if (cached.second.length() == best->index + 1 && cached.first == best->block->ref()) {
            r.chain = cached.second;
        } else {
            r.chain = tree.path(best);
            cached = {best->block->ref(), r.chain};
        }
        r.adopted = true;
    } else {
        r.chain = chain;
    }
    r.h_prev = r.chain.tip().ref();
    r.h_f = fruit_pointer(r.chain, params_.kappa_sim);
    r.summary = summary(r.chain);
    log(p, OracleTag::lc, r.h_prev);
    return r;
}

FsResult OracleSuite::query_fs(PartyId p, const Chain& chain, FruitStore& known, const std::vector<Fruit>& received)
{
    admit(p, OracleTag::fs);
    for (const auto& f : received)
        if (!known.contains(f) && is_fruit_valid(f, ctx_)) known.add(f);
    ChainSummaryPtr s = summary(chain);
    std::vector<std::size_t> picks;
    for (const auto& ref : s->recent_refs) {
        const auto* positions = known.pointing_at(ref);
        if (!positions) continue;
        for (std::size_t pos : *positions)
            if (!s->contains(known.items()[pos])) picks.push_back(pos);
    }
    std::sort(picks.begin(), picks.end());
    picks.erase(std::unique(picks.begin(), picks.end()), picks.end());
    FsResult r;
    r.f_rec.reserve(picks.size());
    for (std::size_t pos : picks) r.f_rec.push_back(known.items()[pos]);
    r.digest = ro_->fruit_set_digest(r.f_rec);
    log(p, OracleTag::fs, r.digest);
    return r;
}

Record OracleSuite::query_tx(PartyId p, const std::vector<Transaction>& txs, const ChainSummary& ledger)
{
    admit(p, OracleTag::tx);
    Record m;
    m.coinbase = p;
    std::unordered_set<std::uint64_t> taken;
    for (const auto& t : txs) {
        if (ledger.tx_ids.count(t.id) || !taken.insert(t.id).second) continue;
        m.txs.push_back(t);
    }
    log(p, OracleTag::tx, Digest{0, m.txs.size()});
    return m;
}

Record OracleSuite::query_tx(PartyId p, const std::vector<Transaction>& txs, const std::vector<Record>& records)
{
    ChainSummary ledger;
    for (const auto& r : records)
        for (const auto& t : r.txs) ledger.tx_ids.insert(t.id);
    return query_tx(p, txs, ledger);
}

bool OracleSuite::query_ltx(PartyId p, const Record& m, const Transaction& tx)
{
    admit(p, OracleTag::ltx);
    bool ok = is_well_formed(tx) && std::find(m.txs.begin(), m.txs.end(), tx) != m.txs.end();
    log(p, OracleTag::ltx, Digest{0, ok ? 1u : 0u});
    return ok;
}

Digest OracleSuite::query_ro(PartyId p, const Instance& inst, std::uint64_t eta)
{
    admit(p, OracleTag::ro);
    auto& [cached, w] = ro_query_.at(p);
    if (w.bytes().empty() || !(cached == inst)) {
        cached = inst;
        w.clear();
        RandomOracle::encode_mining(w, inst.h_prev, inst.h_f, 0, inst.dig, inst.m);
    }
    for (int i = 0; i < 8; ++i)
        w.bytes()[RandomOracle::kEtaOffset + i] = static_cast<std::uint8_t>(eta >> (8 * i));
    Digest h = ro_->evaluate(w.bytes());
    log(p, OracleTag::ro, h);
    return h;
}

Digest OracleSuite::query_ro(PartyId p, std::span<const std::uint8_t> query)
{
    admit(p, OracleTag::ro);
    Digest h = ro_->evaluate(query);
    log(p, OracleTag::ro, h);
    return h;
}

} // namespace fruitpool
