// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

// Test helpers: hand-mined objects, random small block sets and the
// exhaustive reference implementations the optimized code is checked against.

#ifndef FRUITPOOL_TEST_SUPPORT_HPP
#define FRUITPOOL_TEST_SUPPORT_HPP

#include <fruitpool/chain.hpp>
#include <fruitpool/oracles.hpp>
#include <fruitpool/random_oracle.hpp>

#include <algorithm>
#include <optional>
#include <random>
#include <vector>

namespace fruitpool::testing {

/** A tiny world: oracle, thresholds and a validity context with a free window. */
struct Toy {
    ProtocolParams params;
    RandomOracle ro;
    ValidityContext ctx;

    Toy(std::uint64_t seed, unsigned kappa, Probability p_f, Probability p_b, unsigned window)
        : params(make_params(kappa, p_f, p_b)), ro(seed, kappa), ctx(ValidityContext::make(ro, params))
    {
        ctx.window = window;
    }

    static ProtocolParams make_params(unsigned kappa, Probability p_f, Probability p_b)
    {
        ProtocolParams p;
        p.kappa_sim = kappa;
        p.p_f = p_f;
        p.p_b = p_b;
        p.r = 1;
        return p;
    }

    const BlockPtr& genesis() const { return ctx.genesis; }
    Chain genesis_chain() const { return Chain{{ctx.genesis}}; }

    Fruit mine_fruit(const Digest& h_prev, const Digest& h_f, const Record& m, std::mt19937_64& rng) const
    {
        Fruit f{h_prev, h_f, 0, ro.fruit_set_digest({}), m, {}};
        for (;;) {
            f.eta = rng() & params.kappa_mask();
            f.h = ro.mining(f.h_prev, f.h_f, f.eta, f.dig, f.m);
            if (fruit_success(f.h, params.d_pf())) return f;
        }
    }

    BlockPtr mine_block(const Block& parent, const Digest& h_f, std::vector<Fruit> fruits, const Record& m,
                        std::mt19937_64& rng) const
    {
        auto b = std::make_shared<Block>();
        b->fruits = std::move(fruits);
        b->header.h_prev = parent.ref();
        b->header.h_f = h_f;
        b->header.dig = ro.fruit_set_digest(b->fruits);
        b->header.m = m;
        for (;;) {
            b->header.eta = rng() & params.kappa_mask();
            b->header.h = ro.mining(b->header.h_prev, b->header.h_f, b->header.eta, b->header.dig, b->header.m);
            if (block_success(b->header.h, params.d_pb())) return b;
        }
    }
};

/** Blocks mined on random parents with a mix of valid, stale, duplicate and forged fruits. */
struct BlockSet {
    std::vector<BlockPtr> blocks; // genesis first
    std::vector<Fruit> fruits;
};

inline Record random_record(std::mt19937_64& rng, unsigned n)
{
    Record m;
    m.coinbase = static_cast<PartyId>(rng() % n);
    if (rng() % 3 == 0) {
        Transaction t;
        t.id = rng() % 1000;
        t.sender = m.coinbase;
        t.payments.push_back(Payment{static_cast<PartyId>(rng() % n), Amount(static_cast<long>(rng() % 7), 3)});
        m.txs.push_back(t);
    }
    return m;
}

inline BlockSet random_instance(const Toy& toy, std::mt19937_64& rng, std::size_t max_blocks = 10,
                                std::size_t max_fruits = 20)
{
    BlockSet in;
    in.blocks.push_back(toy.genesis());
    const std::size_t want_blocks = 1 + rng() % max_blocks;
    const std::size_t want_fruits = rng() % (max_fruits + 1);
    auto any_block = [&]() -> const Block& { return *in.blocks[rng() % in.blocks.size()]; };
    while (in.blocks.size() < want_blocks || in.fruits.size() < want_fruits) {
        const bool make_block = in.fruits.size() >= want_fruits || (in.blocks.size() < want_blocks && rng() % 2);
        if (!make_block) {
            Digest h_f = any_block().ref();
            if (rng() % 8 == 0) h_f = Digest{rng() & toy.params.kappa_mask(), rng() & toy.params.kappa_mask()};
            Fruit f = toy.mine_fruit(any_block().ref(), h_f, random_record(rng, 4), rng);
            if (rng() % 10 == 0) f.eta ^= 1; // forged: hash no longer matches
            in.fruits.push_back(f);
            continue;
        }
        std::vector<Fruit> embed;
        for (const auto& f : in.fruits)
            if (rng() % 3 == 0) embed.push_back(f);
        if (!embed.empty() && rng() % 6 == 0) embed.push_back(embed.front()); // duplicate inside one block
        const Block& parent = any_block();
        BlockPtr b = toy.mine_block(parent, any_block().ref(), embed, random_record(rng, 4), rng);
        if (rng() % 12 == 0) {
            auto bad = std::make_shared<Block>(*b);
            bad->header.dig.lo ^= 1; // digest no longer commits to the fruit set
            b = bad;
        }
        in.blocks.push_back(b);
    }
    return in;
}

/** Path from genesis to the given block following h_prev; stops at a missing parent. */
inline Chain chain_to(const std::vector<BlockPtr>& blocks, const BlockPtr& tip)
{
    Chain c;
    BlockPtr cur = tip;
    std::vector<BlockPtr> rev{cur};
    for (std::size_t guard = 0; guard <= blocks.size(); ++guard) {
        if (cur == blocks.front()) break;
        auto it = std::find_if(blocks.begin(), blocks.end(),
                               [&](const BlockPtr& b) { return b->ref() == cur->header.h_prev; });
        if (it == blocks.end()) break;
        cur = *it;
        rev.push_back(cur);
    }
    c.blocks.assign(rev.rbegin(), rev.rend());
    return c;
}

// ---------------------------------------------------------------- exhaustive references

namespace brute {

inline Digest hash(const RandomOracle& ro, const Fruit& f)
{
    ByteWriter w;
    RandomOracle::encode_mining(w, f.h_prev, f.h_f, f.eta, f.dig, f.m);
    return ro.prf(w.bytes());
}

inline bool fruit_valid(const Fruit& f, const ValidityContext& ctx)
{
    return f.h.lo < ctx.d_pf && hash(*ctx.ro, f) == f.h;
}

inline bool block_valid(const Block& b, const ValidityContext& ctx)
{
    if (b == *ctx.genesis) return true;
    if (!(b.header.h.hi < ctx.d_pb) || hash(*ctx.ro, b.header) != b.header.h) return false;
    for (const auto& f : b.fruits)
        if (!fruit_valid(f, ctx)) return false;
    return ctx.ro->fruit_set_digest(b.fruits) == b.header.dig;
}

/** Some index k of the chain with k > |chain| - window holds the reference h_f. */
inline bool recent(const Fruit& f, const std::vector<BlockPtr>& chain, unsigned window)
{
    const long long len = static_cast<long long>(chain.size());
    for (long long k = 0; k < len; ++k)
        if (k > len - static_cast<long long>(window) && chain[static_cast<std::size_t>(k)]->ref() == f.h_f) return true;
    return false;
}

inline bool chain_valid(const Chain& c, const ValidityContext& ctx)
{
    if (c.blocks.empty() || !(*c.blocks[0] == *ctx.genesis)) return false;
    for (std::size_t j = 1; j < c.blocks.size(); ++j) {
        const Block& b = *c.blocks[j];
        if (!block_valid(b, ctx) || b.header.h_prev != c.blocks[j - 1]->ref()) return false;
        std::vector<BlockPtr> prefix(c.blocks.begin(), c.blocks.begin() + static_cast<std::ptrdiff_t>(j));
        for (const auto& f : b.fruits)
            if (!recent(f, prefix, ctx.window)) return false;
    }
    return true;
}

/** Records of every distinct fruit in order of first appearance; nullopt when the chain is invalid. */
inline std::optional<std::vector<Record>> extract(const Chain& c, const ValidityContext& ctx)
{
    if (!chain_valid(c, ctx)) return std::nullopt;
    std::vector<Fruit> seen;
    std::vector<Record> out;
    for (const auto& b : c.blocks)
        for (const auto& f : b->fruits) {
            if (std::find(seen.begin(), seen.end(), f) != seen.end()) continue;
            seen.push_back(f);
            out.push_back(f.m);
        }
    return out;
}

/**
 * Longest valid chain over genesis, new_blocks and the current chain, by
 * enumerating every linked path. Ties: earliest tip in new_blocks, then
 * first seen (new_blocks before the chain's own blocks), then smallest
 * reference. The current chain is kept unless the winner is strictly longer.
 */
inline Chain longest(const Chain& current, const std::vector<BlockPtr>& new_blocks, const ValidityContext& ctx)
{
    std::vector<BlockPtr> all{ctx.genesis};
    auto add = [&](const BlockPtr& b) {
        for (const auto& x : all)
            if (x->ref() == b->ref()) return;
        all.push_back(b);
    };
    for (const auto& b : new_blocks) add(b);
    for (const auto& b : current.blocks) add(b);

    std::vector<Chain> maximal;
    std::size_t best_len = 0;
    std::vector<BlockPtr> path{ctx.genesis};
    auto dfs = [&](auto&& self) -> void {
        Chain c{path};
        if (!chain_valid(c, ctx)) return;
        if (c.length() > best_len) {
            best_len = c.length();
            maximal.clear();
        }
        if (c.length() == best_len) maximal.push_back(c);
        for (const auto& b : all) {
            if (b->header.h_prev != path.back()->ref() || b == ctx.genesis) continue;
            if (std::find(path.begin(), path.end(), b) != path.end()) continue;
            path.push_back(b);
            self(self);
            path.pop_back();
        }
    };
    dfs(dfs);

    auto position = [&](const Chain& c) {
        for (std::size_t i = 0; i < new_blocks.size(); ++i)
            if (new_blocks[i]->ref() == c.tip().ref()) return i;
        return new_blocks.size();
    };
    auto seen_at = [&](const Chain& c) {
        for (std::size_t i = 0; i < all.size(); ++i)
            if (all[i]->ref() == c.tip().ref()) return i;
        return all.size();
    };
    const Chain* win = &maximal.front();
    for (const auto& c : maximal) {
        auto key = std::make_tuple(position(c), seen_at(c), c.tip().ref());
        auto best = std::make_tuple(position(*win), seen_at(*win), win->tip().ref());
        if (key < best) win = &c;
    }
    return win->length() > current.length() ? *win : current;
}

} // namespace brute

} // namespace fruitpool::testing

#endif // FRUITPOOL_TEST_SUPPORT_HPP
