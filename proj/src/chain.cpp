// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fruitpool/chain.hpp>

#include <algorithm>
#include <unordered_map>

namespace fruitpool {

ValidityContext ValidityContext::make(const RandomOracle& ro, const ProtocolParams& params)
{
    ValidityContext ctx;
    ctx.ro = &ro;
    ctx.d_pf = params.d_pf();
    ctx.d_pb = params.d_pb();
    ctx.window = params.recency_window();
    ctx.genesis = std::make_shared<const Block>(make_genesis(ro));
    return ctx;
}

Block make_genesis(const RandomOracle& ro)
{
    Block g;
    g.header.h = ro.mining(Digest{}, Digest{}, 0, Digest{}, Record{});
    return g;
}

bool is_fruit_valid(const Fruit& f, const ValidityContext& ctx)
{
    if (!fruit_success(f.h, ctx.d_pf)) return false;
    return ctx.ro->mining(f.h_prev, f.h_f, f.eta, f.dig, f.m) == f.h;
}

bool is_block_valid(const Block& b, const ValidityContext& ctx)
{
    if (ctx.genesis && b == *ctx.genesis) return true;
    const Fruit& hd = b.header;
    if (!block_success(hd.h, ctx.d_pb)) return false;
    if (ctx.ro->mining(hd.h_prev, hd.h_f, hd.eta, hd.dig, hd.m) != hd.h) return false;
    for (const auto& f : b.fruits)
        if (!is_fruit_valid(f, ctx)) return false;
    return ctx.ro->fruit_set_digest(b.fruits) == hd.dig;
}

bool is_recent(const Fruit& f, const Chain& chain, unsigned window)
{
    long long len = static_cast<long long>(chain.length());
    long long lo = std::max(0LL, len - static_cast<long long>(window) + 1);
    for (long long k = lo; k < len; ++k)
        if (chain.at(static_cast<std::size_t>(k)).ref() == f.h_f) return true;
    return false;
}

bool is_chain_valid(const Chain& chain, const ValidityContext& ctx)
{
    if (chain.blocks.empty() || !chain.blocks[0]) return false;
    if (!(*chain.blocks[0] == *ctx.genesis)) return false;
    // Latest index of each reference among chain[0..j-1].
    std::unordered_map<Digest, long long, DigestHash> last_index;
    last_index[chain.at(0).ref()] = 0;
    for (std::size_t j = 1; j < chain.length(); ++j) {
        const Block& b = chain.at(j);
        if (!is_block_valid(b, ctx)) return false;
        if (b.header.h_prev != chain.at(j - 1).ref()) return false;
        long long floor_k = static_cast<long long>(j) - static_cast<long long>(ctx.window);
        for (const auto& f : b.fruits) {
            auto it = last_index.find(f.h_f);
            if (it == last_index.end() || it->second <= floor_k) return false;
        }
        last_index[b.ref()] = static_cast<long long>(j);
    }
    return true;
}

std::vector<Fruit> distinct_fruits(const Chain& chain)
{
    std::vector<Fruit> out;
    std::unordered_set<Fruit, FruitHash> seen;
    for (const auto& b : chain.blocks)
        for (const auto& f : b->fruits)
            if (seen.insert(f).second) out.push_back(f);
    return out;
}

std::vector<Record> extract_fruit_unchecked(const Chain& chain)
{
    std::vector<Record> out;
    for (auto& f : distinct_fruits(chain)) out.push_back(std::move(f.m));
    return out;
}

std::vector<Record> extract_fruit(const Chain& chain, const ValidityContext& ctx)
{
    if (!is_chain_valid(chain, ctx)) throw InvalidChain("extract_fruit on an invalid chain");
    return extract_fruit_unchecked(chain);
}

Digest fruit_pointer(const Chain& chain, unsigned kappa)
{
    long long len = static_cast<long long>(chain.length());
    long long idx = std::max(1LL, len - static_cast<long long>(kappa));
    idx = std::min(idx, len - 1);
    return chain.at(static_cast<std::size_t>(idx)).ref();
}

namespace {

void add_block(ChainSummary& s, const BlockPtr& b)
{
    s.blocks.push_back(b);
    for (const auto& f : b->fruits) {
        if (!s.embedded.insert(&f).second) continue;
        for (const auto& t : f.m.txs) s.tx_ids.insert(t.id);
    }
}

void set_window(ChainSummary& s, const Chain& chain, unsigned window)
{
    s.recent_refs.clear();
    long long len = static_cast<long long>(chain.length());
    long long lo = std::max(0LL, len - static_cast<long long>(window) + 1);
    for (long long k = lo; k < len; ++k) s.recent_refs.push_back(chain.at(static_cast<std::size_t>(k)).ref());
}

} // namespace

ChainSummaryPtr summarize(const Chain& chain, unsigned window)
{
    auto s = std::make_shared<ChainSummary>();
    for (const auto& b : chain.blocks) add_block(*s, b);
    set_window(*s, chain, window);
    return s;
}

ChainSummaryPtr extend_summary(const ChainSummary& parent, const Chain& chain, unsigned window)
{
    auto s = std::make_shared<ChainSummary>();
    s->blocks = parent.blocks;
    s->embedded = parent.embedded;
    s->tx_ids = parent.tx_ids;
    add_block(*s, chain.blocks.back());
    set_window(*s, chain, window);
    return s;
}

} // namespace fruitpool
