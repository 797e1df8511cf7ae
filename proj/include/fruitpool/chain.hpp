// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef FRUITPOOL_CHAIN_HPP
#define FRUITPOOL_CHAIN_HPP

#include <fruitpool/random_oracle.hpp>
#include <fruitpool/types.hpp>

#include <memory>
#include <unordered_set>
#include <vector>

namespace fruitpool {

class InvalidChain : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/** Everything the validity predicates read. */
struct ValidityContext {
    const RandomOracle* ro = nullptr;
    std::uint64_t d_pf = 0;
    std::uint64_t d_pb = 0;
    /** r * kappa. */
    unsigned window = 0;
    BlockPtr genesis;

    static ValidityContext make(const RandomOracle& ro, const ProtocolParams& params);
};

/** <<0,0,0,0,empty,H(0,0,0,0,empty)>, {}>. */
Block make_genesis(const RandomOracle& ro);

/** H(h_prev,h_f,eta,dig,m) = h and the last kappa bits are below D_pf. */
bool is_fruit_valid(const Fruit& f, const ValidityContext& ctx);

/** Digest matches d(F), every fruit valid, hash equation and first kappa bits below D_pb. Genesis is valid. */
bool is_block_valid(const Block& b, const ValidityContext& ctx);

/** Some chain index k > |chain| - window has reference h_f. */
bool is_recent(const Fruit& f, const Chain& chain, unsigned window);

/** Genesis, valid linked blocks, and every embedded fruit points within the window of its block. */
bool is_chain_valid(const Chain& chain, const ValidityContext& ctx);

/** Distinct fruits (full tuple) in block order, first occurrence kept. */
std::vector<Fruit> distinct_fruits(const Chain& chain);

/** Records of distinct_fruits, without validation. */
std::vector<Record> extract_fruit_unchecked(const Chain& chain);

/** Validates first; throws InvalidChain. */
std::vector<Record> extract_fruit(const Chain& chain, const ValidityContext& ctx);

/** Reference of chain[max(1, |chain| - kappa)], clamped to the tip. */
Digest fruit_pointer(const Chain& chain, unsigned kappa);

struct FruitPtrHash {
    std::size_t operator()(const Fruit* f) const noexcept { return FruitHash{}(*f); }
};
struct FruitPtrEq {
    bool operator()(const Fruit* a, const Fruit* b) const noexcept { return *a == *b; }
};

/**
 * Per-chain data shared by the oracles: the fruits already embedded, the
 * transaction ids in the ledger and the references inside the recency window.
 * Embedded fruits point into blocks, which the summary keeps alive.
 */
struct ChainSummary {
    std::vector<BlockPtr> blocks;
    std::unordered_set<const Fruit*, FruitPtrHash, FruitPtrEq> embedded;
    std::unordered_set<std::uint64_t> tx_ids;
    std::vector<Digest> recent_refs;

    bool contains(const Fruit& f) const { return embedded.count(&f) > 0; }
};

using ChainSummaryPtr = std::shared_ptr<const ChainSummary>;

ChainSummaryPtr summarize(const Chain& chain, unsigned window);
/** summarize(chain) given the summary of chain without its tip. */
ChainSummaryPtr extend_summary(const ChainSummary& parent, const Chain& chain, unsigned window);

} // namespace fruitpool

#endif // FRUITPOOL_CHAIN_HPP
