// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "scenarios.hpp"
#include "support.hpp"

#include <fruitpool/accounting.hpp>

#include <doctest.h>

using namespace fruitpool;
using namespace fruitpool::testing;

namespace {

Record paid_record(PartyId coinbase, std::uint64_t tx_id)
{
    Record m;
    m.coinbase = coinbase;
    if (tx_id) {
        Transaction t;
        t.id = tx_id;
        t.sender = coinbase;
        m.txs.push_back(t);
    }
    return m;
}

PaymentComputation payment(PartyId payer, std::uint64_t tx_id, std::vector<Payment> pays)
{
    PaymentComputation pc;
    pc.payer = payer;
    pc.tx.id = tx_id;
    pc.tx.sender = payer;
    pc.tx.payments = std::move(pays);
    return pc;
}

/** genesis <- b1 {f0 by 0 (tx 7), f1 by 1} <- b2 {f0 again, f2 by 2}. */
Chain small_view(const Toy& toy)
{
    std::mt19937_64 rng(9);
    const Digest g = toy.genesis()->ref();
    Fruit f0 = toy.mine_fruit(g, g, paid_record(0, 7), rng);
    Fruit f1 = toy.mine_fruit(g, g, paid_record(1, 0), rng);
    BlockPtr b1 = toy.mine_block(*toy.genesis(), g, {f0, f1}, Record{}, rng);
    Fruit f2 = toy.mine_fruit(b1->ref(), b1->ref(), paid_record(2, 0), rng);
    BlockPtr b2 = toy.mine_block(*b1, g, {f0, f2}, Record{}, rng);
    return Chain{{toy.genesis(), b1, b2}};
}

} // namespace

TEST_CASE("rewards in a view")
{
    Toy toy(21, 16, Probability{1, 2}, Probability{1, 4}, 8);
    Chain view = small_view(toy);
    REQUIRE(is_chain_valid(view, toy.ctx));
    const Amount rf(3, 2);

    SUBCASE("one reward per distinct fruit")
    {
        auto r = rewards_in_view(view, {}, rf, 4);
        CHECK(r == std::vector<Amount>{rf, rf, rf, 0});
    }
    SUBCASE("payments move funds and conserve the total")
    {
        std::vector<PaymentComputation> pays{payment(0, 7, {{1, Amount(1, 3)}, {3, Amount(1, 6)}})};
        auto r = rewards_in_view(view, pays, rf, 4);
        CHECK(r[0] == rf - Amount(1, 2));
        CHECK(r[1] == rf + Amount(1, 3));
        CHECK(r[3] == Amount(1, 6));
        Amount total = 0;
        for (const auto& a : r) total += a;
        CHECK(total == 3 * rf);
    }
    SUBCASE("ledger inclusion drops payments not in the view")
    {
        std::vector<PaymentComputation> pays{payment(0, 7, {{1, 1}}), payment(2, 99, {{3, 1}})};
        RewardOptions opt;
        opt.crediting = Crediting::ledger_inclusion;
        auto r = rewards_in_view(view, pays, rf, 4, opt);
        CHECK(r[1] == rf + 1);
        CHECK(r[3] == 0);
        CHECK(rewards_in_view(view, pays, rf, 4)[3] == 1);
    }
    SUBCASE("trim_k ignores the tip")
    {
        RewardOptions opt;
        opt.trim_k = 1;
        CHECK(rewards_in_view(view, {}, rf, 4, opt) == std::vector<Amount>{rf, rf, 0, 0});
        opt.trim_k = 10;
        CHECK(rewards_in_view(view, {}, rf, 4, opt) == std::vector<Amount>(4, Amount(0)));
    }
}

TEST_CASE("coalition utility over honest views")
{
    ExecutionConfig c = base_config(scripted_params(), 6);
    c.strategy = h_c_adversary({1, 2}, 5);
    Transcript t = run_execution(c);
    UtilityReport r = u_min_max(t, {1, 2});
    CHECK(r.views.size() == 3);
    CHECK(r.u_min <= r.u_max);
    for (const auto& v : r.views) {
        CHECK(coalition_utility(t, {1, 2}, v.view) == v.coalition);
        Amount sum = 0;
        for (PartyId p : {1, 2}) sum += v.parties[p].profit;
        CHECK(sum == v.coalition);
    }
    CHECK_THROWS_AS(coalition_utility(t, {1, 2}, 1), ViewNotHonest);
    CHECK_THROWS_AS(coalition_utility(t, {1, 2}, 17), ViewNotHonest);

    auto j = utility_json(r);
    CHECK(j["views"].size() == 3);

    Transcript none = t;
    for (auto& f : none.finals) f.corrupted = true;
    CHECK_THROWS_AS(u_min_max(none, {1, 2}), NoHonestParty);
}
