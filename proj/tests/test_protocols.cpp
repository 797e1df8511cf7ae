// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "scenarios.hpp"

#include <fruitpool/protocols.hpp>

#include <doctest.h>

#include <random>

using namespace fruitpool;
using namespace fruitpool::testing;

TEST_CASE("payment sharing rule")
{
    SUBCASE("profitable round")
    {
        PaymentComputation pc = compute_payment(Amount(10), Amount(2), 5);
        CHECK(pc.w_member == Amount(8, 5));
        CHECK(pc.w_leader == Amount(2) + Amount(8, 5));
    }
    SUBCASE("reward below cost")
    {
        PaymentComputation pc = compute_payment(Amount(1), Amount(3), 4);
        CHECK(pc.w_member == 0);
        CHECK(pc.w_leader == 1);
    }
    SUBCASE("single-party pool keeps everything")
    {
        PaymentComputation pc = compute_payment(Amount(7, 3), Amount(1, 3), 1);
        CHECK(pc.w_leader == Amount(7, 3));
    }
}

TEST_CASE("payments conserve the block reward")
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 2000; ++i) {
        Amount rew(static_cast<long>(rng() % 5000), static_cast<long>(1 + rng() % 97));
        Amount cost(static_cast<long>(rng() % 5000), static_cast<long>(1 + rng() % 89));
        rew.canonicalize();
        cost.canonicalize();
        unsigned n = 1 + static_cast<unsigned>(rng() % 30);
        PaymentComputation pc = compute_payment(rew, cost, n);
        CHECK(pc.w_leader + Amount(n - 1) * pc.w_member == rew);
        CHECK(pc.w_member >= 0);
        CHECK(pc.w_leader >= pc.w_member);
    }
}

TEST_CASE("mismatch and payment-round predicates")
{
    Instance inst{Digest{1, 0}, Digest{2, 0}, Digest{3, 0}, Record{0, {}}};
    Fruit ok{inst.h_prev, inst.h_f, 5, inst.dig, inst.m, Digest{9, 9}};
    Fruit other = ok;
    other.m.coinbase = 1;
    auto b = std::make_shared<Block>();
    b->header = ok;
    std::vector<BlockPtr> blocks{b};
    CHECK_FALSE(has_mismatch(blocks, {ok}, inst));
    CHECK(has_mismatch(blocks, {ok, other}, inst));
    CHECK(is_payment_round(blocks, {ok}, inst));
    CHECK_FALSE(is_payment_round({}, {ok}, inst));
    CHECK_FALSE(is_payment_round(blocks, {other}, inst));
}

TEST_CASE("role and exit names")
{
    CHECK(std::string(role_name(Role::pool_leader)) == "pool_leader");
    CHECK(std::string(exit_reason_name(ExitReason::wrong_amount)) == "wrong_amount");
}

TEST_CASE("scripted deviations trigger exactly the expected exits")
{
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        for (const auto& sc : scripted_cases(seed)) {
            CAPTURE(sc.name);
            CAPTURE(seed);
            Transcript t = run_execution(sc.config);
            CHECK(exit_keys(t) == expected_exits(sc, t));
        }
    }
}

TEST_CASE("a leader that skips O_tx gets its payment rejected")
{
    ProtocolParams p = scripted_params();
    ExecutionConfig c = base_config(p, 4);
    c.strategy = h_c_adversary({0}, p.n);
    Deviation d = deviation(DeviationTag::D10);
    c.strategy.deviations = {d};
    Transcript t = run_execution(c);
    REQUIRE_FALSE(t.payments.empty());
    const Round first = t.payments.front().round;
    int rejected = 0;
    for (const auto& e : t.exits)
        if (e.reason == ExitReason::ltx_rejected) {
            CHECK(e.round == first);
            ++rejected;
        }
    CHECK(rejected == 4);
}

TEST_CASE("honest pool pays every member the protocol share")
{
    ProtocolParams p = scripted_params();
    ExecutionConfig c = base_config(p, 5);
    c.mode = RunMode::honest_pool;
    Transcript t = run_execution(c);
    CHECK(t.exits.empty());
    REQUIRE_FALSE(t.payments.empty());
    for (const auto& pc : t.payments) {
        CHECK(pc.tx.payments.size() == p.n - 1);
        for (const auto& pay : pc.tx.payments) CHECK(pay.amount == pc.w_member);
    }
}
