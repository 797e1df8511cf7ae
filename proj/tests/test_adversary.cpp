// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "scenarios.hpp"

#include <fruitpool/adversary.hpp>

#include <doctest.h>

using namespace fruitpool;
using namespace fruitpool::testing;

TEST_CASE("deviation names round-trip")
{
    for (unsigned v = 1; v <= 12; ++v) {
        auto tag = static_cast<DeviationTag>(v);
        CHECK(parse_deviation(deviation_name(tag)) == tag);
    }
    CHECK(parse_deviation("d5") == DeviationTag::D5);
    CHECK_THROWS_AS(parse_deviation("D0"), ConfigError);
    CHECK_THROWS_AS(parse_deviation("D13"), ConfigError);
    CHECK_THROWS_AS(parse_deviation("D1x"), ConfigError);
    CHECK_THROWS_AS(parse_deviation(""), ConfigError);
}

TEST_CASE("strategy structure checks")
{
    SUBCASE("at most n-1 corrupted")
    {
        Strategy s;
        s.corrupted = {0, 1, 2, 3, 4};
        s.includes_leader = true;
        CHECK_THROWS_AS(validate_strategy(s, 5, 10, 0), ConfigError);
        CHECK_THROWS_AS(h_c_adversary({0, 1, 2, 3, 4}, 5), ConfigError);
    }
    SUBCASE("party out of range")
    {
        Strategy s;
        s.corrupted = {7};
        CHECK_THROWS_AS(validate_strategy(s, 5, 10, 0), ConfigError);
    }
    SUBCASE("includes_leader must match")
    {
        Strategy s = h_c_adversary({0, 1}, 5);
        CHECK(s.includes_leader);
        s.includes_leader = false;
        CHECK_THROWS_AS(validate_strategy(s, 5, 10, 0), ConfigError);
    }
    SUBCASE("leader deviations need the leader")
    {
        Strategy s = h_c_adversary({1, 2}, 5);
        s.deviations = {deviation(DeviationTag::D12)};
        CHECK_THROWS_AS(validate_strategy(s, 5, 10, 0), ConfigError);
    }
    SUBCASE("member deviations never hit the leader")
    {
        Strategy s = h_c_adversary({0, 1}, 5);
        Deviation d = deviation(DeviationTag::D1);
        d.parties = {0};
        s.deviations = {d};
        CHECK_THROWS_AS(validate_strategy(s, 5, 10, 0), ConfigError);
    }
    SUBCASE("targets must be corrupted")
    {
        Strategy s = h_c_adversary({1}, 5);
        Deviation d = deviation(DeviationTag::D4);
        d.parties = {2};
        s.deviations = {d};
        CHECK_THROWS_AS(validate_strategy(s, 5, 10, 0), ConfigError);
    }
    SUBCASE("D3 budget above q")
    {
        Strategy s = h_c_adversary({1}, 5);
        Deviation d = deviation(DeviationTag::D3);
        d.budget = 11;
        s.deviations = {d};
        CHECK_THROWS_AS(validate_strategy(s, 5, 10, 0), ConfigError);
        s.deviations[0].budget = 10;
        CHECK_NOTHROW(validate_strategy(s, 5, 10, 0));
    }
    SUBCASE("D5 delay beyond the horizon")
    {
        Strategy s = h_c_adversary({1}, 5);
        Deviation d = deviation(DeviationTag::D5);
        d.delay = 65;
        s.deviations = {d};
        CHECK_THROWS_AS(validate_strategy(s, 5, 10, 0), ConfigError);
        s.delay_horizon = 100;
        CHECK_NOTHROW(validate_strategy(s, 5, 10, 0));
    }
    SUBCASE("empty window")
    {
        Strategy s = h_c_adversary({1}, 5);
        Deviation d = deviation(DeviationTag::D4);
        d.window = RoundWindow{5, 4};
        s.deviations = {d};
        CHECK_THROWS_AS(validate_strategy(s, 5, 10, 0), ConfigError);
    }
    SUBCASE("D12 fraction outside [0,1]")
    {
        Strategy s = h_c_adversary({0}, 5);
        Deviation d = deviation(DeviationTag::D12);
        d.paid_fraction = Amount(3, 2);
        s.deviations = {d};
        CHECK_THROWS_AS(validate_strategy(s, 5, 10, 0), ConfigError);
    }
}

TEST_CASE("conflicting compositions")
{
    auto expect_conflict = [](std::vector<Deviation> devs, std::set<PartyId> corrupted = {1, 2}) {
        Strategy s = h_c_adversary(corrupted, 5);
        s.deviations = std::move(devs);
        CHECK_THROWS_AS(validate_strategy(s, 5, 10, 0), InvalidComposition);
    };
    Breakaway b;
    b.leader = 1;
    b.members = {1, 2};
    Deviation d6 = deviation(DeviationTag::D6);
    d6.breakaway = b;
    Deviation d8 = deviation(DeviationTag::D8);
    d8.switch_round = 5;

    SUBCASE("D6 twice") { expect_conflict({d6, d6}); }
    SUBCASE("D8 twice") { expect_conflict({d8, d8}); }
    SUBCASE("D6 with D8") { expect_conflict({d6, d8}); }
    SUBCASE("D4 overlapping D5")
    {
        Deviation d4 = deviation(DeviationTag::D4);
        d4.window = RoundWindow{1, 10};
        Deviation d5 = deviation(DeviationTag::D5);
        d5.window = RoundWindow{10, 20};
        expect_conflict({d4, d5});
    }
    SUBCASE("same tag, overlapping windows, different parameters")
    {
        Deviation a = deviation(DeviationTag::D3);
        a.budget = 2;
        a.window = RoundWindow{1, 10};
        Deviation c = a;
        c.budget = 3;
        c.window = RoundWindow{5, 15};
        expect_conflict({a, c});
    }
    SUBCASE("disjoint windows compose")
    {
        Deviation d4 = deviation(DeviationTag::D4);
        d4.window = RoundWindow{1, 9};
        Deviation d5 = deviation(DeviationTag::D5);
        d5.window = RoundWindow{10, 20};
        Strategy s = h_c_adversary({1, 2}, 5);
        s.deviations = {d4, d5};
        CHECK_NOTHROW(validate_strategy(s, 5, 10, 0));
        Behavior beh = apply_deviation(s, 1, 0);
        CHECK(beh.withholds(9));
        CHECK_FALSE(beh.withholds(10));
        CHECK(beh.delay_at(10) == 1u);
    }
}

TEST_CASE("default deviation targets")
{
    Strategy s = h_c_adversary({0, 2, 3}, 5);
    CHECK(deviation_targets(deviation(DeviationTag::D1), s, 0) == std::vector<PartyId>{2, 3});
    CHECK(deviation_targets(deviation(DeviationTag::D4), s, 0) == std::vector<PartyId>{0, 2, 3});
    CHECK(deviation_targets(deviation(DeviationTag::D12), s, 0) == std::vector<PartyId>{0});
    Strategy members = h_c_adversary({2, 3}, 5);
    CHECK(deviation_targets(deviation(DeviationTag::D9), members, 0).empty());
    CHECK(apply_deviation(members, 1, 0).switch_round == std::nullopt);
}

TEST_CASE("claim 2 strategy layout")
{
    SUBCASE("budget split with remainder to the lowest ids")
    {
        Strategy s = claim2_strategy({1, 2, 3, 4}, 5, 10, 0, 7, 10);
        validate_strategy(s, 5, 10, 0);
        std::vector<unsigned> budgets;
        for (PartyId p = 1; p <= 4; ++p) budgets.push_back(apply_deviation(s, p, 0).budget_at(3, 10));
        CHECK(budgets == std::vector<unsigned>{3, 3, 2, 2});
        Behavior b1 = apply_deviation(s, 1, 0);
        CHECK(b1.skips_ltx(1));
        CHECK(b1.skips_ltx(6));
        CHECK_FALSE(b1.skips_ltx(7));
        CHECK(b1.switch_round == Round{7});
    }
    SUBCASE("full budget needs no D3")
    {
        Strategy s = claim2_strategy({1, 2, 3, 4}, 5, 10, 0, 7, 40);
        for (const auto& d : s.deviations) CHECK(d.tag != DeviationTag::D3);
        CHECK(apply_deviation(s, 2, 0).budget_at(3, 10) == 10u);
    }
    SUBCASE("r* = 1 has no D2 window")
    {
        Strategy s = claim2_strategy({1, 2}, 5, 10, 0, 1, 20);
        for (const auto& d : s.deviations) CHECK(d.tag != DeviationTag::D2);
        CHECK(apply_deviation(s, 1, 0).switch_round == Round{1});
    }
    CHECK_THROWS_AS(claim2_strategy({1}, 5, 10, 0, 0, 5), ConfigError);
}

TEST_CASE("honest parties keep the default behaviour")
{
    for (const auto& e : evp_suite(acceptance_params())) {
        validate_strategy(e.strategy, 5, 10, 0);
        for (PartyId p = 0; p < 5; ++p) {
            if (e.strategy.corrupted.count(p)) continue;
            Behavior b = apply_deviation(e.strategy, p, 0);
            CHECK_FALSE(b.switch_round.has_value());
            CHECK(b.tamper.empty());
            CHECK(b.budget_at(1, 10) == 10u);
        }
    }
}
