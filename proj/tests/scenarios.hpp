// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

// Fixed configurations shared by the unit tests and the acceptance binary.

#ifndef FRUITPOOL_TEST_SCENARIOS_HPP
#define FRUITPOOL_TEST_SCENARIOS_HPP

#include <fruitpool/experiment.hpp>

#include <algorithm>
#include <string>
#include <tuple>
#include <vector>

namespace fruitpool::testing {

/**
 * n = 5, q = 10, N = 2000, kappa = 16, p_f = 0.05, p_b = 0.002. R_f and the
 * costs give p_f R_f = 0.2125 against 0.1059 for the profitability
 * condition with the degenerate factor dropped.
 */
inline ProtocolParams acceptance_params()
{
    ProtocolParams p;
    p.kappa_sim = 16;
    p.n = 5;
    p.q = 10;
    p.big_n = 2000;
    p.p_f = Probability::parse("0.05");
    p.p_b = Probability::parse("0.002");
    p.r = 2;
    p.reward_f = Amount(17, 4);
    p.costs = CostSchedule{Amount(1, 2), Amount(1, 4), Amount(1, 4), Amount(1, 20), Amount(1, 100)};
    p.delta = 0.5;
    return p;
}

inline ExecutionConfig base_config(const ProtocolParams& p, std::uint64_t seed)
{
    ExecutionConfig c;
    c.params = p;
    c.mode = RunMode::strategy_run;
    c.seed = seed;
    return c;
}

inline Deviation deviation(DeviationTag tag)
{
    Deviation d;
    d.tag = tag;
    return d;
}

/** H_C, D3 (0 and q/2), D4, D2, D8 (1, N/2, N), the claim 2 strategy, D1 (i) and D12 at one half. */
inline std::vector<SuiteEntry> evp_suite(const ProtocolParams& p, PartyId leader = 0)
{
    const std::set<PartyId> members{1, 2, 3, 4};
    std::vector<SuiteEntry> out;
    auto add = [&](const std::string& name, std::vector<Deviation> devs, std::set<PartyId> corrupted = {1, 2, 3, 4}) {
        SuiteEntry e;
        e.name = name;
        e.strategy = h_c_adversary(corrupted, p.n, leader);
        e.strategy.name = name;
        e.strategy.deviations = std::move(devs);
        out.push_back(std::move(e));
    };
    add("H_C", {});
    Deviation d3 = deviation(DeviationTag::D3);
    d3.budget = 0;
    add("D3_0", {d3});
    d3.budget = p.q / 2;
    add("D3_half", {d3});
    add("D4", {deviation(DeviationTag::D4)});
    add("D2", {deviation(DeviationTag::D2)});
    for (auto [name, r] : {std::pair<const char*, Round>{"D8_1", 1}, {"D8_half", p.big_n / 2}, {"D8_N", p.big_n}}) {
        Deviation d8 = deviation(DeviationTag::D8);
        d8.switch_round = r;
        add(name, {d8});
    }
    {
        SuiteEntry e;
        e.name = "claim2";
        e.strategy = claim2_strategy(members, p.n, p.q, leader, p.big_n / 2, (p.n - 1) * p.q);
        e.strategy.name = "claim2";
        out.push_back(std::move(e));
    }
    Deviation d1 = deviation(DeviationTag::D1);
    d1.tamper = TamperKind::self_record;
    add("D1_i", {d1});
    Deviation d12 = deviation(DeviationTag::D12);
    d12.paid_fraction = Amount(1, 2);
    add("D12_half", {d12}, {0, 1, 2, 3});
    return out;
}

/**
 * Small, fast world for scripted exits: p_f = 0.9 makes every party mine a
 * fruit in every round except with probability 0.1^q.
 */
inline ProtocolParams scripted_params()
{
    ProtocolParams p;
    p.kappa_sim = 30;
    p.n = 5;
    p.q = 10;
    p.big_n = 40;
    p.p_f = Probability{9, 10};
    p.p_b = Probability{1, 20};
    p.r = 2;
    p.reward_f = 1;
    p.costs = CostSchedule{Amount(1, 2), Amount(1, 4), Amount(1, 4), Amount(1, 100), Amount(1, 100)};
    return p;
}

struct ScriptedCase {
    std::string name;
    ExecutionConfig config;
};

/** D1 (i)-(v) by member 1 in round 6, D12 by the leader, and a leader that stops sending at round 10. */
inline std::vector<ScriptedCase> scripted_cases(std::uint64_t seed)
{
    const ProtocolParams p = scripted_params();
    std::vector<ScriptedCase> out;
    const char* names[] = {"D1_i", "D1_ii", "D1_iii", "D1_iv", "D1_v"};
    for (int k = 0; k < 5; ++k) {
        ExecutionConfig c = base_config(p, seed);
        c.strategy = h_c_adversary({1}, p.n);
        Deviation d = deviation(DeviationTag::D1);
        d.tamper = static_cast<TamperKind>(k);
        d.window = RoundWindow{6, 6};
        c.strategy.deviations = {d};
        out.push_back({names[k], c});
    }
    {
        ExecutionConfig c = base_config(p, seed);
        c.strategy = h_c_adversary({0}, p.n);
        Deviation d = deviation(DeviationTag::D12);
        d.paid_fraction = Amount(1, 2);
        c.strategy.deviations = {d};
        out.push_back({"D12", c});
    }
    {
        ExecutionConfig c = base_config(p, seed);
        c.strategy = h_c_adversary({0}, p.n);
        Deviation d = deviation(DeviationTag::D8);
        d.switch_round = 10;
        c.strategy.deviations = {d};
        out.push_back({"no_auth_message", c});
    }
    return out;
}

using ExitKey = std::tuple<Round, PartyId, ExitReason>;

inline std::vector<ExitKey> exit_keys(const Transcript& t)
{
    std::vector<ExitKey> out;
    for (const auto& e : t.exits) out.emplace_back(e.round, e.party, e.reason);
    std::sort(out.begin(), out.end());
    return out;
}

/**
 * The exits each scripted case must produce, derived from the protocol
 * rules and the first payment round of the run where needed.
 */
inline std::vector<ExitKey> expected_exits(const ScriptedCase& sc, const Transcript& t)
{
    std::vector<ExitKey> out;
    const unsigned n = sc.config.params.n;
    if (sc.name.rfind("D1_", 0) == 0) {
        // Tampered objects from round 6 arrive in round 7; every pool party sees the mismatch.
        for (PartyId p = 0; p < n; ++p) out.emplace_back(7, p, ExitReason::mismatch);
    } else if (sc.name == "D12") {
        // Underpaid members leave in the first payment round with a positive share;
        // their fruit-protocol objects reach the leader one round later.
        Round first = 0;
        for (const auto& pc : t.payments)
            if (pc.w_member > 0) {
                first = pc.round;
                break;
            }
        for (PartyId p = 1; p < n; ++p) out.emplace_back(first, p, ExitReason::wrong_amount);
        if (first > 0 && first < t.rounds) out.emplace_back(first + 1, 0, ExitReason::mismatch);
    } else if (sc.name == "no_auth_message") {
        out.emplace_back(10, 0, ExitReason::switched);
        for (PartyId p = 1; p < n; ++p) out.emplace_back(10, p, ExitReason::no_message);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace fruitpool::testing

#endif // FRUITPOOL_TEST_SCENARIOS_HPP
