// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "scenarios.hpp"

#include <fruitpool/engine.hpp>
#include <fruitpool/experiment.hpp>

#include <doctest.h>

using namespace fruitpool;
using namespace fruitpool::testing;

namespace {

ExecutionConfig small_config(std::uint64_t seed, RunMode mode = RunMode::honest_pool)
{
    ExecutionConfig c = base_config(scripted_params(), seed);
    c.mode = mode;
    return c;
}

} // namespace

TEST_CASE("executions are deterministic in the seed")
{
    ExecutionConfig c = small_config(11);
    Transcript a = run_execution(c);
    Transcript b = run_execution(c);
    CHECK(transcript_hash(a) == transcript_hash(b));
    CHECK(encode_transcript(a) == encode_transcript(b));
    c.seed = 12;
    CHECK(transcript_hash(run_execution(c)) != transcript_hash(a));
}

TEST_CASE("transcript binary round-trip")
{
    ExecutionConfig c = small_config(3, RunMode::strategy_run);
    c.strategy = evp_suite(c.params).back().strategy; // D12 with a corrupted leader
    Transcript t = run_execution(c);
    auto bytes = serialize_transcript(t);
    Transcript back = deserialize_transcript(bytes);
    CHECK(transcript_hash(back) == transcript_hash(t));
    CHECK(back.rounds == t.rounds);
    CHECK(back.exits.size() == t.exits.size());
    CHECK(back.payments.size() == t.payments.size());

    SUBCASE("bad magic")
    {
        bytes[0] ^= 0xFF;
        CHECK_THROWS_AS(deserialize_transcript(bytes), DecodeError);
    }
    SUBCASE("flipped checksum byte")
    {
        bytes.back() ^= 1;
        CHECK_THROWS_AS(deserialize_transcript(bytes), DecodeError);
    }
    SUBCASE("flipped payload byte")
    {
        bytes[bytes.size() / 2] ^= 1;
        CHECK_THROWS_AS(deserialize_transcript(bytes), DecodeError);
    }
    SUBCASE("truncated")
    {
        bytes.resize(bytes.size() - 40);
        CHECK_THROWS_AS(deserialize_transcript(bytes), DecodeError);
    }
    SUBCASE("empty")
    {
        CHECK_THROWS_AS(deserialize_transcript(std::vector<std::uint8_t>{}), DecodeError);
    }
}

TEST_CASE("honest runs respect quotas and O_tx")
{
    for (RunMode m : {RunMode::honest_pool, RunMode::honest_fruit}) {
        Transcript t = run_execution(small_config(5, m));
        CHECK(respects_quotas(t));
        CHECK(is_otx_respecting(t));
        CHECK(t.exits.empty());
        CHECK(t.rounds == 40u);
        Statistics s = measure_statistics(t);
        CHECK(s.fruits_mined > 0);
        CHECK(s.blocks_mined > 0);
        CHECK(validate_transcript(t).ok());
    }
}

TEST_CASE("final chains are valid and agree up to a short suffix")
{
    Transcript t = run_execution(small_config(8));
    RandomOracle ro(t.config.seed, t.config.params.kappa_sim);
    ValidityContext ctx = ValidityContext::make(ro, t.config.params);
    std::size_t shortest = SIZE_MAX;
    for (const auto& f : t.finals) {
        CHECK(is_chain_valid(f.view, ctx));
        shortest = std::min(shortest, f.view.length());
    }
    const std::size_t kappa = t.config.params.kappa_sim;
    const std::size_t common = shortest > kappa ? shortest - kappa : 1;
    for (const auto& f : t.finals)
        for (std::size_t i = 0; i < common; ++i) CHECK(f.view.at(i).ref() == t.finals[0].view.at(i).ref());
}

TEST_CASE("config validation")
{
    SUBCASE("honest_pool with deviations")
    {
        ExecutionConfig c = small_config(1);
        c.strategy = h_c_adversary({1}, 5);
        c.strategy.deviations = {deviation(DeviationTag::D4)};
        CHECK_THROWS_AS(validate_config(c), ConfigError);
    }
    SUBCASE("leader out of range")
    {
        ExecutionConfig c = small_config(1);
        c.leader = 9;
        CHECK_THROWS_AS(validate_config(c), ConfigError);
    }
    SUBCASE("a valid strategy run")
    {
        ExecutionConfig c = small_config(1, RunMode::strategy_run);
        c.strategy = h_c_adversary({1, 2}, 5);
        CHECK_NOTHROW(validate_config(c));
    }
}

TEST_CASE("config json round-trip")
{
    for (const auto& e : evp_suite(acceptance_params())) {
        ExecutionConfig c = base_config(acceptance_params(), 77);
        c.strategy = e.strategy;
        auto j = config_to_json(c);
        CHECK(config_to_json(config_from_json(j)) == j);
    }
}

TEST_CASE("replay checks catch tampering")
{
    ExecutionConfig c = small_config(4, RunMode::strategy_run);
    c.strategy = h_c_adversary({1, 2}, 5);
    Transcript t = run_execution(c);
    REQUIRE(validate_transcript(t).ok());

    SUBCASE("cost meter")
    {
        t.finals[1].cost += 1;
        CHECK_FALSE(validate_transcript(t).ok());
    }
    SUBCASE("query count")
    {
        t.finals[2].counts[0] += 1;
        CHECK_FALSE(validate_transcript(t).ok());
    }
    SUBCASE("payment amount")
    {
        REQUIRE_FALSE(t.payments.empty());
        t.payments.front().w_member += 1;
        CHECK_FALSE(validate_transcript(t).ok());
    }
}
