// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef FRUITPOOL_ENGINE_HPP
#define FRUITPOOL_ENGINE_HPP

#include <fruitpool/adversary.hpp>
#include <fruitpool/chain.hpp>
#include <fruitpool/network.hpp>
#include <fruitpool/oracles.hpp>
#include <fruitpool/protocols.hpp>
#include <fruitpool/types.hpp>

#include <json.hpp>

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fruitpool {

enum class RunMode : std::uint8_t { honest_pool = 0, honest_fruit = 1, strategy_run = 2 };
enum class Activation : std::uint8_t { leader_first = 0, round_robin = 1 };

const char* mode_name(RunMode m);
const char* activation_name(Activation a);

struct ExecutionConfig {
    ProtocolParams params;
    Strategy strategy;
    RunMode mode = RunMode::honest_pool;
    PoolVariant variant = PoolVariant::standard;
    PartyId leader = 0;
    Activation activation = Activation::leader_first;
    std::uint64_t seed = 0;
    /** Mean of the Poisson number of fresh transactions per party per round. */
    double tx_lambda = 2.0;
};

/** Throws ConfigError; returns non-fatal warnings. */
std::vector<std::string> validate_config(const ExecutionConfig& cfg);

nlohmann::json config_to_json(const ExecutionConfig& cfg);
ExecutionConfig config_from_json(const nlohmann::json& j);
nlohmann::json strategy_to_json(const Strategy& s);
Strategy strategy_from_json(const nlohmann::json& j);

struct DiffusalRecord {
    Round round = 0;
    std::uint64_t arrival = 0;
    PartyId sender = 0;
    PayloadKind kind = PayloadKind::fruit;
    /** Fruit h or block references. */
    std::vector<Digest> objects;
    std::optional<std::vector<PartyId>> recipients;
};

struct DeliveryRecord {
    Round round = 0;
    PartyId party = 0;
    std::vector<std::uint64_t> arrivals;
};

struct AuthRecord {
    Round round = 0;
    PartyId from = 0;
    PartyId to = 0;
    bool delivered = false;
    Digest h_prev;
    Digest h_f;
    Digest dig;
    PartyId coinbase = kNoParty;
    std::uint32_t tx_count = 0;
    std::optional<std::uint64_t> payment_tx;
};

struct ExitRecord {
    Round round = 0;
    PartyId party = 0;
    ExitReason reason = ExitReason::none;
};

struct RoleRecord {
    Round round = 0;
    PartyId party = 0;
    Role role = Role::honest_fruit;
    std::uint32_t pool = 0;
};

struct FinalParty {
    PartyId id = 0;
    Role role = Role::honest_fruit;
    bool corrupted = false;
    std::uint32_t pool = 0;
    /** Final local chain. */
    Chain view;
    std::array<std::uint64_t, kOracleCount> counts{};
    Amount cost;
};

struct Transcript {
    ExecutionConfig config;
    Round rounds = 0;
    std::vector<Role> initial_roles;
    std::vector<QueryRecord> queries;
    std::vector<DiffusalRecord> diffusals;
    std::vector<DeliveryRecord> deliveries;
    std::vector<AuthRecord> auths;
    std::vector<PaymentComputation> payments;
    std::vector<ExitRecord> exits;
    std::vector<RoleRecord> roles;
    std::vector<FinalParty> finals;
};

/** Runs N rounds. ConfigError on bad configs; ProtocolViolation from the network or the oracles. */
Transcript run_execution(const ExecutionConfig& cfg);

/** Payload bytes of the binary format (without the trailer). */
std::vector<std::uint8_t> encode_transcript(const Transcript& t);
/** Magic, payload and a BLAKE2b-256 trailer over the payload. */
std::vector<std::uint8_t> serialize_transcript(const Transcript& t);
/** DecodeError on truncation or checksum mismatch. */
Transcript deserialize_transcript(std::span<const std::uint8_t> bytes);
/** Hex BLAKE2b-256 of the payload bytes. */
std::string transcript_hash(const Transcript& t);

struct Statistics {
    /** Fruits mined (successful fruit queries). */
    std::uint64_t fruits_mined = 0;
    std::uint64_t payment_rounds = 0;
    /** Rounds with at least one successful block query. */
    std::uint64_t block_rounds = 0;
    /** Last round with a block; 0 if none. */
    Round last_block_round = 0;
    std::uint64_t blocks_mined = 0;
    std::vector<std::array<std::uint64_t, kOracleCount>> per_party;
};

Statistics measure_statistics(const Transcript& t);

/** Every round, every pool and every solo party has a member that queried O_tx. */
bool is_otx_respecting(const Transcript& t);

/** Per party per round: at most q O_ro queries and one query to each other oracle. */
bool respects_quotas(const Transcript& t);

/** Longest valid chain over the given blocks, unmetered. */
Chain longest_chain(const ValidityContext& ctx, const std::vector<BlockPtr>& blocks);

} // namespace fruitpool

#endif // FRUITPOOL_ENGINE_HPP
