// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef FRUITPOOL_ADVERSARY_HPP
#define FRUITPOOL_ADVERSARY_HPP

#include <fruitpool/network.hpp>
#include <fruitpool/protocols.hpp>
#include <fruitpool/types.hpp>

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace fruitpool {

/** Two deviations ask for contradictory actions at the same step. */
class InvalidComposition : public ConfigError {
public:
    using ConfigError::ConfigError;
};

enum class DeviationTag : std::uint8_t {
    D1 = 1,   // tamper with the mining instance
    D2 = 2,   // skip O_ltx
    D3 = 3,   // fewer than q mining queries
    D4 = 4,   // withhold mined objects
    D5 = 5,   // delay mined objects
    D6 = 6,   // breakaway pool or solo mining
    D7 = 7,   // ignore leave / dissolve checks
    D8 = 8,   // switch to the fruit protocol
    D9 = 9,   // leader skips O_lc
    D10 = 10, // leader skips O_tx
    D11 = 11, // leader skips O_fs
    D12 = 12, // leader underpays
};

std::string deviation_name(DeviationTag tag);
/** "D1".."D12"; throws ConfigError. */
DeviationTag parse_deviation(const std::string& s);

struct Deviation {
    DeviationTag tag = DeviationTag::D1;
    RoundWindow window;
    /** Empty means the default targets of the tag. */
    std::vector<PartyId> parties;

    TamperKind tamper = TamperKind::self_record; // D1
    std::uint8_t stale_mask = 0xF;               // D1 (v): bit i keeps inst_{i+1}
    unsigned budget = 0;                         // D3
    unsigned delay = 1;                          // D5
    std::optional<Breakaway> breakaway;          // D6
    Round switch_round = 1;                      // D8
    Amount paid_fraction = 1;                    // D12
};

struct Strategy {
    std::string name = "H_C";
    std::set<PartyId> corrupted;
    std::vector<Deviation> deviations;
    OrderingPolicy ordering = OrderingPolicy::adversary_first;
    bool includes_leader = false;
    /** Corrupted senders restrict their diffusals to these parties in the window. */
    std::vector<Windowed<std::vector<PartyId>>> selective;
    /** Upper limit for D5 release delays. */
    unsigned delay_horizon = 64;
};

/** Honest behaviour, adversarial message ordering. */
Strategy h_c_adversary(const std::set<PartyId>& corrupted, unsigned n, PartyId leader = 0);

/** Parties a deviation applies to after defaults. */
std::vector<PartyId> deviation_targets(const Deviation& d, const Strategy& s, PartyId leader);

/** Structural checks; ConfigError or InvalidComposition. */
void validate_strategy(const Strategy& s, unsigned n, unsigned q, PartyId leader);

/** Behaviour of party p under the strategy; InvalidComposition on conflicts. */
Behavior apply_deviation(const Strategy& s, PartyId p, PartyId leader);

/**
 * D2 until r_star, D3 throughout, D8 at r_star. The coalition budget per round
 * is split evenly over the corrupted non-leader parties, remainder to the lowest ids.
 */
Strategy claim2_strategy(const std::set<PartyId>& corrupted, unsigned n, unsigned q, PartyId leader, Round r_star,
                         unsigned coalition_budget);

} // namespace fruitpool

#endif // FRUITPOOL_ADVERSARY_HPP
