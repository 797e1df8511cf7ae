// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef FRUITPOOL_ACCOUNTING_HPP
#define FRUITPOOL_ACCOUNTING_HPP

#include <fruitpool/engine.hpp>
#include <fruitpool/types.hpp>

#include <json.hpp>

#include <set>
#include <stdexcept>
#include <vector>

namespace fruitpool {

class ViewNotHonest : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoHonestParty : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Crediting : std::uint8_t {
    /** Every payment computed during the run moves funds. */
    creation_round = 0,
    /** Only payments whose transaction is in the view's ledger move funds. */
    ledger_inclusion = 1,
};

struct RewardOptions {
    Crediting crediting = Crediting::creation_round;
    /** Ignore the last trim_k blocks of every view. */
    unsigned trim_k = 0;
};

/** R_f per distinct fruit to its coinbase, then pool payments (payer -amount, payee +amount). */
std::vector<Amount> rewards_in_view(const Chain& view, const std::vector<PaymentComputation>& payments,
                                    const Amount& reward_f, unsigned n, const RewardOptions& opt = {});

/** Rewards minus costs summed over the coalition, seen from an honest party's final chain. */
Amount coalition_utility(const Transcript& t, const std::set<PartyId>& coalition, PartyId view,
                         const RewardOptions& opt = {});

struct PartyAccount {
    Amount rewards;
    Amount cost;
    Amount profit;
};

struct ViewReport {
    PartyId view = 0;
    std::vector<PartyAccount> parties;
    Amount coalition;
};

struct UtilityReport {
    std::vector<ViewReport> views;
    Amount u_min;
    Amount u_max;
};

/** Min and max coalition utility over all honest final views. NoHonestParty if none. */
UtilityReport u_min_max(const Transcript& t, const std::set<PartyId>& coalition, const RewardOptions& opt = {});

nlohmann::json utility_json(const UtilityReport& r);

} // namespace fruitpool

#endif // FRUITPOOL_ACCOUNTING_HPP
