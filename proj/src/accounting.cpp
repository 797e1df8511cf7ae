// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fruitpool/accounting.hpp>

#include <fruitpool/chain.hpp>

#include <unordered_set>

namespace fruitpool {

std::vector<Amount> rewards_in_view(const Chain& view, const std::vector<PaymentComputation>& payments,
                                    const Amount& reward_f, unsigned n, const RewardOptions& opt)
{
    std::vector<Amount> out(n, Amount(0));
    Chain trimmed;
    const Chain* c = &view;
    if (opt.trim_k > 0) {
        std::size_t keep = view.length() > opt.trim_k ? view.length() - opt.trim_k : 1;
        keep = std::max<std::size_t>(keep, 1);
        trimmed.blocks.assign(view.blocks.begin(), view.blocks.begin() + static_cast<std::ptrdiff_t>(keep));
        c = &trimmed;
    }
    std::unordered_set<std::uint64_t> ledger_tx;
    for (const Fruit& f : distinct_fruits(*c)) {
        if (f.m.coinbase < n) out[f.m.coinbase] += reward_f;
        if (opt.crediting == Crediting::ledger_inclusion)
            for (const auto& tx : f.m.txs) ledger_tx.insert(tx.id);
    }
    for (const auto& pc : payments) {
        if (opt.crediting == Crediting::ledger_inclusion && !ledger_tx.count(pc.tx.id)) continue;
        for (const auto& pay : pc.tx.payments) {
            if (pay.to >= n || pc.payer >= n) continue;
            out[pc.payer] -= pay.amount;
            out[pay.to] += pay.amount;
        }
    }
    return out;
}

namespace {

ViewReport view_report(const Transcript& t, const FinalParty& view, const std::set<PartyId>& coalition,
                       const RewardOptions& opt)
{
    const ProtocolParams& P = t.config.params;
    auto rewards = rewards_in_view(view.view, t.payments, P.reward_f, P.n, opt);
    ViewReport r;
    r.view = view.id;
    r.coalition = 0;
    for (PartyId p = 0; p < P.n; ++p) {
        PartyAccount a;
        a.rewards = rewards[p];
        a.cost = t.finals.at(p).cost;
        a.profit = a.rewards - a.cost;
        if (coalition.count(p)) r.coalition += a.profit;
        r.parties.push_back(std::move(a));
    }
    return r;
}

} // namespace

Amount coalition_utility(const Transcript& t, const std::set<PartyId>& coalition, PartyId view,
                         const RewardOptions& opt)
{
    if (view >= t.finals.size() || t.finals[view].corrupted)
        throw ViewNotHonest("party " + std::to_string(view) + " is not an honest party");
    return view_report(t, t.finals[view], coalition, opt).coalition;
}

UtilityReport u_min_max(const Transcript& t, const std::set<PartyId>& coalition, const RewardOptions& opt)
{
    UtilityReport r;
    bool first = true;
    for (const auto& f : t.finals) {
        if (f.corrupted) continue;
        r.views.push_back(view_report(t, f, coalition, opt));
        const Amount& u = r.views.back().coalition;
        if (first || u < r.u_min) r.u_min = u;
        if (first || u > r.u_max) r.u_max = u;
        first = false;
    }
    if (first) throw NoHonestParty("no honest party in the execution");
    return r;
}

nlohmann::json utility_json(const UtilityReport& r)
{
    nlohmann::json j;
    j["u_min"] = amount_str(r.u_min);
    j["u_max"] = amount_str(r.u_max);
    j["u_min_decimal"] = amount_double(r.u_min);
    j["u_max_decimal"] = amount_double(r.u_max);
    j["views"] = nlohmann::json::array();
    for (const auto& v : r.views) {
        nlohmann::json jv;
        jv["view"] = v.view;
        jv["coalition"] = amount_str(v.coalition);
        jv["per_party"] = nlohmann::json::array();
        for (const auto& a : v.parties)
            jv["per_party"].push_back({{"rewards", amount_str(a.rewards)},
                                       {"cost", amount_str(a.cost)},
                                       {"profit", amount_str(a.profit)}});
        j["views"].push_back(std::move(jv));
    }
    return j;
}

} // namespace fruitpool
