// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fruitpool/adversary.hpp>

#include <algorithm>

namespace fruitpool {

std::string deviation_name(DeviationTag tag)
{
    return "D" + std::to_string(static_cast<unsigned>(tag));
}

DeviationTag parse_deviation(const std::string& s)
{
    if (s.size() >= 2 && (s[0] == 'D' || s[0] == 'd')) {
        try {
            std::size_t used = 0;
            int v = std::stoi(s.substr(1), &used);
            if (used == s.size() - 1 && v >= 1 && v <= 12) return static_cast<DeviationTag>(v);
        } catch (const std::exception&) {
        }
    }
    throw ConfigError("unknown deviation '" + s + "'");
}

Strategy h_c_adversary(const std::set<PartyId>& corrupted, unsigned n, PartyId leader)
{
    if (corrupted.size() + 1 > n) throw ConfigError("at most n-1 parties can be corrupted");
    for (PartyId p : corrupted)
        if (p >= n) throw ConfigError("corrupted party " + std::to_string(p) + " out of range");
    Strategy s;
    s.corrupted = corrupted;
    s.includes_leader = corrupted.count(leader) > 0;
    return s;
}

namespace {

bool leader_only(DeviationTag t)
{
    return t == DeviationTag::D9 || t == DeviationTag::D10 || t == DeviationTag::D11 || t == DeviationTag::D12;
}

bool members_only(DeviationTag t)
{
    return t == DeviationTag::D1 || t == DeviationTag::D2;
}

std::string where(const Deviation& d)
{
    return deviation_name(d.tag) + " [" + std::to_string(d.window.from) + "," +
           (d.window.to == RoundWindow{}.to ? std::string("inf") : std::to_string(d.window.to)) + "]";
}

} // namespace

std::vector<PartyId> deviation_targets(const Deviation& d, const Strategy& s, PartyId leader)
{
    if (d.tag == DeviationTag::D6 && d.breakaway) return d.breakaway->members;
    if (!d.parties.empty()) return d.parties;
    std::vector<PartyId> out;
    if (leader_only(d.tag)) {
        if (s.corrupted.count(leader)) out.push_back(leader);
        return out;
    }
    for (PartyId p : s.corrupted)
        if (!members_only(d.tag) || p != leader) out.push_back(p);
    return out;
}

void validate_strategy(const Strategy& s, unsigned n, unsigned q, PartyId leader)
{
    if (s.corrupted.size() + 1 > n) throw ConfigError("at most n-1 parties can be corrupted");
    for (PartyId p : s.corrupted)
        if (p >= n) throw ConfigError("corrupted party " + std::to_string(p) + " out of range");
    if (s.includes_leader != (s.corrupted.count(leader) > 0))
        throw ConfigError("includes_leader does not match the corrupted set");
    for (const auto& d : s.deviations) {
        if (d.window.from < 1 || d.window.from > d.window.to) throw ConfigError(where(d) + ": empty round window");
        if (leader_only(d.tag) && !s.includes_leader)
            throw ConfigError(where(d) + " requires a corrupted pool leader");
        for (PartyId p : deviation_targets(d, s, leader)) {
            if (!s.corrupted.count(p))
                throw ConfigError(where(d) + " targets honest party " + std::to_string(p));
            if (members_only(d.tag) && p == leader) throw ConfigError(where(d) + " cannot target the pool leader");
            if (leader_only(d.tag) && p != leader) throw ConfigError(where(d) + " applies to the pool leader only");
        }
        switch (d.tag) {
        case DeviationTag::D3:
            if (d.budget > q) throw ConfigError(where(d) + ": budget above q");
            break;
        case DeviationTag::D5:
            if (d.delay < 1) throw ConfigError(where(d) + ": delay must be at least one round");
            if (d.delay > s.delay_horizon) throw ConfigError(where(d) + ": delay beyond the configured horizon");
            break;
        case DeviationTag::D6: {
            if (!d.breakaway) throw ConfigError(where(d) + ": missing breakaway pool");
            const auto& b = *d.breakaway;
            if (b.members.empty()) throw ConfigError(where(d) + ": empty breakaway pool");
            if (std::find(b.members.begin(), b.members.end(), b.leader) == b.members.end())
                throw ConfigError(where(d) + ": breakaway leader not in the pool");
            if (b.member_scale < 0) throw ConfigError(where(d) + ": negative member scale");
            break;
        }
        case DeviationTag::D8:
            if (d.switch_round < 1) throw ConfigError(where(d) + ": switch round must be at least 1");
            break;
        case DeviationTag::D12:
            if (d.paid_fraction < 0 || d.paid_fraction > 1)
                throw ConfigError(where(d) + ": paid fraction outside [0,1]");
            break;
        default: break;
        }
    }
    for (PartyId p = 0; p < n; ++p) (void)apply_deviation(s, p, leader);
}

Behavior apply_deviation(const Strategy& s, PartyId p, PartyId leader)
{
    Behavior b;
    if (!s.corrupted.count(p)) return b;
    b.selective = s.selective;

    std::vector<const Deviation*> mine;
    for (const auto& d : s.deviations) {
        auto targets = deviation_targets(d, s, leader);
        if (std::find(targets.begin(), targets.end(), p) != targets.end()) mine.push_back(&d);
    }

    auto conflict = [&](const Deviation& x, const Deviation& y) {
        throw InvalidComposition("party " + std::to_string(p) + ": " + where(x) + " conflicts with " + where(y));
    };
    for (std::size_t i = 0; i < mine.size(); ++i) {
        for (std::size_t j = i + 1; j < mine.size(); ++j) {
            const Deviation& x = *mine[i];
            const Deviation& y = *mine[j];
            const bool overlap = x.window.overlaps(y.window);
            auto pair = [&](DeviationTag a, DeviationTag c) {
                return (x.tag == a && y.tag == c) || (x.tag == c && y.tag == a);
            };
            if (x.tag == y.tag && overlap) {
                bool same = true;
                switch (x.tag) {
                case DeviationTag::D1: same = x.tamper == y.tamper && x.stale_mask == y.stale_mask; break;
                case DeviationTag::D3: same = x.budget == y.budget; break;
                case DeviationTag::D5: same = x.delay == y.delay; break;
                case DeviationTag::D12: same = x.paid_fraction == y.paid_fraction; break;
                default: break;
                }
                if (!same) conflict(x, y);
            }
            if (x.tag == y.tag && (x.tag == DeviationTag::D6 || x.tag == DeviationTag::D8)) conflict(x, y);
            if (pair(DeviationTag::D4, DeviationTag::D5) && overlap) conflict(x, y);
            if (pair(DeviationTag::D6, DeviationTag::D8)) conflict(x, y);
        }
    }

    for (const Deviation* d : mine) {
        switch (d->tag) {
        case DeviationTag::D1:
            b.tamper.push_back({d->window, d->tamper});
            b.stale_mask = d->stale_mask;
            break;
        case DeviationTag::D2: b.skip_ltx.push_back(d->window); break;
        case DeviationTag::D3: b.ro_budget.push_back({d->window, d->budget}); break;
        case DeviationTag::D4: b.withhold.push_back(d->window); break;
        case DeviationTag::D5: b.delay.push_back({d->window, d->delay}); break;
        case DeviationTag::D6: b.breakaway = *d->breakaway; break;
        case DeviationTag::D7: b.ignore_exit.push_back(d->window); break;
        case DeviationTag::D8: b.switch_round = d->switch_round; break;
        case DeviationTag::D9: b.skip_lc.push_back(d->window); break;
        case DeviationTag::D10: b.skip_tx.push_back(d->window); break;
        case DeviationTag::D11: b.skip_fs.push_back(d->window); break;
        case DeviationTag::D12: {
            Underpay u;
            u.paid_fraction = d->paid_fraction;
            b.underpay.push_back({d->window, u});
            break;
        }
        }
    }
    return b;
}

Strategy claim2_strategy(const std::set<PartyId>& corrupted, unsigned n, unsigned q, PartyId leader, Round r_star,
                         unsigned coalition_budget)
{
    if (r_star < 1) throw ConfigError("claim2_strategy: r* must be at least 1");
    Strategy s = h_c_adversary(corrupted, n, leader);
    s.name = "claim2(r*=" + std::to_string(r_star) + ",Q=" + std::to_string(coalition_budget) + ")";
    std::vector<PartyId> members;
    for (PartyId p : corrupted)
        if (p != leader) members.push_back(p);
    if (members.empty()) return s;
    const unsigned k = static_cast<unsigned>(members.size());
    const unsigned share = coalition_budget / k;
    unsigned extra = coalition_budget % k;
    for (PartyId p : members) {
        unsigned budget = std::min(q, share + (extra > 0 ? 1u : 0u));
        if (extra > 0) --extra;
        if (budget < q) {
            Deviation d3;
            d3.tag = DeviationTag::D3;
            d3.parties = {p};
            d3.budget = budget;
            s.deviations.push_back(d3);
        }
    }
    if (r_star > 1) {
        Deviation d2;
        d2.tag = DeviationTag::D2;
        d2.window = RoundWindow{1, r_star - 1};
        s.deviations.push_back(d2);
    }
    Deviation d8;
    d8.tag = DeviationTag::D8;
    d8.switch_round = r_star;
    s.deviations.push_back(d8);
    return s;
}

} // namespace fruitpool
