// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fruitpool/engine.hpp>

#include <algorithm>
#include <map>
#include <random>

namespace fruitpool {

const char* mode_name(RunMode m)
{
    switch (m) {
    case RunMode::honest_pool: return "honest_pool";
    case RunMode::honest_fruit: return "honest_fruit";
    case RunMode::strategy_run: return "strategy_run";
    }
    return "?";
}

const char* activation_name(Activation a)
{
    return a == Activation::leader_first ? "leader_first" : "round_robin";
}

std::vector<std::string> validate_config(const ExecutionConfig& cfg)
{
    const ProtocolParams& P = cfg.params;
    P.validate();
    std::vector<std::string> warnings;
    if (cfg.leader >= P.n) throw ConfigError("leader " + std::to_string(cfg.leader) + " out of range");
    if (!(cfg.tx_lambda >= 0) || cfg.tx_lambda > 1e6) throw ConfigError("tx_lambda must be in [0, 1e6]");
    if (cfg.mode == RunMode::honest_pool) {
        if (cfg.activation != Activation::leader_first)
            throw ConfigError("honest_pool mode requires leader_first activation");
        if (!cfg.strategy.deviations.empty()) throw ConfigError("honest_pool mode takes no deviations");
    }
    validate_strategy(cfg.strategy, P.n, P.q, cfg.leader);
    if (cfg.mode == RunMode::honest_fruit) {
        for (const auto& d : cfg.strategy.deviations) {
            switch (d.tag) {
            case DeviationTag::D3:
            case DeviationTag::D4:
            case DeviationTag::D5:
            case DeviationTag::D8: break;
            default: throw ConfigError(deviation_name(d.tag) + " needs a pool; not allowed in honest_fruit mode");
            }
        }
    }
    if (P.big_n <= P.kappa_sim)
        warnings.push_back("N = " + std::to_string(P.big_n) + " is not above kappa = " + std::to_string(P.kappa_sim));
    return warnings;
}

Chain longest_chain(const ValidityContext& ctx, const std::vector<BlockPtr>& blocks)
{
    BlockTree tree(ctx);
    for (const auto& b : blocks) tree.insert(b);
    return tree.path(tree.best({}));
}

namespace {

void collect_refs(const Payload& p, std::vector<Digest>& out)
{
    switch (kind_of(p)) {
    case PayloadKind::fruit: out.push_back(std::get<Fruit>(p).h); break;
    case PayloadKind::block: out.push_back(std::get<BlockPtr>(p)->ref()); break;
    case PayloadKind::block_array:
        for (const auto& b : *std::get<BlockArray>(p)) out.push_back(b->ref());
        break;
    }
}

class Recorder : public EventSink {
public:
    explicit Recorder(Transcript& t) : t_(t) {}

    void payment(const PaymentComputation& pc) override { t_.payments.push_back(pc); }

    void exit(Round t, PartyId p, ExitReason reason) override { t_.exits.push_back({t, p, reason}); }

    void role(Round t, PartyId p, Role r, std::uint32_t pool) override { t_.roles.push_back({t, p, r, pool}); }

    void auth(Round t, PartyId from, PartyId to, bool delivered, const AuthMessage& msg) override
    {
        AuthRecord a;
        a.round = t;
        a.from = from;
        a.to = to;
        a.delivered = delivered;
        a.h_prev = msg.inst.h_prev;
        a.h_f = msg.inst.h_f;
        a.dig = msg.inst.dig;
        a.coinbase = msg.inst.m.coinbase;
        a.tx_count = static_cast<std::uint32_t>(msg.inst.m.txs.size());
        if (msg.payment) a.payment_tx = msg.payment->id;
        t_.auths.push_back(std::move(a));
    }

    void diffused(Round t, std::uint64_t arrival, PartyId sender, const Payload& payload,
                  const std::optional<std::vector<PartyId>>& recipients) override
    {
        DiffusalRecord d;
        d.round = t;
        d.arrival = arrival;
        d.sender = sender;
        d.kind = kind_of(payload);
        collect_refs(payload, d.objects);
        d.recipients = recipients;
        t_.diffusals.push_back(std::move(d));
    }

private:
    Transcript& t_;
};

// Breakaway pools are rewired once per distinct specification.
std::vector<Breakaway> breakaways_of(const Strategy& s)
{
    std::vector<Breakaway> out;
    for (const auto& d : s.deviations)
        if (d.tag == DeviationTag::D6 && d.breakaway) out.push_back(*d.breakaway);
    return out;
}

std::vector<Transaction> environment_txs(const RandomOracle& ro, PartyId p, Round t, unsigned n, double lambda,
                                         std::uint64_t& next_id)
{
    std::vector<Transaction> out;
    if (lambda <= 0) return out;
    std::mt19937_64 g = make_stream(ro, kStreamTx, p, t);
    std::poisson_distribution<unsigned> count(lambda);
    const unsigned k = count(g);
    out.reserve(k);
    for (unsigned i = 0; i < k; ++i) {
        Transaction tx;
        tx.id = next_id++;
        tx.sender = p;
        tx.payments.push_back(Payment{static_cast<PartyId>(g() % n), Amount(1)});
        out.push_back(std::move(tx));
    }
    return out;
}

} // namespace

Transcript run_execution(const ExecutionConfig& cfg)
{
    validate_config(cfg);
    const ProtocolParams& P = cfg.params;
    const unsigned n = P.n;

    Transcript tr;
    tr.config = cfg;
    tr.rounds = P.big_n;
    Recorder rec(tr);

    RandomOracle ro(cfg.seed, P.kappa_sim);
    OracleSuite oracles(P, ro, &tr.queries);
    const ValidityContext& vctx = oracles.validity();

    std::vector<bool> corrupted(n, false);
    for (PartyId p : cfg.strategy.corrupted) corrupted[p] = true;
    DiffuseNetwork net(n, corrupted, cfg.strategy.ordering);
    AuthChannel auth;

    const bool pooled = cfg.mode != RunMode::honest_fruit;
    std::vector<PartyState> parties;
    parties.reserve(n);
    for (PartyId p = 0; p < n; ++p) {
        Role role = Role::honest_fruit;
        if (pooled) role = p == cfg.leader ? Role::pool_leader : Role::pool_member;
        PartyState s = make_party(p, role, vctx);
        s.corrupted = corrupted[p];
        if (pooled) {
            s.pool_active = true;
            s.leader = cfg.leader;
            s.pool_size = n;
            if (role == Role::pool_leader) {
                s.inst.m = Record{p, {}};
                for (PartyId m = 0; m < n; ++m)
                    if (m != p) s.members.push_back(m);
            }
        }
        s.behavior = apply_deviation(cfg.strategy, p, cfg.leader);
        for (auto& u : s.behavior.underpay) {
            u.value.victims.clear();
            for (PartyId m = 0; m < n; ++m)
                if (m != cfg.leader && !corrupted[m]) u.value.victims.push_back(m);
        }
        tr.initial_roles.push_back(role);
        parties.push_back(std::move(s));
    }
    if (pooled)
        for (PartyId m = 0; m < n; ++m)
            if (m != cfg.leader) auth.connect(cfg.leader, m);

    const std::vector<Breakaway> breakaways = breakaways_of(cfg.strategy);
    std::uint64_t next_env_tx = 0;
    std::uint64_t next_payment = 0;
    std::vector<PartyId> order(n);

    for (Round t = 1; t <= P.big_n; ++t) {
        oracles.begin_round(t);
        auth.clear_before(t);
        for (const auto& b : breakaways) {
            if (b.start != t || b.members.size() < 2) continue;
            for (PartyId m : b.members)
                for (PartyId o = 0; o < n; ++o)
                    if (o != m) auth.disconnect(m, o);
            for (PartyId m : b.members)
                if (m != b.leader) auth.connect(b.leader, m);
        }
        for (auto& s : parties) apply_transitions(s, t, rec);

        std::vector<std::vector<Transaction>> txs(n);
        for (PartyId p = 0; p < n; ++p) txs[p] = environment_txs(ro, p, t, n, cfg.tx_lambda, next_env_tx);

        for (PartyId p = 0; p < n; ++p) order[p] = p;
        if (cfg.activation == Activation::leader_first)
            std::stable_partition(order.begin(), order.end(),
                                  [&](PartyId p) { return parties[p].role == Role::pool_leader; });

        for (PartyId p : order) {
            PartyState& s = parties[p];
            Inbox in = net.deliver(t, p);
            RoundContext ctx;
            ctx.t = t;
            ctx.params = &P;
            ctx.variant = cfg.variant;
            ctx.oracles = &oracles;
            ctx.net = &net;
            ctx.auth = &auth;
            ctx.events = &rec;
            ctx.next_payment_id = &next_payment;
            ctx.nonces = make_stream(ro, kStreamNonce, p, t);
            ctx.txs = std::move(txs[p]);
            for (auto& b : in.blocks) {
                if (!s.seen_blocks.insert(b->ref()).second) continue;
                s.block_log.push_back(b);
                ctx.blocks.push_back(std::move(b));
            }
            for (const auto& f : in.fruits) s.fruit_log.add(f);
            ctx.fruits = std::move(in.fruits);
            tr.deliveries.push_back({t, p, std::move(in.arrivals)});
            party_round(s, ctx);
        }
        net.prune(t + 1);
    }

    const CostLedger& ledger = oracles.ledger();
    for (const auto& s : parties) {
        FinalParty f;
        f.id = s.id;
        f.role = s.role;
        f.corrupted = s.corrupted;
        f.pool = s.pool;
        if (s.role == Role::pool_leader || s.role == Role::pool_member)
            f.view = longest_chain(vctx, s.block_log);
        else
            f.view = s.chain;
        for (std::size_t k = 0; k < kOracleCount; ++k) f.counts[k] = ledger.count(s.id, static_cast<OracleTag>(k));
        f.cost = ledger.total(s.id, P.costs);
        tr.finals.push_back(std::move(f));
    }
    return tr;
}

Statistics measure_statistics(const Transcript& t)
{
    const ProtocolParams& P = t.config.params;
    const std::uint64_t d_pf = P.d_pf();
    const std::uint64_t d_pb = P.d_pb();
    Statistics st;
    st.per_party.assign(P.n, {});
    Round last_counted = 0;
    for (const auto& q : t.queries) {
        ++st.per_party.at(q.party)[static_cast<std::size_t>(q.tag)];
        if (q.tag != OracleTag::ro) continue;
        if (fruit_success(q.outcome, d_pf)) ++st.fruits_mined;
        if (block_success(q.outcome, d_pb)) {
            ++st.blocks_mined;
            if (q.round != last_counted) {
                ++st.block_rounds;
                last_counted = q.round;
            }
            st.last_block_round = std::max(st.last_block_round, q.round);
        }
    }
    Round last_payment = 0;
    for (const auto& pc : t.payments) {
        if (pc.round != last_payment) ++st.payment_rounds;
        last_payment = pc.round;
    }
    return st;
}

bool respects_quotas(const Transcript& t)
{
    const unsigned q = t.config.params.q;
    std::map<std::pair<Round, PartyId>, std::array<std::uint32_t, kOracleCount>> used;
    for (const auto& rec : t.queries) {
        auto& u = used[{rec.round, rec.party}];
        const auto k = static_cast<std::size_t>(rec.tag);
        if (++u[k] > (rec.tag == OracleTag::ro ? q : 1u)) return false;
    }
    return true;
}

bool is_otx_respecting(const Transcript& t)
{
    const unsigned n = t.config.params.n;
    std::vector<Role> role = t.initial_roles;
    std::vector<std::uint32_t> pool(n, 0);
    std::size_t next_role = 0;
    std::size_t next_query = 0;
    for (Round r = 1; r <= t.rounds; ++r) {
        while (next_role < t.roles.size() && t.roles[next_role].round == r) {
            const auto& e = t.roles[next_role++];
            role.at(e.party) = e.role;
            pool.at(e.party) = e.pool;
        }
        std::vector<bool> asked(n, false);
        while (next_query < t.queries.size() && t.queries[next_query].round == r) {
            const auto& qr = t.queries[next_query++];
            if (qr.tag == OracleTag::tx) asked.at(qr.party) = true;
        }
        // Groups: one per pool id among pooled parties, singletons otherwise.
        std::map<std::uint32_t, bool> pool_ok;
        for (PartyId p = 0; p < n; ++p) {
            const bool in_pool = role[p] == Role::pool_leader || role[p] == Role::pool_member;
            if (in_pool) {
                pool_ok[pool[p]] = pool_ok[pool[p]] || asked[p];
            } else if (!asked[p]) {
                return false;
            }
        }
        for (const auto& [id, ok] : pool_ok)
            if (!ok) return false;
    }
    return true;
}

} // namespace fruitpool
