// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fruitpool/engine.hpp>

namespace fruitpool {

using nlohmann::json;

namespace {

const char* tamper_name(TamperKind k)
{
    switch (k) {
    case TamperKind::self_record: return "self_record";
    case TamperKind::other_prev: return "other_prev";
    case TamperKind::other_pointer: return "other_pointer";
    case TamperKind::other_digest: return "other_digest";
    case TamperKind::stale: return "stale";
    }
    return "?";
}

TamperKind parse_tamper(const std::string& s)
{
    if (s == "self_record" || s == "i") return TamperKind::self_record;
    if (s == "other_prev" || s == "ii") return TamperKind::other_prev;
    if (s == "other_pointer" || s == "iii") return TamperKind::other_pointer;
    if (s == "other_digest" || s == "iv") return TamperKind::other_digest;
    if (s == "stale" || s == "v") return TamperKind::stale;
    throw ConfigError("unknown D1 sub-case '" + s + "'");
}

// Amounts and probabilities travel as exact strings; plain JSON numbers are accepted on input.
std::string exact_text(const json& j, const char* what)
{
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    if (j.is_number()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
        return buf;
    }
    throw ConfigError(std::string(what) + ": expected a number or a string");
}

template <typename T>
T get_or(const json& j, const char* key, T fallback)
{
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return fallback;
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("bad value for '") + key + "'");
    }
}

json window_json(const RoundWindow& w)
{
    json j;
    j["from"] = w.from;
    j["to"] = w.to == RoundWindow{}.to ? json(nullptr) : json(w.to);
    return j;
}

RoundWindow window_from(const json& j)
{
    RoundWindow w;
    w.from = get_or<Round>(j, "from", 1);
    w.to = get_or<Round>(j, "to", RoundWindow{}.to);
    return w;
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const char* where)
{
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : keys) known = known || it.key() == k;
        if (!known) throw ConfigError(std::string(where) + ": unknown key '" + it.key() + "'");
    }
}

json params_json(const ProtocolParams& p)
{
    json j;
    j["kappa"] = p.kappa_sim;
    j["n"] = p.n;
    j["q"] = p.q;
    j["N"] = p.big_n;
    j["p_f"] = p.p_f.str();
    j["p_b"] = p.p_b.str();
    j["r"] = p.r;
    j["R_f"] = amount_str(p.reward_f);
    j["costs"] = {{"lc", amount_str(p.costs.lc)},
                  {"fs", amount_str(p.costs.fs)},
                  {"tx", amount_str(p.costs.tx)},
                  {"ro", amount_str(p.costs.ro)},
                  {"ltx", amount_str(p.costs.ltx)}};
    j["delta"] = p.delta;
    return j;
}

ProtocolParams params_from(const json& j)
{
    if (!j.is_object()) throw ConfigError("params: expected an object");
    reject_unknown(j, {"kappa", "n", "q", "N", "p_f", "p_b", "r", "R_f", "costs", "delta"}, "params");
    ProtocolParams p;
    p.kappa_sim = get_or<unsigned>(j, "kappa", p.kappa_sim);
    p.n = get_or<unsigned>(j, "n", p.n);
    p.q = get_or<unsigned>(j, "q", p.q);
    p.big_n = get_or<Round>(j, "N", p.big_n);
    if (j.contains("p_f")) p.p_f = Probability::parse(exact_text(j["p_f"], "p_f"));
    if (j.contains("p_b")) p.p_b = Probability::parse(exact_text(j["p_b"], "p_b"));
    p.r = get_or<unsigned>(j, "r", p.r);
    if (j.contains("R_f")) p.reward_f = parse_amount(exact_text(j["R_f"], "R_f"));
    if (j.contains("costs")) {
        const json& c = j["costs"];
        if (!c.is_object()) throw ConfigError("costs: expected an object");
        reject_unknown(c, {"lc", "fs", "tx", "ro", "ltx"}, "costs");
        if (c.contains("lc")) p.costs.lc = parse_amount(exact_text(c["lc"], "costs.lc"));
        if (c.contains("fs")) p.costs.fs = parse_amount(exact_text(c["fs"], "costs.fs"));
        if (c.contains("tx")) p.costs.tx = parse_amount(exact_text(c["tx"], "costs.tx"));
        if (c.contains("ro")) p.costs.ro = parse_amount(exact_text(c["ro"], "costs.ro"));
        if (c.contains("ltx")) p.costs.ltx = parse_amount(exact_text(c["ltx"], "costs.ltx"));
    }
    p.delta = get_or<double>(j, "delta", p.delta);
    return p;
}

json deviation_json(const Deviation& d)
{
    json j;
    j["tag"] = deviation_name(d.tag);
    j["window"] = window_json(d.window);
    if (!d.parties.empty()) j["parties"] = d.parties;
    switch (d.tag) {
    case DeviationTag::D1:
        j["tamper"] = tamper_name(d.tamper);
        if (d.tamper == TamperKind::stale) j["stale_mask"] = d.stale_mask;
        break;
    case DeviationTag::D3: j["budget"] = d.budget; break;
    case DeviationTag::D5: j["delay"] = d.delay; break;
    case DeviationTag::D6:
        if (d.breakaway) {
            j["breakaway"] = {{"start", d.breakaway->start},
                              {"leader", d.breakaway->leader},
                              {"members", d.breakaway->members},
                              {"member_scale", amount_str(d.breakaway->member_scale)}};
        }
        break;
    case DeviationTag::D8: j["switch_round"] = d.switch_round; break;
    case DeviationTag::D12: j["paid_fraction"] = amount_str(d.paid_fraction); break;
    default: break;
    }
    return j;
}

Deviation deviation_from(const json& j)
{
    if (!j.is_object()) throw ConfigError("deviation: expected an object");
    reject_unknown(j,
                   {"tag", "window", "from", "to", "parties", "tamper", "stale_mask", "budget", "delay", "breakaway",
                    "switch_round", "r_star", "paid_fraction"},
                   "deviation");
    Deviation d;
    if (!j.contains("tag") || !j["tag"].is_string()) throw ConfigError("deviation: missing tag");
    d.tag = parse_deviation(j["tag"].get<std::string>());
    if (j.contains("window"))
        d.window = window_from(j["window"]);
    else
        d.window = window_from(j);
    d.parties = get_or<std::vector<PartyId>>(j, "parties", {});
    if (j.contains("tamper")) d.tamper = parse_tamper(j["tamper"].get<std::string>());
    d.stale_mask = get_or<std::uint8_t>(j, "stale_mask", d.stale_mask);
    d.budget = get_or<unsigned>(j, "budget", d.budget);
    d.delay = get_or<unsigned>(j, "delay", d.delay);
    d.switch_round = get_or<Round>(j, "switch_round", get_or<Round>(j, "r_star", d.switch_round));
    if (j.contains("paid_fraction")) d.paid_fraction = parse_amount(exact_text(j["paid_fraction"], "paid_fraction"));
    if (j.contains("breakaway")) {
        const json& b = j["breakaway"];
        reject_unknown(b, {"start", "leader", "members", "member_scale"}, "breakaway");
        Breakaway br;
        br.start = get_or<Round>(b, "start", 1);
        br.members = get_or<std::vector<PartyId>>(b, "members", {});
        br.leader = get_or<PartyId>(b, "leader", br.members.empty() ? 0 : br.members.front());
        if (b.contains("member_scale")) br.member_scale = parse_amount(exact_text(b["member_scale"], "member_scale"));
        d.breakaway = br;
    }
    return d;
}

} // namespace

json strategy_to_json(const Strategy& s)
{
    json j;
    j["name"] = s.name;
    j["corrupted"] = std::vector<PartyId>(s.corrupted.begin(), s.corrupted.end());
    j["ordering"] = s.ordering == OrderingPolicy::adversary_first ? "adversary_first" : "canonical";
    j["includes_leader"] = s.includes_leader;
    j["delay_horizon"] = s.delay_horizon;
    j["deviations"] = json::array();
    for (const auto& d : s.deviations) j["deviations"].push_back(deviation_json(d));
    j["selective"] = json::array();
    for (const auto& w : s.selective) {
        json e = window_json(w.window);
        e["recipients"] = w.value;
        j["selective"].push_back(e);
    }
    return j;
}

Strategy strategy_from_json(const json& j)
{
    if (!j.is_object()) throw ConfigError("strategy: expected an object");
    reject_unknown(j, {"name", "corrupted", "ordering", "includes_leader", "delay_horizon", "deviations", "selective"},
                   "strategy");
    Strategy s;
    s.name = get_or<std::string>(j, "name", s.name);
    auto c = get_or<std::vector<PartyId>>(j, "corrupted", {});
    s.corrupted = std::set<PartyId>(c.begin(), c.end());
    std::string ord = get_or<std::string>(j, "ordering", "adversary_first");
    if (ord == "adversary_first")
        s.ordering = OrderingPolicy::adversary_first;
    else if (ord == "canonical")
        s.ordering = OrderingPolicy::canonical;
    else
        throw ConfigError("unknown ordering '" + ord + "'");
    s.includes_leader = get_or<bool>(j, "includes_leader", false);
    s.delay_horizon = get_or<unsigned>(j, "delay_horizon", s.delay_horizon);
    if (j.contains("deviations")) {
        if (!j["deviations"].is_array()) throw ConfigError("deviations: expected a list");
        for (const auto& d : j["deviations"]) s.deviations.push_back(deviation_from(d));
    }
    if (j.contains("selective")) {
        for (const auto& e : j["selective"]) {
            Windowed<std::vector<PartyId>> w;
            w.window = window_from(e);
            w.value = get_or<std::vector<PartyId>>(e, "recipients", {});
            s.selective.push_back(std::move(w));
        }
    }
    return s;
}

json config_to_json(const ExecutionConfig& cfg)
{
    json j;
    j["params"] = params_json(cfg.params);
    j["strategy"] = strategy_to_json(cfg.strategy);
    j["mode"] = mode_name(cfg.mode);
    j["variant"] = cfg.variant == PoolVariant::standard ? "standard" : "empty_block";
    j["leader"] = cfg.leader;
    j["activation"] = activation_name(cfg.activation);
    j["seed"] = cfg.seed;
    j["tx_lambda"] = cfg.tx_lambda;
    return j;
}

ExecutionConfig config_from_json(const json& j)
{
    if (!j.is_object()) throw ConfigError("config: expected an object");
    reject_unknown(j, {"params", "strategy", "mode", "variant", "leader", "activation", "seed", "tx_lambda"}, "config");
    ExecutionConfig cfg;
    if (j.contains("params")) cfg.params = params_from(j["params"]);
    if (j.contains("strategy")) cfg.strategy = strategy_from_json(j["strategy"]);
    std::string mode = get_or<std::string>(j, "mode", "honest_pool");
    if (mode == "honest_pool")
        cfg.mode = RunMode::honest_pool;
    else if (mode == "honest_fruit")
        cfg.mode = RunMode::honest_fruit;
    else if (mode == "strategy_run")
        cfg.mode = RunMode::strategy_run;
    else
        throw ConfigError("unknown mode '" + mode + "'");
    std::string variant = get_or<std::string>(j, "variant", "standard");
    if (variant == "standard")
        cfg.variant = PoolVariant::standard;
    else if (variant == "empty_block" || variant == "S")
        cfg.variant = PoolVariant::empty_block;
    else
        throw ConfigError("unknown variant '" + variant + "'");
    cfg.leader = get_or<PartyId>(j, "leader", 0);
    std::string act = get_or<std::string>(j, "activation", "leader_first");
    if (act == "leader_first")
        cfg.activation = Activation::leader_first;
    else if (act == "round_robin")
        cfg.activation = Activation::round_robin;
    else
        throw ConfigError("unknown activation '" + act + "'");
    cfg.seed = get_or<std::uint64_t>(j, "seed", 0);
    cfg.tx_lambda = get_or<double>(j, "tx_lambda", cfg.tx_lambda);
    return cfg;
}

} // namespace fruitpool
