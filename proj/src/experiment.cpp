// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fruitpool/experiment.hpp>

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <regex>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace fruitpool {

using nlohmann::json;

// ---------------------------------------------------------------- YAML input

namespace {

struct Subst {
    std::unordered_map<std::string, std::uint64_t> names;
};

std::string located(const std::string& origin, const YAML::Node& node, const std::string& msg)
{
    return origin + ":" + std::to_string(node.Mark().line + 1) + ": " + msg;
}

json scalar_json(const YAML::Node& node, const Subst& subst)
{
    const std::string& s = node.Scalar();
    if (node.Tag() == "!") return s; // quoted
    if (s == "~" || s == "null" || s.empty()) return nullptr;
    if (s == "true" || s == "True") return true;
    if (s == "false" || s == "False") return false;
    static const std::regex integer("^-?[0-9]+$");
    static const std::regex real("^-?([0-9]+\\.?[0-9]*|\\.[0-9]+)([eE][-+]?[0-9]+)?$");
    if (std::regex_match(s, integer)) {
        try {
            if (s[0] == '-') return std::stoll(s);
            return std::stoull(s);
        } catch (const std::exception&) {
            return s;
        }
    }
    if (std::regex_match(s, real)) return std::stod(s);
    auto it = subst.names.find(s);
    if (it != subst.names.end()) return it->second;
    return s;
}

json to_json(const YAML::Node& node, const Subst& subst)
{
    switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined: return nullptr;
    case YAML::NodeType::Scalar: return scalar_json(node, subst);
    case YAML::NodeType::Sequence: {
        json a = json::array();
        for (const auto& e : node) a.push_back(to_json(e, subst));
        return a;
    }
    case YAML::NodeType::Map: {
        json o = json::object();
        for (const auto& kv : node) o[kv.first.as<std::string>()] = to_json(kv.second, subst);
        return o;
    }
    }
    return nullptr;
}

template <typename F>
auto at_line(const std::string& origin, const YAML::Node& node, F&& fn) -> decltype(fn())
{
    try {
        return fn();
    } catch (const InvalidComposition& e) {
        throw InvalidComposition(located(origin, node, e.what()));
    } catch (const ConfigError& e) {
        throw ConfigError(located(origin, node, e.what()));
    } catch (const json::exception& e) {
        throw ConfigError(located(origin, node, e.what()));
    } catch (const YAML::Exception& e) {
        throw ConfigError(located(origin, node, e.what()));
    }
}

template <typename T>
T scalar_as(const std::string& origin, const YAML::Node& node, const char* what)
{
    return at_line(origin, node, [&] {
        if (!node.IsScalar()) throw ConfigError(std::string(what) + ": expected a scalar");
        try {
            return node.as<T>();
        } catch (const YAML::Exception&) {
            throw ConfigError(std::string(what) + ": bad value '" + node.Scalar() + "'");
        }
    });
}

void check_keys(const std::string& origin, const YAML::Node& map, std::initializer_list<const char*> keys,
                const char* where)
{
    for (const auto& kv : map) {
        const std::string k = kv.first.as<std::string>();
        bool known = false;
        for (const char* c : keys) known = known || k == c;
        if (!known) throw ConfigError(located(origin, kv.first, std::string(where) + ": unknown key '" + k + "'"));
    }
}

/** First params key that fails on its own over the defaults; the whole block if none does. */
YAML::Node offending_param(const YAML::Node& params)
{
    if (!params.IsMap()) return params;
    for (const auto& kv : params) {
        try {
            json one = json::object();
            one[kv.first.as<std::string>()] = to_json(kv.second, Subst{});
            config_from_json(json{{"params", one}}).params.validate();
        } catch (const std::exception&) {
            return kv.first;
        }
    }
    return params;
}

SuiteEntry parse_entry(const std::string& origin, const YAML::Node& node, const ExecutionConfig& base,
                       const Subst& subst)
{
    if (!node.IsMap()) throw ConfigError(located(origin, node, "suite entry: expected a mapping"));
    check_keys(origin, node,
               {"name", "corrupted", "ordering", "includes_leader", "delay_horizon", "deviations", "selective", "mode",
                "variant", "claim2"},
               "suite entry");
    SuiteEntry e;
    e.name = node["name"] ? scalar_as<std::string>(origin, node["name"], "name") : "H_C";
    const ProtocolParams& P = base.params;

    json j = json::object();
    for (const char* k : {"corrupted", "ordering", "delay_horizon", "selective"})
        if (node[k]) j[k] = to_json(node[k], subst);
    j["name"] = e.name;
    if (node["deviations"]) {
        if (!node["deviations"].IsSequence())
            throw ConfigError(located(origin, node["deviations"], "deviations: expected a list"));
        j["deviations"] = json::array();
        for (const auto& d : node["deviations"]) {
            json dj = to_json(d, subst);
            at_line(origin, d, [&] { return strategy_from_json(json{{"deviations", json::array({dj})}}); });
            j["deviations"].push_back(dj);
        }
    }
    e.strategy = at_line(origin, node, [&] { return strategy_from_json(j); });
    if (node["includes_leader"])
        e.strategy.includes_leader = scalar_as<bool>(origin, node["includes_leader"], "includes_leader");
    else
        e.strategy.includes_leader = e.strategy.corrupted.count(base.leader) > 0;

    if (node["claim2"]) {
        const YAML::Node& c = node["claim2"];
        at_line(origin, c, [&] {
            json cj = to_json(c, subst);
            if (!cj.is_object()) throw ConfigError("claim2: expected a mapping");
            Round r_star = cj.value("r_star", P.big_n / 2);
            unsigned budget = cj.value("budget", (P.n - 1) * P.q);
            Strategy s = claim2_strategy(e.strategy.corrupted, P.n, P.q, base.leader, r_star, budget);
            s.name = e.name;
            s.ordering = e.strategy.ordering;
            for (auto& d : e.strategy.deviations) s.deviations.push_back(d);
            e.strategy = std::move(s);
            return 0;
        });
    }
    if (node["mode"]) {
        json mj = {{"mode", scalar_as<std::string>(origin, node["mode"], "mode")}};
        e.mode = at_line(origin, node["mode"], [&] { return config_from_json(mj).mode; });
    }
    if (node["variant"]) {
        json vj = {{"variant", scalar_as<std::string>(origin, node["variant"], "variant")}};
        e.variant = at_line(origin, node["variant"], [&] { return config_from_json(vj).variant; });
    }
    at_line(origin, node, [&] {
        ExecutionConfig cfg = base;
        cfg.strategy = e.strategy;
        if (e.mode) cfg.mode = *e.mode;
        if (e.variant) cfg.variant = *e.variant;
        validate_config(cfg);
        return 0;
    });
    return e;
}

} // namespace

std::vector<std::uint64_t> parse_seed_list(const std::string& text)
{
    std::vector<std::uint64_t> out;
    auto range = text.find("..");
    try {
        if (range != std::string::npos) {
            std::uint64_t a = std::stoull(text.substr(0, range));
            std::uint64_t b = std::stoull(text.substr(range + 2));
            if (b < a) throw ConfigError("empty seed range '" + text + "'");
            for (std::uint64_t s = a; s <= b; ++s) out.push_back(s);
        } else {
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ','))
                if (!item.empty()) out.push_back(std::stoull(item));
        }
    } catch (const std::logic_error&) {
        throw ConfigError("bad seed list '" + text + "'");
    }
    if (out.empty()) throw ConfigError("seed list is empty");
    return out;
}

ExperimentSpec parse_experiment(const std::string& text, const std::string& origin)
{
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(origin + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    if (!root.IsMap()) throw ConfigError(origin + ":1: spec must be a mapping");
    check_keys(origin, root,
               {"params", "mode", "variant", "leader", "activation", "tx_lambda", "seeds", "suite", "baseline",
                "delta", "epsilon", "log_base", "crediting", "trim_k", "outputs"},
               "spec");

    ExperimentSpec spec;
    Subst none;
    json base = json::object();
    if (!root["params"]) throw ConfigError(origin + ":1: missing 'params'");
    base["params"] = to_json(root["params"], none);
    for (const char* k : {"mode", "variant", "leader", "activation", "tx_lambda"})
        if (root[k]) base[k] = to_json(root[k], none);
    if (!root["mode"]) base["mode"] = "strategy_run";
    const YAML::Node bad = offending_param(root["params"]);
    spec.base = at_line(origin, bad, [&] { return config_from_json(base); });
    at_line(origin, bad, [&] {
        spec.base.params.validate();
        return 0;
    });
    spec.delta = spec.base.params.delta;

    const ProtocolParams& P = spec.base.params;
    Subst subst;
    subst.names = {{"N", P.big_n}, {"N/2", P.big_n / 2}, {"q", P.q}, {"q/2", P.q / 2}, {"(n-1)q", (P.n - 1) * P.q}};

    if (root["seeds"]) {
        const YAML::Node& s = root["seeds"];
        spec.seeds = at_line(origin, s, [&] {
            std::vector<std::uint64_t> out;
            if (s.IsSequence()) {
                for (const auto& e : s) out.push_back(e.as<std::uint64_t>());
            } else if (s.IsMap()) {
                auto start = s["start"] ? s["start"].as<std::uint64_t>() : 1;
                auto count = s["count"] ? s["count"].as<std::uint64_t>() : 0;
                for (std::uint64_t i = 0; i < count; ++i) out.push_back(start + i);
            } else {
                out = parse_seed_list(s.as<std::string>());
            }
            if (out.empty()) throw ConfigError("seed list is empty");
            return out;
        });
    } else {
        throw ConfigError(origin + ":1: missing 'seeds'");
    }

    if (root["suite"]) {
        if (!root["suite"].IsSequence()) throw ConfigError(located(origin, root["suite"], "suite: expected a list"));
        for (const auto& e : root["suite"]) spec.suite.push_back(parse_entry(origin, e, spec.base, subst));
    } else {
        SuiteEntry e;
        e.name = "H_C";
        spec.suite.push_back(e);
    }
    if (root["baseline"]) spec.baseline = scalar_as<std::string>(origin, root["baseline"], "baseline");
    bool found = false;
    for (std::size_t i = 0; i < spec.suite.size(); ++i) {
        found = found || spec.suite[i].name == spec.baseline;
        for (std::size_t k = 0; k < i; ++k)
            if (spec.suite[k].name == spec.suite[i].name)
                throw ConfigError(located(origin, root["suite"][i], "duplicate suite name '" + spec.suite[i].name + "'"));
    }
    if (!found)
        throw ConfigError(located(origin, root["suite"] ? root["suite"] : root,
                                  "baseline '" + spec.baseline + "' is not in the suite"));

    if (root["delta"]) spec.delta = scalar_as<double>(origin, root["delta"], "delta");
    if (root["epsilon"]) spec.epsilon = scalar_as<double>(origin, root["epsilon"], "epsilon");
    if (root["log_base"])
        spec.log_base = at_line(origin, root["log_base"], [&] { return parse_log_base(root["log_base"].Scalar()); });
    if (root["crediting"]) {
        std::string c = scalar_as<std::string>(origin, root["crediting"], "crediting");
        if (c == "creation_round")
            spec.reward.crediting = Crediting::creation_round;
        else if (c == "ledger_inclusion")
            spec.reward.crediting = Crediting::ledger_inclusion;
        else
            throw ConfigError(located(origin, root["crediting"], "unknown crediting '" + c + "'"));
    }
    if (root["trim_k"]) spec.reward.trim_k = scalar_as<unsigned>(origin, root["trim_k"], "trim_k");
    if (root["outputs"]) {
        const YAML::Node& o = root["outputs"];
        if (!o.IsMap()) throw ConfigError(located(origin, o, "outputs: expected a mapping"));
        check_keys(origin, o, {"dir", "csv", "verdict", "transcripts"}, "outputs");
        if (o["dir"]) spec.out_dir = scalar_as<std::string>(origin, o["dir"], "outputs.dir");
        if (o["csv"]) spec.csv = scalar_as<std::string>(origin, o["csv"], "outputs.csv");
        if (o["verdict"]) spec.verdict = scalar_as<std::string>(origin, o["verdict"], "outputs.verdict");
        if (o["transcripts"]) spec.write_transcripts = scalar_as<bool>(origin, o["transcripts"], "outputs.transcripts");
    }
    return spec;
}

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

ExperimentSpec load_experiment(const std::string& path)
{
    return parse_experiment(read_file(path), path);
}

ProtocolParams load_params(const std::string& path)
{
    const std::string text = read_file(path);
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(path + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    if (!root.IsMap()) throw ConfigError(path + ":1: expected a mapping");
    const YAML::Node node = root["params"] ? root["params"] : root;
    return at_line(path, offending_param(node), [&] {
        ProtocolParams p = config_from_json(json{{"params", to_json(node, Subst{})}}).params;
        p.validate();
        return p;
    });
}

// ---------------------------------------------------------------- batch

unsigned worker_count()
{
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("FRUITPOOL_WORKERS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) return static_cast<unsigned>(std::min<long>(v, 1024));
    }
    return hw;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn, unsigned workers)
{
    if (workers == 0) workers = worker_count();
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
    std::atomic<std::size_t> next{0};
    std::exception_ptr first;
    std::mutex mu;
    auto body = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (first) return;
            }
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!first) first = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& t : pool) t.join();
    }
    if (first) std::rethrow_exception(first);
}

std::string amount_decimal(const Amount& a, int places)
{
    mpz_class scale = 1;
    for (int i = 0; i < places; ++i) scale *= 10;
    mpz_class num = abs(a.get_num()) * scale * 2 + a.get_den();
    mpz_class den = a.get_den() * 2;
    mpz_class v = num / den; // round half away from zero
    std::string digits = v.get_str();
    if (places > 0) {
        if (static_cast<int>(digits.size()) <= places) digits.insert(0, places + 1 - digits.size(), '0');
        digits.insert(digits.size() - places, ".");
    }
    if (sgn(a) < 0 && v != 0) digits.insert(0, "-");
    return digits;
}

BatchResult run_experiment(const ExperimentSpec& spec)
{
    struct Job {
        std::size_t entry;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (std::size_t e = 0; e < spec.suite.size(); ++e)
        for (auto s : spec.seeds) jobs.push_back({e, s});

    BatchResult out;
    ProtocolParams P = spec.base.params;
    out.bounds = make_bound_report(P, spec.delta, spec.log_base);
    const Real eps_prime = out.bounds.epsilon_prime;

    std::vector<RunRow> rows(jobs.size());
    if (spec.write_transcripts) std::filesystem::create_directories(std::filesystem::path(spec.out_dir) / "transcripts");
    parallel_for(jobs.size(), [&](std::size_t i) {
        const SuiteEntry& e = spec.suite[jobs[i].entry];
        ExecutionConfig cfg = spec.base;
        cfg.strategy = e.strategy;
        cfg.seed = jobs[i].seed;
        if (e.mode) cfg.mode = *e.mode;
        if (e.variant) cfg.variant = *e.variant;
        Transcript t = run_execution(cfg);
        UtilityReport u = u_min_max(t, cfg.strategy.corrupted, spec.reward);
        RunRow& r = rows[i];
        r.strategy = e.name;
        r.seed = cfg.seed;
        r.u_min = u.u_min;
        r.u_max = u.u_max;
        r.stats = measure_statistics(t);
        r.otx_respecting = is_otx_respecting(t);
        r.hash = transcript_hash(t);
        r.summary = {{"seed", cfg.seed},
                     {"strategy", e.name},
                     {"transcript_hash", r.hash},
                     {"utility", utility_json(u)},
                     {"u_min", amount_decimal(u.u_min)},
                     {"u_max", amount_decimal(u.u_max)},
                     {"fruits_mined", r.stats.fruits_mined},
                     {"block_rounds", r.stats.block_rounds},
                     {"payment_rounds", r.stats.payment_rounds},
                     {"last_block_round", r.stats.last_block_round},
                     {"otx_respecting", r.otx_respecting},
                     {"exits", t.exits.size()}};
        if (spec.write_transcripts) {
            auto bytes = serialize_transcript(t);
            auto path = std::filesystem::path(spec.out_dir) / "transcripts" /
                        (e.name + "_" + std::to_string(cfg.seed) + ".fpt");
            std::ofstream f(path, std::ios::binary);
            f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        }
    });

    std::unordered_map<std::uint64_t, Amount> baseline;
    for (const auto& r : rows)
        if (r.strategy == spec.baseline) baseline[r.seed] = r.u_min;
    for (auto& r : rows) {
        r.baseline_u_min = baseline.at(r.seed);
        r.verdict = evp_verdict(static_cast<Real>(amount_double(r.u_max)), static_cast<Real>(amount_double(r.baseline_u_min)),
                                spec.epsilon, eps_prime);
        r.summary["baseline_u_min"] = amount_decimal(r.baseline_u_min);
        r.summary["verdict"] = r.verdict;
        out.all_pass = out.all_pass && r.verdict;
    }
    std::sort(rows.begin(), rows.end(), [](const RunRow& a, const RunRow& b) {
        return a.strategy != b.strategy ? a.strategy < b.strategy : a.seed < b.seed;
    });
    out.rows = std::move(rows);
    return out;
}

std::string batch_csv(const BatchResult& r)
{
    std::ostringstream os;
    os << "strategy,seed,u_min,u_max,fruits_mined,block_rounds,payment_rounds,last_block_round,otx_respecting,"
          "baseline_u_min,epsilon_prime,verdict,transcript_hash\n";
    char eps[64];
    std::snprintf(eps, sizeof eps, "%.6Lf", r.bounds.epsilon_prime);
    for (const auto& row : r.rows) {
        os << row.strategy << ',' << row.seed << ',' << amount_decimal(row.u_min) << ',' << amount_decimal(row.u_max)
           << ',' << row.stats.fruits_mined << ',' << row.stats.block_rounds << ',' << row.stats.payment_rounds << ','
           << row.stats.last_block_round << ',' << (row.otx_respecting ? "true" : "false") << ','
           << amount_decimal(row.baseline_u_min) << ',' << eps << ',' << (row.verdict ? "true" : "false") << ','
           << row.hash << '\n';
    }
    return os.str();
}

json verdict_json(const ExperimentSpec& spec, const BatchResult& r)
{
    json j;
    j["all_pass"] = r.all_pass;
    j["baseline"] = spec.baseline;
    j["epsilon"] = spec.epsilon;
    j["bounds"] = bound_report_json(r.bounds);
    j["runs"] = r.rows.size();
    json per = json::object();
    for (const auto& row : r.rows) {
        json& s = per[row.strategy];
        if (s.is_null()) s = {{"runs", 0}, {"failures", 0}, {"max_gap", nullptr}};
        s["runs"] = s["runs"].get<int>() + 1;
        if (!row.verdict) s["failures"] = s["failures"].get<int>() + 1;
        double gap = amount_double(row.u_max - row.baseline_u_min);
        if (s["max_gap"].is_null() || gap > s["max_gap"].get<double>()) s["max_gap"] = gap;
    }
    j["strategies"] = per;
    return j;
}

// ---------------------------------------------------------------- replay

ReplayReport validate_transcript(const Transcript& t)
{
    ReplayReport rep;
    auto fail = [&](const std::string& s) {
        if (rep.violations.size() < 100) rep.violations.push_back(s);
    };
    const ProtocolParams& P = t.config.params;
    if (t.finals.size() != P.n || t.initial_roles.size() != P.n) {
        fail("party count does not match n");
        return rep;
    }
    if (!respects_quotas(t)) fail("per-round oracle quota exceeded");

    std::vector<std::array<std::uint64_t, kOracleCount>> counts(P.n);
    Round last = 0;
    for (const auto& q : t.queries) {
        if (q.party >= P.n || q.round < 1 || q.round > t.rounds) {
            fail("query outside the execution");
            continue;
        }
        if (q.round < last) fail("queries out of round order");
        last = q.round;
        ++counts[q.party][static_cast<std::size_t>(q.tag)];
    }
    for (const auto& f : t.finals) {
        if (f.id >= P.n) {
            fail("final state for unknown party");
            continue;
        }
        if (f.counts != counts[f.id]) fail("cost meter counts differ for party " + std::to_string(f.id));
        Amount cost = 0;
        for (std::size_t k = 0; k < kOracleCount; ++k)
            cost += Amount(static_cast<unsigned long>(counts[f.id][k])) * unit_cost(P.costs, static_cast<OracleTag>(k));
        if (cost != f.cost) fail("cost total differs for party " + std::to_string(f.id));
    }

    for (const auto& pc : t.payments) {
        PaymentComputation ref = compute_payment(pc.rew, pc.cost, pc.pool_size);
        if (ref.w_leader != pc.w_leader || ref.w_member != pc.w_member)
            fail("payment at round " + std::to_string(pc.round) + " does not follow the sharing rule");
        if (pc.w_leader + Amount(pc.pool_size - 1) * pc.w_member != pc.rew)
            fail("payment at round " + std::to_string(pc.round) + " does not conserve rew");
    }

    RandomOracle ro(t.config.seed, P.kappa_sim);
    ValidityContext ctx = ValidityContext::make(ro, P);
    for (const auto& f : t.finals)
        if (f.view.blocks.empty() || !is_chain_valid(f.view, ctx))
            fail("final chain of party " + std::to_string(f.id) + " is not valid");

    std::unordered_map<std::uint64_t, const DiffusalRecord*> by_arrival;
    for (const auto& d : t.diffusals) by_arrival[d.arrival] = &d;
    for (const auto& d : t.deliveries) {
        for (auto a : d.arrivals) {
            auto it = by_arrival.find(a);
            if (it == by_arrival.end() || it->second->round + 1 != d.round) {
                fail("delivery of unknown or late message " + std::to_string(a));
                continue;
            }
            const auto& rc = it->second->recipients;
            if (rc && std::find(rc->begin(), rc->end(), d.party) == rc->end())
                fail("message " + std::to_string(a) + " delivered to a non-recipient");
        }
    }

    // Synchronous convergence: honest views agree up to the last kappa blocks.
    if (t.config.strategy.deviations.empty() && t.config.strategy.selective.empty()) {
        std::vector<const Chain*> views;
        for (const auto& f : t.finals)
            if (!f.corrupted) views.push_back(&f.view);
        if (!views.empty()) {
            std::size_t min_len = views.front()->length();
            for (auto* v : views) min_len = std::min(min_len, v->length());
            std::size_t must = min_len > P.kappa_sim ? min_len - P.kappa_sim : 0;
            for (std::size_t i = 0; i < must; ++i)
                for (auto* v : views)
                    if (v->at(i).ref() != views.front()->at(i).ref()) {
                        fail("honest views disagree at height " + std::to_string(i));
                        i = must;
                        break;
                    }
        }
    }
    return rep;
}

// ---------------------------------------------------------------- commands

namespace {

void write_text(const std::filesystem::path& p, const std::string& text)
{
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + p.string() + "'");
    f << text;
}

} // namespace

int cmd_run(const std::string& spec_path, const std::optional<std::string>& seeds,
            const std::optional<std::string>& out_dir, const std::optional<double>& delta,
            const std::optional<std::string>& log_base)
{
    ExperimentSpec spec;
    try {
        spec = load_experiment(spec_path);
        if (seeds) spec.seeds = parse_seed_list(*seeds);
        if (out_dir) spec.out_dir = *out_dir;
        if (delta) spec.delta = *delta;
        if (log_base) spec.log_base = parse_log_base(*log_base);
        std::filesystem::create_directories(std::filesystem::path(spec.out_dir) / "runs");
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }

    BatchResult result;
    try {
        result = run_experiment(spec);
    } catch (const ProtocolViolation& e) {
        std::cerr << "protocol violation: " << e.what() << '\n';
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }

    const std::filesystem::path dir(spec.out_dir);
    try {
        for (const auto& row : result.rows)
            write_text(dir / "runs" / (row.strategy + "_" + std::to_string(row.seed) + ".json"), row.summary.dump(2) + "\n");
        write_text(dir / spec.csv, batch_csv(result));
        write_text(dir / spec.verdict, verdict_json(spec, result).dump(2) + "\n");
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }
    std::size_t failures = 0;
    for (const auto& row : result.rows) failures += row.verdict ? 0 : 1;
    std::cout << result.rows.size() << " runs, " << failures << " EVP failures, epsilon' = "
              << static_cast<double>(result.bounds.epsilon_prime) << '\n';
    return result.all_pass ? 0 : 3;
}

int cmd_bounds(const std::string& params_path, const std::optional<double>& delta,
               const std::optional<std::string>& log_base)
{
    try {
        ProtocolParams p = load_params(params_path);
        LogBase base = log_base ? parse_log_base(*log_base) : LogBase::two;
        BoundReport r = make_bound_report(p, delta ? *delta : p.delta, base);
        std::cout << bound_report_json(r).dump(2) << '\n' << bound_report_table(r);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }
}

int cmd_replay(const std::string& transcript_path, bool rerun)
{
    std::vector<std::uint8_t> bytes;
    {
        std::ifstream f(transcript_path, std::ios::binary);
        if (!f) {
            std::cerr << "cannot open '" << transcript_path << "'\n";
            return 1;
        }
        bytes.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
    }
    Transcript t;
    try {
        t = deserialize_transcript(bytes);
    } catch (const std::exception& e) {
        std::cout << "violation: " << e.what() << '\n';
        return 2;
    }
    ReplayReport rep = validate_transcript(t);
    if (rerun) {
        try {
            Transcript again = run_execution(t.config);
            if (transcript_hash(again) != transcript_hash(t))
                rep.violations.push_back("re-execution does not reproduce the transcript");
        } catch (const std::exception& e) {
            rep.violations.push_back(std::string("re-execution failed: ") + e.what());
        }
    }
    for (const auto& v : rep.violations) std::cout << "violation: " << v << '\n';
    if (!rep.ok()) return 2;
    std::cout << "ok " << transcript_hash(t) << '\n';
    return 0;
}

} // namespace fruitpool
