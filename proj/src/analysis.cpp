// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <fruitpool/analysis.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace fruitpool {

namespace {

Real to_real(const Amount& a)
{
    // Exact while numerator and denominator stay below 2^53.
    return static_cast<Real>(a.get_num().get_d()) / static_cast<Real>(a.get_den().get_d());
}

Real to_real(const Probability& p)
{
    return static_cast<Real>(p.num) / static_cast<Real>(p.den);
}

constexpr Real kInf = std::numeric_limits<Real>::infinity();

} // namespace

const char* log_base_name(LogBase b)
{
    return b == LogBase::two ? "2" : "e";
}

LogBase parse_log_base(const std::string& s)
{
    if (s == "2" || s == "two") return LogBase::two;
    if (s == "e" || s == "natural" || s == "ln") return LogBase::e;
    throw ConfigError("log base must be 2 or e, got '" + s + "'");
}

Real chernoff_upper(Real mean, Real delta)
{
    if (!(mean > 0) || !(delta > 0) || !(delta < 1))
        throw DomainError("chernoff_upper needs mean > 0 and 0 < delta < 1");
    return std::exp(-delta * delta * mean / 3);
}

Real chernoff_lower(Real mean, Real delta)
{
    if (!(mean > 0) || !(delta > 0) || !(delta < 1))
        throw DomainError("chernoff_lower needs mean > 0 and 0 < delta < 1");
    return std::exp(-delta * delta * mean / 2);
}

BoundInputs BoundInputs::from(const ProtocolParams& p, LogBase base)
{
    BoundInputs in;
    in.n = p.n;
    in.q = p.q;
    in.N = p.big_n;
    in.p_f = to_real(p.p_f);
    in.p_b = to_real(p.p_b);
    in.R_f = to_real(p.reward_f);
    in.C_lc = to_real(p.costs.lc);
    in.C_fs = to_real(p.costs.fs);
    in.C_tx = to_real(p.costs.tx);
    in.C_ro = to_real(p.costs.ro);
    in.C_ltx = to_real(p.costs.ltx);
    const Real k = p.kappa_sim;
    in.L = base == LogBase::two ? std::log2(k) : std::log(k);
    return in;
}

Real BoundInputs::block_round_prob() const
{
    return -std::expm1(n * q * std::log1p(-p_b));
}

ConditionReport profitability_condition(const BoundInputs& in, Regime regime)
{
    const Real K = in.C_lc + in.C_fs + in.C_tx;
    ConditionReport r;
    r.lhs = in.p_f * in.R_f;
    Real factor = 1;
    Real scale = 1;
    switch (regime) {
    case Regime::claim1:
        factor = 1 - in.L / std::sqrt(in.n);
        scale = in.n * in.q;
        break;
    case Regime::claim2:
    case Regime::theorem:
        factor = 1 - in.L / std::sqrt(std::sqrt(in.n));
        scale = std::sqrt(in.n) * in.q;
        break;
    }
    r.degenerate = !(factor > 0);
    auto ratio = [&](Real f) {
        if (K == 0) return Real(0);
        if (f * scale == 0) return kInf;
        return K / (f * scale);
    };
    Real literal = ratio(factor);
    Real desk = ratio(1);
    Real extra = 0;
    if (regime == Regime::claim2) {
        Real second = in.n > 1 ? 3 * (K / ((in.n - 1) * in.q) + in.C_ro) : kInf;
        literal = std::max(literal, second);
        desk = std::max(desk, second);
    } else if (regime == Regime::theorem) {
        extra = in.C_ro;
    }
    r.rhs = literal + extra;
    r.rhs_desk = desk + extra;
    if (regime == Regime::claim1) {
        r.holds_desk = r.lhs >= r.rhs_desk;
        r.holds = r.degenerate ? r.holds_desk : r.lhs >= r.rhs;
    } else {
        r.holds_desk = r.lhs > r.rhs_desk;
        r.holds = r.degenerate ? r.holds_desk : r.lhs > r.rhs;
    }
    return r;
}

bool block_rate_flag(const BoundInputs& in, Real c)
{
    return in.p_b >= c / (in.n * in.q);
}

Real delta_min(const BoundInputs& in)
{
    return in.L / std::sqrt(std::sqrt(in.N * in.n));
}

namespace {

// Cost terms shared by the three case bounds and the final bound.
Real upper_cost_tail(const BoundInputs& in)
{
    const Real m = (in.n - 1) / in.n;
    return m * (1 - in.L / std::sqrt(in.N)) * (in.N - 1) * in.block_round_prob() * in.C_lc +
           m * in.N * (in.C_fs + in.C_tx) + in.N * (in.n - 1) * in.q * in.C_ro;
}

} // namespace

Real claim1_lower_bound(const BoundInputs& in)
{
    const Real m = (in.n - 1) / in.n;
    const Real L2 = in.L * in.L;
    return (1 - in.L / std::sqrt(in.N * in.n)) * (in.N - L2) * (in.n - 1) * in.q * in.p_f * in.R_f -
           m * (1 + in.L / std::sqrt(in.N)) * in.N * in.block_round_prob() * (in.C_lc + in.n * in.C_ltx) -
           (m * in.N + L2 / in.n) * (in.C_fs + in.C_tx) - in.N * (in.n - 1) * in.q * in.C_ro;
}

Real claim2_upper_bound(const BoundInputs& in, Real delta)
{
    const Real L2 = in.L * in.L;
    return (1 + delta) * (in.N - 1) * (in.n - 1) * in.q * in.p_f * in.R_f + L2 * (in.n - 1) * in.q * in.R_f -
           upper_cost_tail(in);
}

Real case1_bound(const BoundInputs& in)
{
    const Real L2 = in.L * in.L;
    const Real up = 1 + delta_min(in);
    return up * (in.N - L2) * (in.n - 1) * in.q * in.p_f * in.R_f + (L2 - 1) * (in.n - 1) * in.q * in.R_f -
           upper_cost_tail(in);
}

Real case2_bound(const BoundInputs& in)
{
    const Real L2 = in.L * in.L;
    const Real up = 1 + delta_min(in);
    return up * (in.N - L2 - 1) * (in.n - 1) * in.q * in.p_f * in.R_f + L2 * (in.n - 1) * in.q * in.R_f -
           upper_cost_tail(in);
}

Real case3_bound(const BoundInputs& in, Real delta)
{
    return (1 + delta) * (in.N - 1) * (in.n - 1) * in.q * in.p_f * in.R_f - upper_cost_tail(in);
}

Real CaseCoefficients::at(Real Q) const
{
    return a * std::pow(x, Q) + b * Q + c;
}

CaseCoefficients case_coefficients(const BoundInputs& in, CaseFunction fn, Real r_star, Real delta)
{
    const Real m = (in.n - 1) / in.n;
    const Real up = 1 + delta_min(in);
    const Real lc_term = m * (1 - in.L / std::sqrt(in.N)) * (in.N - 1) * in.C_lc;
    const Real fixed = -lc_term - m * in.N * (in.C_fs + in.C_tx);
    const Real pfR = in.p_f * in.R_f;
    CaseCoefficients k;
    k.x = 1 - in.p_b;
    k.a = lc_term * std::pow(k.x, in.q);
    switch (fn) {
    case CaseFunction::f:
        k.b = up * (in.N - r_star) * pfR + m * (r_star - 1) * in.R_f - in.N * in.C_ro;
        k.c = m * (r_star - 1) * in.q * in.R_f + fixed;
        break;
    case CaseFunction::g:
        k.b = m * up * (r_star - 1) * pfR + (in.N - r_star) * in.R_f - in.N * in.C_ro;
        k.c = m * up * (r_star - 1) * in.q * pfR + fixed;
        break;
    case CaseFunction::h:
        k.b = (1 + delta) * m * (in.N - 1) * pfR - in.N * in.C_ro;
        k.c = (1 + delta) * m * (in.N - 1) * in.q * pfR + fixed;
        break;
    }
    return k;
}

Real case_function(const BoundInputs& in, CaseFunction fn, Real r_star, Real Q, Real delta)
{
    return case_coefficients(in, fn, r_star, delta).at(Q);
}

Real theorem_epsilon_prime(const BoundInputs& in, Real delta)
{
    const Real L = in.L;
    const Real L2 = L * L;
    const Real sNn = std::sqrt(in.N * in.n);
    const Real sN = std::sqrt(in.N);
    const Real P = in.block_round_prob();
    const Real t1 = ((L / sNn + delta) * in.N + L2 * (1 + 1 / in.p_f) - (L2 * L / sNn + 1 + delta)) * (in.n - 1) *
                    in.q * in.p_f * in.R_f;
    const Real t2 = (in.n - 1) / in.n * (2 * L * sN + 1 - L / sN) * P * in.C_lc;
    const Real t3 = (1 + L / sN) * in.N * P * (in.n - 1) * in.C_ltx;
    const Real t4 = L2 / in.n * (in.C_fs + in.C_tx);
    return t1 + t2 + t3 + t4;
}

bool evp_verdict(Real u_max, Real u_min, Real epsilon, Real epsilon_prime)
{
    return u_max <= u_min + epsilon * std::fabs(u_min) + epsilon_prime;
}

BoundReport make_bound_report(const ProtocolParams& p, Real delta, LogBase base, Real block_rate_c)
{
    const BoundInputs in = BoundInputs::from(p, base);
    BoundReport r;
    r.base = base;
    r.delta_used = delta;
    r.claim1_B = claim1_lower_bound(in);
    r.claim2_B = claim2_upper_bound(in, delta);
    r.epsilon_prime = theorem_epsilon_prime(in, delta);
    r.residual = r.epsilon_prime + r.claim1_B - r.claim2_B;
    r.claim1 = profitability_condition(in, Regime::claim1);
    r.claim2 = profitability_condition(in, Regime::claim2);
    r.theorem_i = profitability_condition(in, Regime::theorem);
    r.block_rate = block_rate_flag(in, block_rate_c);
    r.p_f_below_half = in.p_f < 0.5L;
    r.delta_in_range = delta >= delta_min(in) && delta < 1;
    r.epsilon_nonnegative = r.epsilon_prime >= 0;
    return r;
}

namespace {

nlohmann::json condition_json(const ConditionReport& c)
{
    return {{"holds", c.holds},
            {"degenerate", c.degenerate},
            {"holds_desk", c.holds_desk},
            {"lhs", static_cast<double>(c.lhs)},
            {"rhs", static_cast<double>(c.rhs)},
            {"rhs_desk", static_cast<double>(c.rhs_desk)}};
}

} // namespace

nlohmann::json bound_report_json(const BoundReport& r)
{
    nlohmann::json j;
    j["log_base"] = log_base_name(r.base);
    j["delta_used"] = static_cast<double>(r.delta_used);
    j["claim1_B"] = static_cast<double>(r.claim1_B);
    j["claim2_B"] = static_cast<double>(r.claim2_B);
    j["epsilon_prime"] = static_cast<double>(r.epsilon_prime);
    j["residual"] = static_cast<double>(r.residual);
    j["conditions"] = {{"claim1", condition_json(r.claim1)},
                       {"claim2", condition_json(r.claim2)},
                       {"theorem_i", condition_json(r.theorem_i)},
                       {"theorem_ii_block_rate", r.block_rate},
                       {"theorem_iii_p_f_below_half", r.p_f_below_half},
                       {"delta_in_range", r.delta_in_range},
                       {"epsilon_nonnegative", r.epsilon_nonnegative}};
    return j;
}

std::string bound_report_table(const BoundReport& r)
{
    std::string out;
    char line[160];
    auto num = [&](const char* k, Real v) {
        std::snprintf(line, sizeof line, "%-28s %22.10Lg\n", k, v);
        out += line;
    };
    auto flag = [&](const char* k, bool v) {
        std::snprintf(line, sizeof line, "%-28s %22s\n", k, v ? "true" : "false");
        out += line;
    };
    std::snprintf(line, sizeof line, "%-28s %22s\n", "log base", log_base_name(r.base));
    out += line;
    num("delta", r.delta_used);
    num("claim1_B", r.claim1_B);
    num("claim2_B", r.claim2_B);
    num("epsilon_prime", r.epsilon_prime);
    num("residual", r.residual);
    flag("claim1 condition", r.claim1.holds);
    flag("claim1 degenerate", r.claim1.degenerate);
    flag("claim2 condition", r.claim2.holds);
    flag("claim2 degenerate", r.claim2.degenerate);
    flag("theorem (i)", r.theorem_i.holds);
    flag("theorem (ii) p_b >= c/(nq)", r.block_rate);
    flag("theorem (iii) p_f < 1/2", r.p_f_below_half);
    flag("delta in range", r.delta_in_range);
    flag("epsilon_prime >= 0", r.epsilon_nonnegative);
    return out;
}

} // namespace fruitpool
