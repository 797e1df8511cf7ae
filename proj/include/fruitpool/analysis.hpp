// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef FRUITPOOL_ANALYSIS_HPP
#define FRUITPOOL_ANALYSIS_HPP

#include <fruitpool/types.hpp>

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace fruitpool {

using Real = long double;

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

enum class LogBase : std::uint8_t { two = 0, e = 1 };
const char* log_base_name(LogBase b);
/** "2" or "e". */
LogBase parse_log_base(const std::string& s);

/** exp(-delta^2 mean / 3); mean > 0 and 0 < delta < 1. */
Real chernoff_upper(Real mean, Real delta);
/** exp(-delta^2 mean / 2). */
Real chernoff_lower(Real mean, Real delta);

/** Parameters of the bound formulas as extended-precision reals. */
struct BoundInputs {
    Real n = 0, q = 0, N = 0, p_f = 0, p_b = 0, R_f = 0;
    Real C_lc = 0, C_fs = 0, C_tx = 0, C_ro = 0, C_ltx = 0;
    /** log kappa in the chosen base. */
    Real L = 0;

    static BoundInputs from(const ProtocolParams& p, LogBase base = LogBase::two);
    /** 1 - (1 - p_b)^{nq}. */
    Real block_round_prob() const;
};

enum class Regime : std::uint8_t { claim1 = 0, claim2 = 1, theorem = 2 };

struct ConditionReport {
    bool holds = false;
    /** A (1 - log kappa / n^c) factor is not positive, so the literal form says nothing. */
    bool degenerate = false;
    /** Same inequality with the non-positive factor dropped. */
    bool holds_desk = false;
    Real lhs = 0;
    Real rhs = 0;
    Real rhs_desk = 0;
};

/** The regime's inequality on p_f R_f; inclusive for claim1, strict otherwise. */
ConditionReport profitability_condition(const BoundInputs& in, Regime regime);

/** p_b >= c / (nq). */
bool block_rate_flag(const BoundInputs& in, Real c = 1);

/** Lower end of the admissible delta range, log kappa / (Nn)^{1/4}. */
Real delta_min(const BoundInputs& in);

Real claim1_lower_bound(const BoundInputs& in);
Real claim2_upper_bound(const BoundInputs& in, Real delta);
Real case1_bound(const BoundInputs& in);
Real case2_bound(const BoundInputs& in);
Real case3_bound(const BoundInputs& in, Real delta);

enum class CaseFunction : std::uint8_t { f = 0, g = 1, h = 2 };

struct CaseCoefficients {
    Real a = 0, b = 0, c = 0, x = 0;
    Real at(Real Q) const;
};

/** Coefficients of a x^Q + b Q + c; delta is used by h only. */
CaseCoefficients case_coefficients(const BoundInputs& in, CaseFunction fn, Real r_star, Real delta = 0);
Real case_function(const BoundInputs& in, CaseFunction fn, Real r_star, Real Q, Real delta = 0);

/** The theorem's four-term additive factor. */
Real theorem_epsilon_prime(const BoundInputs& in, Real delta);

/** u_max <= u_min + epsilon |u_min| + epsilon_prime. */
bool evp_verdict(Real u_max, Real u_min, Real epsilon, Real epsilon_prime);

struct BoundReport {
    LogBase base = LogBase::two;
    Real delta_used = 0;
    Real claim1_B = 0;
    Real claim2_B = 0;
    Real epsilon_prime = 0;
    /** epsilon' + claim1_B - claim2_B. */
    Real residual = 0;
    ConditionReport claim1;
    ConditionReport claim2;
    ConditionReport theorem_i;
    bool block_rate = false;
    bool p_f_below_half = false;
    bool delta_in_range = false;
    bool epsilon_nonnegative = false;
};

BoundReport make_bound_report(const ProtocolParams& p, Real delta, LogBase base = LogBase::two, Real block_rate_c = 1);
nlohmann::json bound_report_json(const BoundReport& r);
std::string bound_report_table(const BoundReport& r);

} // namespace fruitpool

#endif // FRUITPOOL_ANALYSIS_HPP
