// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

// Reference values below were computed once with 40-digit arithmetic and frozen.

#include "scenarios.hpp"

#include <fruitpool/analysis.hpp>

#include <doctest.h>

#include <cmath>

using namespace fruitpool;
using namespace fruitpool::testing;

namespace {

constexpr Real kRel = 1e-12L;

void near(Real got, Real want, const char* what)
{
    INFO(what << ": got " << static_cast<double>(got) << " want " << static_cast<double>(want));
    CHECK(std::fabs(got - want) <= kRel * std::max<Real>(1, std::fabs(want)));
}

ProtocolParams set_b()
{
    ProtocolParams p;
    p.kappa_sim = 32;
    p.n = 7;
    p.q = 4;
    p.big_n = 500;
    p.p_f = Probability{3, 100};
    p.p_b = Probability{1, 50};
    p.reward_f = 3;
    p.costs = CostSchedule{Amount(2), Amount(1, 2), Amount(1, 3), Amount(1, 100), Amount(1, 50)};
    return p;
}

struct Frozen {
    Real b1, b2, case1, case2, case3, eps, P, dmin;
    Real r_star, delta;
    Real Q[3];
    Real f[3], g[3], h[3];
};

void check_frozen(const BoundInputs& in, const Frozen& z)
{
    near(claim1_lower_bound(in), z.b1, "claim1 bound");
    near(claim2_upper_bound(in, z.delta), z.b2, "claim2 bound");
    near(case1_bound(in), z.case1, "case 1");
    near(case2_bound(in), z.case2, "case 2");
    near(case3_bound(in, z.delta), z.case3, "case 3");
    near(theorem_epsilon_prime(in, z.delta), z.eps, "epsilon'");
    near(in.block_round_prob(), z.P, "block round probability");
    near(delta_min(in), z.dmin, "delta_min");
    for (int i = 0; i < 3; ++i) {
        near(case_function(in, CaseFunction::f, z.r_star, z.Q[i], z.delta), z.f[i], "f");
        near(case_function(in, CaseFunction::g, z.r_star, z.Q[i], z.delta), z.g[i], "g");
        near(case_function(in, CaseFunction::h, z.r_star, z.Q[i], z.delta), z.h[i], "h");
    }
}

} // namespace

TEST_CASE("frozen bounds at the acceptance parameters")
{
    Frozen z{11296.51986067498351707L,
             23337.89791067510306392L,
             21290.24791067510306L,
             21448.34791067510306L,
             20617.89791067510306L,
             12041.37805000011954684L,
             0.09525318199596423460L,
             0.4L,
             1000,
             0.5L,
             {0, 7, 40},
             {33151.56872613432741L, 58300.33736874776001L, 176860.6479106751031L},
             {1563.188726134327413L, 32267.59136874776001L, 177018.7479106751031L},
             {4283.018726134327413L, 7141.302368747760007L, 20617.89791067510306L}};
    check_frozen(BoundInputs::from(acceptance_params(), LogBase::two), z);
}

TEST_CASE("frozen bounds, natural log, second parameter set")
{
    Frozen z{56.09463614733193161L,
             1422.686900503494645L,
             1532.385937747790011L,
             1601.252670283469181L,
             557.8714754507320801L,
             1366.592264356162713L,
             0.4320238240499404609L,
             0.4505867890374212511L,
             13,
             0.25L,
             {0, 5, 24},
             {-289.8299664170824505L, 93.29315297047691837L, 1600.472730574976243L},
             {-407.8872221925324563L, 6814.768232658163538L, 34312.17068502258204L},
             {-220.7871092742253076L, -69.25651327564537737L, 557.8714754507320801L}};
    check_frozen(BoundInputs::from(set_b(), LogBase::e), z);
}

TEST_CASE("epsilon' equals the claim bounds difference")
{
    for (auto [p, base, delta] : {std::tuple{acceptance_params(), LogBase::two, 0.5L},
                                  std::tuple{set_b(), LogBase::e, 0.25L}}) {
        BoundInputs in = BoundInputs::from(p, base);
        Real lhs = theorem_epsilon_prime(in, delta);
        Real rhs = claim2_upper_bound(in, delta) - claim1_lower_bound(in);
        CHECK(std::fabs(lhs - rhs) <= 1e-9L * std::fabs(rhs));
    }
}

TEST_CASE("chernoff helpers")
{
    near(chernoff_upper(300, 0.1L), 0.36787944117144232160L, "upper");
    near(chernoff_lower(200, 0.1L), 0.36787944117144232160L, "lower");
    near(chernoff_upper(1000, 0.2L), 1.6195967923126107e-6L, "upper small");
    CHECK_THROWS_AS(chernoff_upper(0, 0.5L), DomainError);
    CHECK_THROWS_AS(chernoff_upper(10, 0), DomainError);
    CHECK_THROWS_AS(chernoff_lower(10, 1), DomainError);
    CHECK_THROWS_AS(chernoff_lower(-1, 0.5L), DomainError);
}

TEST_CASE("conditions at the acceptance parameters")
{
    BoundReport r = make_bound_report(acceptance_params(), 0.5, LogBase::two);
    CHECK(r.claim1.degenerate);
    CHECK(r.claim1.holds_desk);
    CHECK_FALSE(r.block_rate);
    CHECK(r.p_f_below_half);
    CHECK(r.delta_in_range);
    CHECK(r.epsilon_nonnegative);
    CHECK(std::fabs(r.residual) <= 1e-9L * r.epsilon_prime);
    CHECK(bound_report_json(r).contains("epsilon_prime"));
    CHECK_FALSE(bound_report_table(r).empty());

    BoundInputs in = BoundInputs::from(acceptance_params());
    CHECK(block_rate_flag(in, Real(0.05)));
}

TEST_CASE("evp verdict arithmetic")
{
    CHECK(evp_verdict(10, 10, 0, 0));
    CHECK(evp_verdict(11, 10, 0, 1));
    CHECK_FALSE(evp_verdict(11.5L, 10, 0, 1));
    CHECK(evp_verdict(11.5L, 10, 0.1L, 0.5L));
    CHECK(evp_verdict(-9, -10, 0.1L, 0));
}

TEST_CASE("log base parsing")
{
    CHECK(parse_log_base("2") == LogBase::two);
    CHECK(parse_log_base("e") == LogBase::e);
    CHECK(parse_log_base("ln") == LogBase::e);
    CHECK_THROWS_AS(parse_log_base("10"), ConfigError);
}
