#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "bgc/synthesis.hpp"
#include "support/oracles.hpp"

namespace {

using namespace bgc;

BooleanGame fixture(const std::string& name) {
    std::ifstream in(std::string(BGC_SOURCE_DIR) + "/fixtures/" + name);
    return parse_game(in);
}

TEST(Synthesis, B2AContractibility) {
    BooleanGame g = fixture("b2.game");
    Formula phi = parse_formula("p2", g.variables());
    auto cert = decide_a_contractibility(g, phi);
    ASSERT_TRUE(cert.answer);
    ASSERT_TRUE(cert.contract);
    EXPECT_TRUE(cert.verified);
    Observation o0 = parse_observation(g, "p1=0");
    Observation o1 = parse_observation(g, "p1=1");
    // Agent 1 must be paid more than its cost gap of 9 for raising p1.
    EXPECT_GT(cert.contract->payment(0, o1) - cert.contract->payment(0, o0), 9);
    auto ne = nash_equilibria(induced_game(g, *cert.contract));
    ASSERT_FALSE(ne.empty());
    for (Valuation v : ne) {
        EXPECT_TRUE(g.satisfies(v, phi));
    }
}

TEST(Synthesis, B1UniversalFailsExistentialHolds) {
    BooleanGame g = fixture("b1.game");
    Formula phi = parse_formula("p2", g.variables());
    EXPECT_TRUE(decide_e_contractibility(g, phi).answer);
    // (0,0) and (0,1) share their observation and both stay equilibria.
    EXPECT_FALSE(decide_a_contractibility(g, phi).answer);
}

TEST(Synthesis, InduceContractPaysAboveMaxCost) {
    BooleanGame g = fixture("b2.game");
    Valuation v = parse_valuation(g, "p1=1,p2=1");
    auto k = induce_contract(g, v);
    ASSERT_TRUE(k);
    EXPECT_EQ(k->payment(0, g.observe(v)), g.c_star(0) + 1);
    EXPECT_EQ(k->payment(1, g.observe(v)), g.c_star(1) + 1);
    EXPECT_TRUE(verify_induces(g, *k, v));
    EXPECT_FALSE(induce_contract(g, parse_valuation(g, "p1=1,p2=0")));
}

TEST(Synthesis, EliminationPreconditions) {
    BooleanGame g = fixture("fig2.game");
    EXPECT_THROW(decide_eliminability(g, {}), PreconditionError);
    // Not an initial equilibrium.
    Valuation bad = parse_valuation(g, "p1=0,p2=0,p3=0");
    ASSERT_FALSE(is_initial_equilibrium(g, bad));
    EXPECT_THROW(decide_eliminability(g, {bad}), PreconditionError);
}

TEST(Synthesis, SystemBudgetIsEnforced) {
    BooleanGame g = fixture("b1.game");
    Formula phi = parse_formula("p2", g.variables());
    SynthesisOptions tight;
    tight.max_systems = 1;
    EXPECT_THROW(decide_a_contractibility(g, phi, tight), CapExceeded);
}

TEST(Synthesis, DisjunctiveSolverRespectsEveryClause) {
    // x1 - x0 > 2 or x0 - x1 > 2, and x1 - x0 > -1.
    Clause c;
    c.options.push_back(payment_difference(0, 1, 0, 2, true));
    c.options.push_back(payment_difference(0, 0, 1, 2, true));
    std::size_t solved = 0;
    auto p = detail::solve_disjunctive({payment_difference(0, 1, 0, -1, true)}, {c}, solved, 100);
    ASSERT_TRUE(p);
    const PaymentVar x0{0, 0};
    const PaymentVar x1{0, 1};
    EXPECT_GT(p->at(x1) - p->at(x0), 2);
    EXPECT_GE(solved, 1U);
}

TEST(Synthesis, InducibilityAgreesWithFamilyOracle) {
    std::mt19937_64 rng(61);
    for (int k = 0; k < 100; ++k) {
        BooleanGame g = oracle::random_game(rng);
        for (std::uint32_t b = 0; b < g.profile_count(); ++b) {
            Valuation v = g.valuation(b);
            auto cert = decide_inducibility(g, v);
            ASSERT_EQ(cert.answer, oracle::inducible_by_family(g, v));
            if (cert.answer) {
                ASSERT_TRUE(verify_induces(g, *cert.contract, v));
            }
        }
    }
}

TEST(Synthesis, EliminabilityAgreesWithGridWhereGridIsConclusive) {
    std::mt19937_64 rng(62);
    oracle::RandomGameOptions opt;
    opt.max_vars = 3;
    int positives = 0;
    for (int k = 0; k < 150; ++k) {
        BooleanGame g = oracle::random_game(rng, opt);
        auto init = initial_equilibria(g);
        if (init.empty()) {
            continue;
        }
        std::uniform_int_distribution<std::size_t> pick(0, init.size() - 1);
        std::vector<Valuation> xs{init[pick(rng)], init[pick(rng)]};
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        auto cert = decide_eliminability(g, xs);
        oracle::GridOracle grid{g, xs};
        const bool by_grid = grid.eliminable();
        // The grid only proves eliminability; a decider "no" must agree with it.
        if (by_grid) {
            ASSERT_TRUE(cert.answer) << write_game(g);
        }
        if (cert.answer) {
            ++positives;
            ASSERT_TRUE(verify_eliminates(g, *cert.contract, xs));
        }
    }
    EXPECT_GT(positives, 0);
}

TEST(Synthesis, ContractibilityCertificatesHold) {
    std::mt19937_64 rng(63);
    oracle::RandomGameOptions opt;
    opt.max_vars = 3;
    for (int k = 0; k < 100; ++k) {
        BooleanGame g = oracle::random_game(rng, opt);
        Formula phi = oracle::random_formula(rng, g.variables(), 2);
        auto e = decide_e_contractibility(g, phi);
        if (e.answer) {
            auto ne = nash_equilibria(induced_game(g, *e.contract));
            ASSERT_TRUE(std::any_of(ne.begin(), ne.end(), [&](Valuation v) { return g.satisfies(v, phi); }));
        }
        auto a = decide_a_contractibility(g, phi);
        if (a.answer) {
            ASSERT_TRUE(verify_all_equilibria_satisfy(g, *a.contract, phi));
            // A universal witness with a nonempty equilibrium set is also existential.
            ASSERT_TRUE(e.answer);
        }
    }
}

}  // namespace
