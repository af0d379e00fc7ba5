#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "bgc/game_io.hpp"
#include "support/oracles.hpp"

namespace {

using namespace bgc;

BooleanGame fixture(const std::string& name) {
    std::ifstream in(std::string(BGC_SOURCE_DIR) + "/fixtures/" + name);
    return parse_game(in);
}

TEST(Game, B1Basics) {
    BooleanGame g = fixture("b1.game");
    EXPECT_EQ(g.num_agents(), 2U);
    EXPECT_EQ(g.num_variables(), 2U);
    EXPECT_EQ(g.owner(0), 0U);
    EXPECT_EQ(g.owner(1), 1U);
    EXPECT_EQ(g.c_star(0), 3);
    EXPECT_EQ(g.c_star(1), 1);
    Valuation v = parse_valuation(g, "p1=1,p2=0");
    EXPECT_EQ(v.bits, 2U);
    EXPECT_EQ(g.cost(0, v), 3);
    // Agent 2 wants ~p1: loses at (1,0) with utility -c.
    EXPECT_EQ(g.utility(1, v), 0);
    EXPECT_EQ(g.utility(0, v), 1);
}

TEST(Game, ValuationOrderIsLexicographic) {
    BooleanGame g = fixture("fig2.game");
    EXPECT_EQ(format_bits(parse_valuation(g, "p1=0,p2=1,p3=1").bits, 3), "(0,1,1)");
    EXPECT_LT(parse_valuation(g, "p1=0,p2=1,p3=1"), parse_valuation(g, "p1=1,p2=0,p3=0"));
}

TEST(Game, ObservationAndIndistinguishability) {
    BooleanGame g = fixture("fig2.game");
    Valuation a = parse_valuation(g, "p1=1,p2=0,p3=0");
    Valuation b = parse_valuation(g, "p1=1,p2=1,p3=1");
    Valuation c = parse_valuation(g, "p1=0,p2=1,p3=0");
    EXPECT_TRUE(g.indistinguishable(a, b));
    EXPECT_FALSE(g.indistinguishable(a, c));
    EXPECT_EQ(format_observation(g, g.observe(a)), "p1=1");
}

TEST(Game, CStarMatchesEnumeration) {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 100; ++k) {
        oracle::RandomGameOptions opt;
        opt.rational_costs = true;
        BooleanGame g = oracle::random_game(rng, opt);
        for (AgentId i = 0; i < g.num_agents(); ++i) {
            ASSERT_EQ(g.c_star(i), oracle::max_cost(g, i));
        }
    }
}

TEST(Game, WinnersMatchGoalEvaluation) {
    std::mt19937_64 rng(12);
    for (int k = 0; k < 100; ++k) {
        BooleanGame g = oracle::random_game(rng);
        for (std::uint32_t b = 0; b < g.profile_count(); ++b) {
            for (AgentId i = 0; i < g.num_agents(); ++i) {
                ASSERT_EQ(g.is_winner(i, g.valuation(b)), oracle::wins(g, i, g.valuation(b)));
            }
        }
    }
}

TEST(Game, AlternativesAreExactlyTheUnilateralMoves) {
    std::mt19937_64 rng(13);
    for (int k = 0; k < 50; ++k) {
        BooleanGame g = oracle::random_game(rng);
        oracle::Evaluator e(g, {});
        for (std::uint32_t b = 0; b < g.profile_count(); ++b) {
            for (AgentId i = 0; i < g.num_agents(); ++i) {
                std::vector<Valuation> got;
                g.for_each_alternative(i, g.valuation(b), [&](Valuation w) { got.push_back(w); });
                ASSERT_EQ(got, e.alternatives(i, g.valuation(b)));
            }
        }
    }
}

TEST(Game, CostDefaultsAndOverrides) {
    BooleanGame g = parse_game(
        "agents 1\nvars a b\ncontrol 1: a b\ngoal 1: a\nobservable:\ncostdefault 1: 5/2\ncost 1: a=1,b=1 -> 7\n");
    EXPECT_EQ(g.cost(0, parse_valuation(g, "a=0,b=0")), Rational(5, 2));
    EXPECT_EQ(g.cost(0, parse_valuation(g, "a=1,b=1")), 7);
    EXPECT_EQ(g.c_star(0), 7);
    EXPECT_EQ(g.observation_count(), 1U);
}

TEST(Game, ValidationErrors) {
    const std::string head = "agents 2\nvars a b\n";
    // variable owned twice
    EXPECT_THROW(parse_game(head + "control 1: a b\ncontrol 2: b\ngoal 1: a\ngoal 2: b\n"), ValidationError);
    // variable owned by nobody
    EXPECT_THROW(parse_game(head + "control 1: a\ngoal 1: a\ngoal 2: b\n"), ValidationError);
    // missing goal
    EXPECT_THROW(parse_game(head + "control 1: a\ncontrol 2: b\ngoal 1: a\n"), ValidationError);
    // negative cost
    EXPECT_THROW(parse_game(head + "control 1: a\ncontrol 2: b\ngoal 1: a\ngoal 2: b\ncostdefault 1: -1\n"),
                 ValidationError);
    // cost entry not covering every variable
    EXPECT_THROW(parse_game(head + "control 1: a\ncontrol 2: b\ngoal 1: a\ngoal 2: b\ncost 1: a=1 -> 2\n"),
                 ValidationError);
    // unknown observable
    EXPECT_THROW(parse_game(head + "control 1: a\ncontrol 2: b\ngoal 1: a\ngoal 2: b\nobservable: c\n"),
                 ValidationError);
    // reserved name
    EXPECT_THROW(parse_game("agents 1\nvars T\ncontrol 1: T\ngoal 1: T\n"), ValidationError);
}

TEST(Game, ParseErrorsCarryLineNumbers) {
    try {
        parse_game("agents 1\nvars a\nfrobnicate 1: a\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3U);
    }
    try {
        parse_game("agents 1\nvars a\ncontrol 1: a\ngoal 1: a &\n");
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
    }
}

TEST(Game, VariableCap) {
    std::ostringstream text;
    text << "agents 1\nvars";
    for (int j = 0; j < 25; ++j) {
        text << " v" << j;
    }
    text << "\ncontrol 1:";
    for (int j = 0; j < 25; ++j) {
        text << " v" << j;
    }
    text << "\ngoal 1: T\n";
    EXPECT_THROW(parse_game(text.str()), CapExceeded);
}

TEST(Game, WriteReadIsAFixpoint) {
    std::mt19937_64 rng(14);
    oracle::RandomGameOptions opt;
    opt.rational_costs = true;
    for (int k = 0; k < 100; ++k) {
        BooleanGame g = oracle::random_game(rng, opt);
        const std::string once = write_game(g);
        BooleanGame h = parse_game(once);
        ASSERT_EQ(once, write_game(h));
        for (std::uint32_t b = 0; b < g.profile_count(); ++b) {
            for (AgentId i = 0; i < g.num_agents(); ++i) {
                ASSERT_EQ(g.utility(i, g.valuation(b)), h.utility(i, h.valuation(b)));
            }
        }
    }
}

TEST(Game, CostlessDropsCostsOnly) {
    BooleanGame g = fixture("b2.game");
    BooleanGame z = costless(g);
    for (std::uint32_t b = 0; b < g.profile_count(); ++b) {
        EXPECT_EQ(z.cost(0, z.valuation(b)), 0);
        EXPECT_EQ(z.winners(z.valuation(b)), g.winners(g.valuation(b)));
    }
}

}  // namespace
