#include <gtest/gtest.h>

#include <random>
#include <string>
#include <vector>

#include "bgc/formula.hpp"
#include "support/oracles.hpp"

namespace {

using namespace bgc;

const std::vector<std::string> kVars{"p", "q", "r"};

bool truth(const Formula& f, unsigned bits) {
    return eval(f, [&](std::size_t j) { return ((bits >> j) & 1U) != 0; });
}

TEST(Formula, ParsesPrecedence) {
    Formula f = parse_formula("p | q & r", kVars);
    ASSERT_EQ(f.kind(), FormulaKind::Or);
    EXPECT_EQ(f.rhs().kind(), FormulaKind::And);

    Formula g = parse_formula("p -> q -> r", kVars);
    ASSERT_EQ(g.kind(), FormulaKind::Implies);
    EXPECT_EQ(g.rhs().kind(), FormulaKind::Implies);

    Formula h = parse_formula("p <-> q <-> r", kVars);
    ASSERT_EQ(h.kind(), FormulaKind::Iff);
    EXPECT_EQ(h.lhs().kind(), FormulaKind::Iff);
}

TEST(Formula, ImplicationBindsWeakerThanOr) {
    // r -> p & q parses as an implication with a conjunctive consequent.
    Formula f = parse_formula("r -> p & q", kVars);
    ASSERT_EQ(f.kind(), FormulaKind::Implies);
    EXPECT_EQ(f.rhs().kind(), FormulaKind::And);
}

TEST(Formula, ConstantsAndNegationSpellings) {
    EXPECT_TRUE(truth(parse_formula("T", kVars), 0));
    EXPECT_TRUE(truth(parse_formula("true", kVars), 0));
    EXPECT_FALSE(truth(parse_formula("F", kVars), 0));
    EXPECT_EQ(parse_formula("!p", kVars), parse_formula("~p", kVars));
}

TEST(Formula, TruthTables) {
    Formula imp = parse_formula("p -> q", kVars);
    Formula iff = parse_formula("p <-> q", kVars);
    for (unsigned b = 0; b < 4; ++b) {
        const bool p = b & 1U;
        const bool q = (b >> 1) & 1U;
        EXPECT_EQ(truth(imp, b), !p || q);
        EXPECT_EQ(truth(iff, b), p == q);
    }
}

TEST(Formula, ErrorsCarryColumns) {
    try {
        parse_formula("p & (q | ", kVars);
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_GT(e.column(), 0U);
    }
    EXPECT_THROW(parse_formula("p & zz", kVars), ParseError);
    EXPECT_THROW(parse_formula("p q", kVars), ParseError);
    EXPECT_THROW(parse_formula("", kVars), ParseError);
}

TEST(Formula, PrinterUsesMinimalParentheses) {
    EXPECT_EQ(print_formula(parse_formula("(p & q) | r", kVars)), "p & q | r");
    EXPECT_EQ(print_formula(parse_formula("p & (q | r)", kVars)), "p & (q | r)");
    EXPECT_EQ(print_formula(parse_formula("(p -> q) -> r", kVars)), "(p -> q) -> r");
    EXPECT_EQ(print_formula(parse_formula("p -> (q -> r)", kVars)), "p -> q -> r");
    EXPECT_EQ(print_formula(parse_formula("~(p | q)", kVars)), "~(p | q)");
}

TEST(Formula, RandomRoundTripPreservesStructureAndMeaning) {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 300; ++k) {
        Formula f = oracle::random_formula(rng, kVars, 4);
        Formula g = parse_formula(print_formula(f), kVars);
        ASSERT_EQ(f, g) << print_formula(f);
        for (unsigned b = 0; b < 8; ++b) {
            ASSERT_EQ(truth(f, b), truth(g, b));
        }
    }
}

}  // namespace
