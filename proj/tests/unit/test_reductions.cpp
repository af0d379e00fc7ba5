#include <gtest/gtest.h>

#include <random>

#include "bgc/reductions.hpp"

namespace {

using namespace bgc;

TEST(Reductions, BuildsBlocksInOrder) {
    auto q = make_qsat3({"a"}, {"b", "c"}, {"d"}, "a | b & c | d");
    EXPECT_EQ(q.variables, (std::vector<std::string>{"a", "b", "c", "d"}));
}

TEST(Reductions, RejectsBadBlocks) {
    EXPECT_THROW(make_qsat3({"a"}, {"a"}, {"b"}, "a"), ValidationError);
    EXPECT_THROW(make_qsat3({"__p"}, {"b"}, {"c"}, "b"), ValidationError);
    EXPECT_THROW(make_qsat3({"T"}, {"b"}, {"c"}, "b"), ValidationError);
    EXPECT_THROW(reduce_qsat3(make_qsat3({}, {"b"}, {"c"}, "b")), ValidationError);
}

TEST(Reductions, GameShape) {
    auto q = make_qsat3({"a"}, {"b"}, {"c"}, "(a | b) & (~b | c)");
    auto [g, phi] = reduce_qsat3(q);
    // One agent per variable block plus the two auxiliary variables.
    EXPECT_EQ(g.num_variables(), 5U);
    EXPECT_TRUE(g.variable_index(kQsatP).has_value());
    EXPECT_TRUE(g.variable_index(kQsatQ).has_value());
    // The universal block is hidden from the principal.
    auto b = *g.variable_index("b");
    const auto& obs = g.observable();
    EXPECT_EQ(std::find(obs.begin(), obs.end(), b), obs.end());
    EXPECT_NE(print_formula(phi), "");
}

TEST(Reductions, SmallKnownInstances) {
    // Exists a. Forall b. Exists c. (a | b) & (~b | c): true with a=1, c=b.
    EXPECT_TRUE(brute_force_qsat3(make_qsat3({"a"}, {"b"}, {"c"}, "(a | b) & (~b | c)")));
    // Exists a. Forall b. Exists c. b & c: false.
    EXPECT_FALSE(brute_force_qsat3(make_qsat3({"a"}, {"b"}, {"c"}, "b & c")));
}

TEST(Reductions, DeciderAgreesOnKnownInstances) {
    EXPECT_TRUE(cross_check(make_qsat3({"a"}, {"b"}, {"c"}, "(a | b) & (~b | c)")));
    EXPECT_TRUE(cross_check(make_qsat3({"a"}, {"b"}, {"c"}, "b & c")));
}

TEST(Reductions, RandomInstancesAgree) {
    std::mt19937_64 rng(71);
    int trues = 0;
    for (int k = 0; k < 40; ++k) {
        auto q = random_qsat3(rng, 5);
        auto r = cross_check_details(q);
        ASSERT_TRUE(r.agree()) << print_formula(q.matrix);
        trues += r.oracle ? 1 : 0;
    }
    EXPECT_GT(trues, 0);
    EXPECT_LT(trues, 40);
}

}  // namespace
