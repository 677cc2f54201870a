#include <gtest/gtest.h>

#include "hyperad/iso.hpp"
#include "hyperad/random_nets.hpp"
#include "hyperad/serialize.hpp"
#include "hyperad/validate.hpp"

using namespace hyperad;

TEST(RandomNets, ValidAndBounded) {
    std::mt19937_64 rng(42);
    RandomNetOptions o;
    o.max_edges = 10;
    o.max_depth = 2;
    o.first_order = false;
    for (int i = 0; i < 200; ++i) {
        auto h = random_net(rng, o);
        EXPECT_TRUE(validate(h).empty());
        EXPECT_LE(h.edges().size(), 10u);
        for (const auto& [id, e] : h.edges()) EXPECT_LE(h.depth_of_edge(id), 2u);
    }
}

TEST(RandomNets, Deterministic) {
    std::mt19937_64 a(7), b(7);
    for (int i = 0; i < 20; ++i) EXPECT_EQ(to_json_string(random_net(a)), to_json_string(random_net(b)));
}

TEST(RandomTerms, ShuffleKeepsTypes) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        TypeList dom(2, Type::real());
        auto t = random_term(rng, dom);
        auto u = smc_shuffle(rng, t, 3);
        EXPECT_EQ(t->dom(), u->dom());
        EXPECT_EQ(t->cod(), u->cod());
    }
}

TEST(RandomTerms, IsoDistinguishesRealChanges) {
    // Negative control: replacing an atom breaks isomorphism.
    auto sin = StringTerm::atom(Label::op("sin"), {Type::real()}, {Type::real()});
    auto cos = StringTerm::atom(Label::op("cos"), {Type::real()}, {Type::real()});
    EXPECT_FALSE(isomorphic(interpret(*StringTerm::seq(sin, cos)), interpret(*StringTerm::seq(cos, sin))));
    auto sw = StringTerm::swap({Type::real()}, {Type::real()});
    EXPECT_FALSE(isomorphic(interpret(*sw), interpret(*StringTerm::id({Type::real(), Type::real()}))));
}
