#include <gtest/gtest.h>

#include "hyperad/construct.hpp"
#include "hyperad/eval.hpp"
#include "hyperad/iso.hpp"
#include "hyperad/lambda.hpp"
#include "hyperad/rules.hpp"
#include "hyperad/serialize.hpp"

using namespace hyperad;

namespace {

const Type R = Type::real();

std::size_t count(const Hypernet& h, EdgeKind k) {
    std::size_t n = 0;
    for (const auto& [id, e] : h.edges())
        if (e.label.kind == k) ++n;
    return n;
}

}  // namespace

TEST(Rules, LibraryNames) {
    std::vector<std::string> names;
    for (const auto& s : rule_library()) names.push_back(s.name);
    for (const char* want : {"BR", "Eta", "App", "Gc", "Lamb", "Var", "Comp", "CE", "Delta", "Counit"})
        EXPECT_NE(std::find(names.begin(), names.end(), want), names.end()) << want;
    EXPECT_FALSE(schema_by_name("nope"));
}

TEST(Rules, NoMatchesInEmptyNet) {
    for (const auto& s : rule_library()) EXPECT_TRUE(s.find(Hypernet{}, 0, false).empty()) << s.name;
}

TEST(Rules, BetaOnIdentityApplication) {
    auto h = lambda::compile("(\\x. x) 5.0");
    auto found = schemata::beta().find(h, 0, false);
    ASSERT_EQ(found.size(), 1u);
    auto r = apply(found[0].rule, h, found[0].match).net;
    EXPECT_EQ(count(r, EdgeKind::Box), 0u);
    EXPECT_EQ(count(r, EdgeKind::Eval), 0u);
    EXPECT_EQ(eval_numeric(r, {}), std::vector<double>{5.0});
}

TEST(Rules, TwoDisjointRedexes) {
    auto one = lambda::compile("(\\y. y * x) x");
    auto two = compose_par(one, one);
    auto found = schemata::beta().find(two, 0, false);
    EXPECT_EQ(found.size(), 2u);
    // The instance's left side, matched as a plain rule, finds both redexes too.
    EXPECT_EQ(find_matches(found[0].rule, two).size(), 2u);
}

TEST(Rules, DeltaFoldsConstants) {
    Hypernet h;
    NetBuilder b(h);
    b.output(b.op1("add", {b.constant(2.0), b.constant(3.0)}));
    auto n = normalize(h, {schemata::delta()});
    ASSERT_EQ(n.net.edges().size(), 1u);
    EXPECT_TRUE(n.net.edges().begin()->second.label == Label::constant(5.0));
}

TEST(Rules, GcRemovesUnusedSubstitution) {
    auto h = lambda::compile("let u = sin x in y", std::vector<std::string>{"x", "y"});
    auto n = normalize(h, {schemata::discard_natural(false)});
    EXPECT_EQ(n.trace.size(), 1u);
    EXPECT_EQ(count(n.net, EdgeKind::Op), 0u);
    EXPECT_EQ(count(n.net, EdgeKind::Discard), 1u);
}

TEST(Rules, NormalizeRemovesAbstractions) {
    auto h = lambda::compile("(\\x. x*x + x) y");
    auto n = normalize(h, evaluation_rules());
    EXPECT_EQ(count(n.net, EdgeKind::Box), 0u);
    EXPECT_EQ(count(n.net, EdgeKind::Eval), 0u);
    auto again = normalize(n.net, evaluation_rules());
    EXPECT_TRUE(again.trace.empty());
    EXPECT_TRUE(isomorphic(again.net, n.net));
    EXPECT_EQ(eval_numeric(n.net, {3.0}), std::vector<double>{12.0});
}

TEST(Rules, FuelZeroReports) {
    auto h = lambda::compile("(\\x. x) 5.0");
    NormalizeOptions o;
    o.fuel = 0;
    EXPECT_THROW(normalize(h, evaluation_rules(), o), FuelExhausted);
}

TEST(Rules, ExchangeSidesAreIsomorphic) {
    auto h = lambda::compile("sin x * cos y", std::vector<std::string>{"x", "y"});
    auto found = schemata::exchange().find(h, 0, false);
    ASSERT_FALSE(found.empty());
    EXPECT_TRUE(isomorphic(found[0].rule.lhs, found[0].rule.rhs));
    EXPECT_TRUE(isomorphic(apply(found[0].rule, h, found[0].match).net, h));
}

TEST(Rules, RulePackRoundTrip) {
    RewriteRule r;
    r.name = "sin-neg";
    r.lhs = compose_seq(build_atomic("neg", {R}, {R}), build_atomic("sin", {R}, {R}));
    r.rhs = compose_seq(build_atomic("sin", {R}, {R}), build_atomic("neg", {R}, {R}));
    RulePack pack;
    pack.rules.push_back(r);
    auto back = rule_pack_from_json(rule_pack_to_json(pack));
    ASSERT_EQ(back.rules.size(), 1u);
    EXPECT_TRUE(isomorphic(back.rules[0].lhs, r.lhs));
    auto h = lambda::compile("sin (neg x) * 2.0");
    auto n = normalize(h, {schema_from_rule(back.rules[0])});
    EXPECT_EQ(n.trace, std::vector<std::string>{"sin-neg"});
    EXPECT_DOUBLE_EQ(eval_numeric(n.net, {0.3})[0], eval_numeric(h, {0.3})[0]);
    nlohmann::json bad = rule_pack_to_json(pack);
    bad["version"] = 99;
    EXPECT_THROW(rule_pack_from_json(bad), SerializationError);
}
