#include <gtest/gtest.h>

#include "hyperad/construct.hpp"
#include "hyperad/dpo.hpp"
#include "hyperad/foliation.hpp"
#include "hyperad/iso.hpp"
#include "hyperad/serialize.hpp"
#include "hyperad/string_term.hpp"
#include "hyperad/validate.hpp"

using namespace hyperad;

namespace {

const Type R = Type::real();

// x, y |-> sin(x) * y
Hypernet sin_times() {
    Hypernet h;
    NetBuilder b(h);
    auto x = b.input(R);
    auto y = b.input(R);
    auto s = b.op1("sin", {x});
    b.output(b.op1("mul", {s, y}));
    return h;
}

// x |-> (\y. x * y)
Hypernet closure() {
    Hypernet h;
    NetBuilder b(h);
    auto x = b.input(R);
    auto f = b.box(std::vector<VertexId>{x}, {R}, [](NetBuilder& in, std::span<const VertexId> w) {
        return std::vector<VertexId>{in.op1("mul", {w[0], w[1]})};
    });
    b.output(f);
    return h;
}

}  // namespace

TEST(Construct, AtomicChecksSignature) {
    EXPECT_NO_THROW(build_atomic("add", {R, R}, {R}));
    EXPECT_THROW(build_atomic("add", {R}, {R}), ConstructionError);
    EXPECT_THROW(build_atomic("nosuch", {R}, {R}), ConstructionError);
    EXPECT_THROW(build_atomic(Label::copy(), {R}, {R}), ConstructionError);
    EXPECT_THROW(swap_net({R, R}, 1), ConstructionError);
}

TEST(Construct, ComposeChecksTypes) {
    auto f = build_atomic("sin", {R}, {R});
    auto g = build_atomic("add", {R, R}, {R});
    EXPECT_THROW(compose_seq(f, g), CompositionError);
    auto fg = compose_seq(compose_par(f, f), g);
    EXPECT_TRUE(validate(fg).empty());
    EXPECT_EQ(fg.edges().size(), 3u);
}

TEST(Construct, AbstractionTypes) {
    auto body = build_atomic("mul", {R, R}, {R});
    auto lam = abstraction(body, 1);
    ASSERT_EQ(lam.output_types().size(), 1u);
    EXPECT_EQ(lam.output_types()[0], Type::arrow({R}, {R}));
    EXPECT_EQ(lam.input_types(), TypeList{R});
    EXPECT_TRUE(well_typed(lam).ok());
    EXPECT_THROW(abstraction(body, 3), ConstructionError);
}

TEST(Validate, ReportsViolations) {
    Hypernet h;
    NetBuilder b(h);
    auto x = b.input(R);
    b.op1("sin", {x});
    b.op1("cos", {x});
    auto v = validate(h);
    ASSERT_FALSE(v.empty());
    bool linearity = false, coverage = false;
    for (const auto& item : v) {
        linearity |= item.clause == "linearity(source)";
        coverage |= item.clause == "interface-coverage";
    }
    EXPECT_TRUE(linearity);
    EXPECT_TRUE(coverage);
}

TEST(Validate, WellTypedDetectsEvalMismatch) {
    Hypernet h;
    NetBuilder b(h);
    auto f = b.input(Type::arrow({R}, {R}));
    auto x = b.input(R);
    auto y = b.input(R);
    Edge e;
    e.label = Label::eval();
    e.sources = {f, x, y};
    e.targets = {b.fresh(R)};
    h.add_edge(e);
    b.output(e.targets[0]);
    EXPECT_FALSE(well_typed(h).ok());
}

TEST(Iso, DetectsRelabelingAndOrder) {
    auto a = sin_times();
    auto b = sin_times();
    EXPECT_TRUE(isomorphic(a, b));
    Hypernet c;
    NetBuilder cb(c);
    auto x = cb.input(R);
    auto y = cb.input(R);
    auto s = cb.op1("sin", {y});
    cb.output(cb.op1("mul", {s, x}));
    EXPECT_FALSE(isomorphic(a, c));
    // With permutable inputs they coincide.
    IsoOptions free;
    free.free_inputs = {true, true};
    EXPECT_TRUE(isomorphic(a, c, free));
}

TEST(Iso, BoxesCompareInteriors) {
    EXPECT_TRUE(isomorphic(closure(), closure()));
    Hypernet other;
    NetBuilder b(other);
    auto x = b.input(R);
    auto f = b.box(std::vector<VertexId>{x}, {R}, [](NetBuilder& in, std::span<const VertexId> w) {
        return std::vector<VertexId>{in.op1("add", {w[0], w[1]})};
    });
    b.output(f);
    EXPECT_FALSE(isomorphic(closure(), other));
}

TEST(Foliation, RecomposeIsIsomorphic) {
    for (const auto& h : {sin_times(), closure()}) {
        auto f = foliate(h);
        EXPECT_TRUE(isomorphic(recompose(f), h));
        EXPECT_TRUE(isomorphic(interpret(*readback(h)), h));
    }
}

TEST(Foliation, SwapsAreEmitted) {
    Hypernet h;
    NetBuilder b(h);
    auto x = b.input(R);
    auto y = b.input(R);
    b.output(b.op1("sub", {y, x}));
    auto f = foliate(h);
    ASSERT_EQ(f.leaves.size(), 2u);
    EXPECT_EQ(f.leaves[0].kind, Leaf::Kind::Swap);
    EXPECT_TRUE(isomorphic(recompose(f), h));
}

TEST(Serialize, RoundTrip) {
    for (const auto& h : {sin_times(), closure()}) {
        auto text = to_json_string(h);
        auto back = from_json_string(text);
        EXPECT_TRUE(isomorphic(back, h));
        EXPECT_EQ(to_json_string(back), text);
        EXPECT_NE(to_dot(h).find("digraph"), std::string::npos);
    }
    EXPECT_THROW(from_json_string("{\"version\": 9}"), SerializationError);
    EXPECT_THROW(from_json_string("{"), SerializationError);
    EXPECT_THROW(from_json_string(R"({"version":1,"vertices":[],"edges":[{"id":1,"label":"sin","source":[4],"target":[]}],"inputs":[],"outputs":[]})"),
                 SerializationError);
}

TEST(Dpo, RewriteAndReverse) {
    // sin(x) * y  ~>  y * sin(x) via a rule on the mul edge.
    RewriteRule rule;
    rule.name = "comm";
    {
        NetBuilder b(rule.lhs);
        auto a = b.input(R);
        auto c = b.input(R);
        b.output(b.op1("mul", {a, c}));
        NetBuilder r(rule.rhs);
        auto a2 = r.input(R);
        auto c2 = r.input(R);
        r.output(r.op1("mul", {c2, a2}));
    }
    ASSERT_FALSE(rule.check());
    auto host = sin_times();
    auto ms = find_matches(rule, host);
    ASSERT_EQ(ms.size(), 1u);
    EXPECT_FALSE(check_match(rule, host, ms[0]));
    auto res = apply(rule, host, ms[0]);
    EXPECT_TRUE(validate(res.net).empty());
    EXPECT_FALSE(isomorphic(res.net, host));
    auto back = apply(rule.reversed(), res.net, res.residual);
    EXPECT_TRUE(isomorphic(back.net, host));
}

TEST(Dpo, GluingConditionRejectsDangling) {
    // L = sin;cos with the middle wire internal. The host exposes that wire.
    RewriteRule rule;
    rule.name = "sc";
    {
        NetBuilder b(rule.lhs);
        auto x = b.input(R);
        b.output(b.op1("cos", {b.op1("sin", {x})}));
        NetBuilder r(rule.rhs);
        auto y = r.input(R);
        r.output(y);
    }
    Hypernet host;
    NetBuilder hb(host);
    auto x = hb.input(R);
    auto s = hb.op1("sin", {x});
    auto [s1, s2] = hb.copy(s);
    hb.output(hb.op1("cos", {s1}));
    hb.output(s2);
    EXPECT_TRUE(find_matches(rule, host).empty());

    Hypernet ok;
    NetBuilder ob(ok);
    auto z = ob.input(R);
    ob.output(ob.op1("cos", {ob.op1("sin", {z})}));
    auto ms = find_matches(rule, ok);
    ASSERT_EQ(ms.size(), 1u);
    auto res = apply(rule, ok, ms[0]);
    EXPECT_TRUE(isomorphic(res.net, identity_net({R})));
    // Reverse: identity R has a non-injective interface leg.
    auto back = apply(rule.reversed(), res.net, res.residual);
    EXPECT_TRUE(isomorphic(back.net, ok));
}

TEST(Construct, SpecShapes) {
    auto add = build_atomic("add", {R, R}, {R});
    EXPECT_EQ(add.edges().size(), 1u);
    EXPECT_EQ(add.vertices().size(), 3u);
    EXPECT_EQ(add.inputs().size(), 2u);
    auto cp = build_atomic(Label::copy(), {R}, {R, R});
    EXPECT_EQ(cp.outputs().size(), 2u);
    EXPECT_NE(cp.outputs()[0], cp.outputs()[1]);
    auto id = identity_net({R});
    EXPECT_EQ(id.vertices().size(), 1u);
    EXPECT_EQ(id.inputs(), id.outputs());
    auto sw = swap_net({R, R}, 0);
    EXPECT_EQ(sw.outputs()[0], sw.inputs()[1]);
    EXPECT_EQ(sw.outputs()[1], sw.inputs()[0]);
    EXPECT_THROW(swap_net({R}, 0), ConstructionError);
    EXPECT_THROW(build_atomic("add", {R}, {R}), ConstructionError);
}

TEST(Construct, MonoidalLaws) {
    auto h = sin_times();
    EXPECT_TRUE(isomorphic(compose_seq(identity_net({R, R}), h), h));
    EXPECT_TRUE(isomorphic(compose_par(h, identity_net({})), h));
    EXPECT_TRUE(isomorphic(compose_par(identity_net({}), h), h));
    EXPECT_TRUE(isomorphic(compose_seq(swap_net({R, R}, 0), swap_net({R, R}, 0)), identity_net({R, R})));
    EXPECT_TRUE(isomorphic(compose_par(identity_net({R}), identity_net({R})), identity_net({R, R})));
    auto f = build_atomic("sin", {R}, {R});
    auto g = build_atomic("add", {R, R}, {R});
    auto fg = compose_par(f, g);
    EXPECT_EQ(fg.edges().size(), 2u);
    EXPECT_EQ(fg.input_types(), (TypeList{R, R, R}));
    // Built left-first versus right-first.
    Hypernet other;
    NetBuilder b(other);
    auto xs = b.inputs({R, R, R});
    auto gy = b.op1("add", {xs[1], xs[2]});
    auto fx = b.op1("sin", {xs[0]});
    b.outputs(std::vector<VertexId>{fx, gy});
    EXPECT_TRUE(isomorphic(fg, other));
    auto cp_add = compose_seq(build_atomic(Label::copy(), {R}, {R, R}), g);
    auto add_cp = compose_seq(g, build_atomic(Label::copy(), {R}, {R, R}));
    EXPECT_FALSE(isomorphic(cp_add, add_cp));
}

TEST(Construct, AbstractionOfAdd) {
    auto a = abstraction(build_atomic("add", {R, R}, {R}), 2);
    EXPECT_TRUE(a.inputs().empty());
    EXPECT_EQ(a.output_types(), (TypeList{Type::arrow({R, R}, {R})}));
    EXPECT_THROW(abstraction(build_atomic("add", {R, R}, {R}), 3), ConstructionError);
    auto well = well_typed(identity_net({R}));
    EXPECT_TRUE(well.ok());
    EXPECT_EQ(well.operands, (TypeList{R}));
}

TEST(Foliation, TensorGivesTwoLeaves) {
    auto f = foliate(compose_par(build_atomic("sin", {R}, {R}), build_atomic("cos", {R}, {R})));
    ASSERT_EQ(f.leaves.size(), 2u);
    for (const auto& l : f.leaves) {
        EXPECT_EQ(l.kind, Leaf::Kind::Atom);
        EXPECT_EQ(l.wires.size(), 2u);
    }
    EXPECT_EQ(foliate(build_atomic("sin", {R}, {R})).leaves.size(), 1u);
}

TEST(Foliation, ReadbackOfSwapIsOneUnarySwap) {
    auto f = foliate(swap_net({R, R}, 0));
    ASSERT_EQ(f.leaves.size(), 1u);
    EXPECT_EQ(f.leaves[0].kind, Leaf::Kind::Swap);
    auto t = readback(swap_net({R, R}, 0));
    EXPECT_TRUE(isomorphic(interpret(*t), swap_net({R, R}, 0)));
    auto c = closure();
    EXPECT_TRUE(isomorphic(interpret(*readback(c)), c));
}
