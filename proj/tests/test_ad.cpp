#include <gtest/gtest.h>

#include <cmath>

#include "hyperad/ad.hpp"
#include "hyperad/eval.hpp"
#include "hyperad/iso.hpp"
#include "hyperad/lambda.hpp"
#include "hyperad/construct.hpp"
#include "hyperad/validate.hpp"

using namespace hyperad;

TEST(Ad, WorkedExample) {
    auto h = lambda::compile("let mul y = x*y in mul x + x");
    Differentiator d(h);
    for (double x : {-2.0, -1.0, 0.0, 0.5, 3.0}) {
        auto g = d.jacobian({x});
        ASSERT_EQ(g.size(), 1u);
        EXPECT_NEAR(g[0][0], 2 * x + 1, 1e-9) << "x = " << x;
        EXPECT_NEAR(d.value({x})[0], x * x + x, 1e-12);
    }
}

TEST(Ad, AdjointIsWellTyped) {
    auto h = lambda::compile("let f z = z * x in sin (f y) + f x");
    auto adj = adjoint(h);
    EXPECT_TRUE(validate(adj).empty());
    auto t = well_typed(adj);
    for (const auto& e : t.errors) ADD_FAILURE() << e.message;
    auto out = adj.output_types();
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[1], Type::arrow({Type::real()}, {Type::real(), Type::real()}));
}

TEST(Ad, RdAxioms) {
    for (const auto& r : check_rd_axioms(7, 20)) EXPECT_TRUE(r.pass()) << r.name << " " << r.first_failure;
}

namespace {

const Type R = Type::real();

std::size_t count_label(const Hypernet& h, const std::string& text) {
    std::size_t n = 0;
    for (const auto& [id, e] : h.edges())
        if (e.label.to_string() == text) ++n;
    return n;
}

}  // namespace

TEST(Pullbacks, NumericExamples) {
    EXPECT_EQ(eval_numeric(pullback_of("mul"), {3, 4, 1}), (std::vector<double>{4, 3}));
    EXPECT_EQ(eval_numeric(pullback_of("add"), {3, 4, 1}), (std::vector<double>{1, 1}));
    EXPECT_EQ(eval_numeric(pullback_of("sin"), {0, 1}), (std::vector<double>{1}));
    EXPECT_THROW(pullback_of("tanh"), AdError);
    PullbackRegistry reg;
    EXPECT_THROW(reg.add("sin", identity_net({R})), AdError);
    EXPECT_THROW(reg.add("nope", identity_net({R})), AdError);
}

TEST(Passes, ForwardOfAddSavesOperands) {
    auto h = build_atomic("add", {R, R}, {R});
    auto f = forward_pass(h);
    EXPECT_EQ(f.output_types(), (TypeList{R, R, R}));
    EXPECT_EQ(count_label(f, "copy"), 2u);
    EXPECT_EQ(count_label(f, "add"), 1u);
    auto id = forward_pass(identity_net({R}));
    EXPECT_TRUE(isomorphic(id, identity_net({R})));
    EXPECT_TRUE(ledger_types(identity_net({R})).empty());
}

TEST(Passes, ReverseGadgets) {
    auto cp = reverse_pass(build_atomic(Label::copy(), {R}, {R, R}));
    EXPECT_EQ(cp.edges().size(), 1u);
    EXPECT_EQ(count_label(cp, "add"), 1u);
    auto dc = reverse_pass(build_atomic(Label::discard(), {R}, {}));
    EXPECT_EQ(dc.edges().size(), 1u);
    EXPECT_EQ(count_label(dc, "const:0"), 1u);
    auto mul = reverse_pass(build_atomic("mul", {R, R}, {R}));
    EXPECT_EQ(eval_numeric(mul, {3, 4, 1}), (std::vector<double>{4, 3}));
}

TEST(Passes, AdjointOfIdentity) {
    auto a = adjoint(identity_net({R}));
    EXPECT_EQ(a.output_types(), (TypeList{R, Type::arrow({R}, {R})}));
    std::size_t boxes = 0;
    for (const auto& [id, e] : a.edges())
        if (e.label.kind == EdgeKind::Box) ++boxes;
    EXPECT_EQ(boxes, 1u);
    EXPECT_EQ(gradient(identity_net({R}), {5.0}), std::vector<double>{1.0});
}

TEST(Passes, FirstOrderPartialStatesAreWellTyped) {
    auto h = lambda::compile("let a = x * y in sin a + a * x", std::vector<std::string>{"x", "y"});
    std::vector<EdgeId> done;
    for (auto fr = forward_fringe(h, done); !fr.empty(); fr = forward_fringe(h, done)) {
        done.push_back(fr.front());
        EXPECT_TRUE(well_typed(forward_partial(h, done)).ok());
    }
    std::vector<EdgeId> back;
    for (auto fr = reverse_fringe(h, back); !fr.empty(); fr = reverse_fringe(h, back)) {
        back.push_back(fr.front());
        EXPECT_TRUE(validate(reverse_partial(h, back)).empty());
    }
    EXPECT_TRUE(well_typed(reverse_partial(h, back)).ok());
}

TEST(Passes, PartialStatesAreValid) {
    auto h = lambda::compile("let f z = z * x in sin (f y) + f x", std::vector<std::string>{"x", "y"});
    std::vector<EdgeId> done;
    while (true) {
        auto fr = forward_fringe(h, done);
        if (fr.empty()) break;
        done.push_back(fr.back());
        EXPECT_TRUE(validate(forward_partial(h, done)).empty());
    }
    EXPECT_TRUE(isomorphic(forward_partial(h, done), forward_pass(h),
                           {{}, free_suffix(1 + ledger_types(h).size(), ledger_types(h).size())}));
    auto rev = reverse_partial(h, {});
    EXPECT_EQ(count_label(rev, "pending"), 1u);
}

TEST(Gradient, Examples) {
    EXPECT_EQ(gradient(lambda::compile("x*x + x"), {3.0}), std::vector<double>{7.0});
    Hypernet constant;
    NetBuilder b(constant);
    b.discard(b.input(R));
    b.output(b.constant(2.0));
    EXPECT_EQ(eval_numeric(constant, {1.0}), std::vector<double>{2.0});
    EXPECT_EQ(gradient(constant, {1.0}), std::vector<double>{0.0});
    EXPECT_EQ(jacobian(lambda::compile("(x*x, x)"), {3.0}), (std::vector<std::vector<double>>{{6}, {1}}));
    EXPECT_EQ(jacobian(swap_net({R, R}, 0), {1, 2}), (std::vector<std::vector<double>>{{0, 1}, {1, 0}}));
    EXPECT_EQ(jacobian(build_atomic("add", {R, R}, {R}), {3, 4}), (std::vector<std::vector<double>>{{1, 1}}));
    EXPECT_THROW(gradient(lambda::compile("(x, x)"), {1.0}), EvalError);
}

TEST(Gradient, NullaryProgramHasEmptyGradient) {
    auto h = lambda::compile("2.0 * 3.0");
    EXPECT_TRUE(gradient(h, {}).empty());
}

TEST(FiniteDiff, Examples) {
    auto fd = finite_diff(CompiledNet(lambda::compile("x*x + x")), {3.0});
    EXPECT_NEAR(fd[0][0], 7.0, 1e-5);
    fd = finite_diff(CompiledNet(lambda::compile("sin x")), {0.0});
    EXPECT_NEAR(fd[0][0], 1.0, 1e-6);
    auto rep = compare_with_finite_differences(lambda::compile("sin x * exp x"), {{0.1}, {1.2}}, "p");
    EXPECT_TRUE(rep.pass()) << rep.text();
    EXPECT_EQ(rep.json()["points"].size(), 2u);
}
