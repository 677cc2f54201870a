#include <gtest/gtest.h>

#include "hyperad/construct.hpp"
#include "hyperad/eval.hpp"
#include "hyperad/iso.hpp"
#include "hyperad/lambda.hpp"
#include "hyperad/validate.hpp"

using namespace hyperad;
using namespace hyperad::lambda;

namespace {

std::size_t count(const Hypernet& h, EdgeKind k, EdgeId level = kOutermost) {
    std::size_t n = 0;
    for (auto e : h.edges_at(level))
        if (h.edge(e).label.kind == k) ++n;
    return n;
}

template <typename E>
SourcePos error_pos(const std::function<void()>& f) {
    try {
        f();
    } catch (const E& e) {
        return e.pos;
    }
    ADD_FAILURE() << "no error raised";
    return {};
}

}  // namespace

TEST(Parse, Shapes) {
    auto let = parse("let mul y = x * y in mul x + x");
    EXPECT_EQ(let->kind, Term::Kind::Let);
    EXPECT_EQ(let->name, "mul");
    EXPECT_EQ(let->kids[0]->kind, Term::Kind::Lam);
    auto lam = parse("\\x. x");
    EXPECT_EQ(lam->kind, Term::Kind::Lam);
    EXPECT_EQ(*lam->param_type, *SType::real());
    EXPECT_EQ(parse("x * y + z")->kind, Term::Kind::Prim);
    EXPECT_EQ(parse("(x, y).1")->kind, Term::Kind::Proj);
    EXPECT_EQ(parse("-2.5")->kind, Term::Kind::Const);
    EXPECT_DOUBLE_EQ(parse("-2.5")->value, -2.5);
}

TEST(Parse, ErrorsCarryPositions) {
    EXPECT_THROW(parse("("), ParseError);
    auto p = error_pos<ParseError>([] { parse("let f y =\n  y * ) in f"); });
    EXPECT_EQ(p.line, 2);
    EXPECT_EQ(p.column, 7);
    auto q = error_pos<ParseError>([] { parse("x $ y"); });
    EXPECT_EQ(q.column, 3);
    EXPECT_THROW(parse("let sin = x in sin"), ParseError);
}

TEST(Typecheck, Examples) {
    EXPECT_EQ(*typecheck(parse("x*x + x"), {"x"}), *SType::real());
    EXPECT_EQ(*typecheck(parse("\\x:R. x"), {}), *SType::arrow(SType::real(), SType::real()));
    EXPECT_EQ(to_string(*typecheck(parse("\\f:R -> R. f"), {})), "(R -> R) -> R -> R");
    EXPECT_THROW(typecheck(parse("sin 1.0 2.0"), {}), TypeCheckError);
    EXPECT_THROW(typecheck(parse("x y"), {"x", "y"}), TypeCheckError);
    EXPECT_THROW(typecheck(parse("(x, y).2"), {"x", "y"}), TypeCheckError);
    auto p = error_pos<TypeCheckError>([] { typecheck(parse("x +\n  z"), {"x"}); });
    EXPECT_EQ(p.line, 2);
    EXPECT_EQ(p.column, 3);
}

TEST(Typecheck, FreeVariablesBecomeInputs) {
    auto prog = check(parse("y * x + y"));
    EXPECT_EQ(prog.inputs, (std::vector<std::string>{"y", "x"}));
    auto ordered = check(parse("y * x"), std::vector<std::string>{"x", "y"});
    EXPECT_EQ(ordered.inputs, (std::vector<std::string>{"x", "y"}));
}

TEST(Elaborate, Variable) {
    auto h = compile("x", std::vector<std::string>{"x"});
    EXPECT_TRUE(isomorphic(h, identity_net({Type::real()})));
}

TEST(Elaborate, Arithmetic) {
    auto h = compile("x*x + x");
    EXPECT_TRUE(validate(h).empty());
    EXPECT_EQ(well_typed(h).operands, TypeList{Type::real()});
    EXPECT_EQ(eval_numeric(h, {3.0}), std::vector<double>{12.0});
    EXPECT_EQ(eval_numeric(compile("2.0 + 3.0"), {}), std::vector<double>{5.0});
}

TEST(Elaborate, LetMulShape) {
    auto h = compile("let mul y = x * y in mul x + x");
    EXPECT_TRUE(validate(h).empty());
    EXPECT_TRUE(well_typed(h).ok());
    EXPECT_EQ(h.inputs().size(), 1u);
    ASSERT_EQ(count(h, EdgeKind::Box), 1u);
    EXPECT_EQ(count(h, EdgeKind::Eval), 1u);
    EXPECT_EQ(count(h, EdgeKind::Copy), 2u);
    EdgeId box = 0;
    for (auto e : h.edges_at(kOutermost))
        if (h.edge(e).label.kind == EdgeKind::Box) box = e;
    EXPECT_EQ(h.edge(box).sources.size(), 1u);
    EXPECT_EQ(h.vertex(h.edge(box).targets[0]).type, Type::arrow({Type::real()}, {Type::real()}));
    EXPECT_EQ(eval_numeric(h, {3.0}), std::vector<double>{12.0});
}

TEST(Elaborate, UnusedBindingIsDiscarded) {
    auto h = compile("let u = sin x in y", std::vector<std::string>{"x", "y"});
    EXPECT_EQ(count(h, EdgeKind::Discard), 1u);
    EXPECT_EQ(eval_numeric(h, {1.0, 4.0}), std::vector<double>{4.0});
}

TEST(Elaborate, TuplesAndProjections) {
    auto h = compile("let p = (x * y, x + y) in p.1 - p.0", std::vector<std::string>{"x", "y"});
    EXPECT_EQ(eval_numeric(h, {2.0, 5.0}), std::vector<double>{-3.0});
    auto pair = compile("(x, sin x)");
    EXPECT_EQ(pair.outputs().size(), 2u);
}
