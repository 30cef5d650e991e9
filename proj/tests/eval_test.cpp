#include <gtest/gtest.h>

#include <random>

#include "occt/eval.hpp"
#include "occt/parser.hpp"
#include "occt/typeops.hpp"
#include "test_util.hpp"

using namespace occt;
using occt::testing::ty;

namespace {

ParseContext builtins_ctx() {
  ParseContext c;
  c.builtins = {"incr", "lnot"};
  return c;
}

ExprPtr value_of(const Evaluator& ev, const std::string& src) {
  EvalResult r = ev.eval(parse_expr(src, builtins_ctx()), 1000);
  EXPECT_EQ(r.status, EvalResult::Status::Done) << src;
  return r.expr;
}

}  // namespace

TEST(Eval, Steps) {
  Evaluator ev(Checker::default_builtins());
  StepResult r = ev.step(parse_expr("fst (1, 2)"));
  ASSERT_EQ(r.kind, StepResult::Kind::Stepped);
  EXPECT_TRUE(expr_equal(r.expr, parse_expr("1")));
  r = ev.step(parse_expr("(fun (x : Int -> Int ;) -> x) 42"));
  EXPECT_TRUE(expr_equal(r.expr, parse_expr("42")));
  r = ev.step(parse_expr("if 42 is Int then 1 else 2"));
  EXPECT_TRUE(expr_equal(r.expr, parse_expr("1")));
  EXPECT_EQ(ev.step(parse_expr("3")).kind, StepResult::Kind::Done);
}

TEST(Eval, LeftmostInnermost) {
  Evaluator ev(Checker::default_builtins());
  StepResult r = ev.step(parse_expr("(incr 1, incr 2)", builtins_ctx()));
  EXPECT_TRUE(expr_equal(r.expr, parse_expr("(2, incr 2)", builtins_ctx())));
}

TEST(Eval, Records) {
  Evaluator ev(Checker::default_builtins());
  EXPECT_TRUE(expr_equal(value_of(ev, "{a = incr 1, b = true}.a"), parse_expr("2")));
  EXPECT_TRUE(expr_equal(value_of(ev, "{{a = 1, b = 2} without a}"), parse_expr("{b = 2}")));
  EXPECT_TRUE(expr_equal(value_of(ev, "{{a = 1} with a = 3}.a"), parse_expr("3")));
  EXPECT_EQ(ev.eval(parse_expr("{}.a"), 10).status, EvalResult::Status::Stuck);
  EXPECT_EQ(ev.eval(parse_expr("{3 with a = 1}"), 10).status, EvalResult::Status::Stuck);
  EXPECT_EQ(ev.eval(parse_expr("{3 without a}"), 10).status, EvalResult::Status::Stuck);
}

TEST(Eval, Natives) {
  Evaluator ev(Checker::default_builtins());
  EXPECT_TRUE(expr_equal(value_of(ev, "incr (incr 1)"), parse_expr("3")));
  EXPECT_TRUE(expr_equal(value_of(ev, "lnot true"), parse_expr("false")));
  EXPECT_EQ(ev.eval(parse_expr("lnot 3", builtins_ctx()), 10).status, EvalResult::Status::Stuck);
}

TEST(Eval, DivergenceRunsOutOfFuel) {
  Evaluator ev(Checker::default_builtins());
  auto omega = parse_expr("(fun (x : Any) -> x x) (fun (x : Any) -> x x)");
  EXPECT_EQ(ev.eval(omega, 1000).status, EvalResult::Status::OutOfFuel);
  EXPECT_EQ(ev.eval(omega, 1000).steps, 1000);
}

TEST(Mst, Values) {
  Evaluator ev(Checker::default_builtins());
  EXPECT_TRUE(ev.value_in_type(parse_expr("42"), int_type()));
  EXPECT_TRUE(ev.value_in_type(parse_expr("(2, true)"), ty("(Int, Bool)")));
  EXPECT_TRUE(ev.value_in_type(parse_expr("fun (x : Int -> Int ;) -> x"), ty("Empty -> Any")));
  EXPECT_FALSE(ev.value_in_type(parse_expr("fun (x : Int -> Int ;) -> x"), ty("Bool -> Bool")));
  EXPECT_EQUIV(ev.mst(parse_expr("fun (x : Int -> Int ; Bool -> Bool) -> x")), ty("(Int -> Int) & (Bool -> Bool)"));
  EXPECT_EQUIV(ev.mst(parse_expr("{a = 1, b = 'c'}")), ty("{a = 1, b = 'c'}"));
  EXPECT_FALSE(ev.value_in_type(parse_expr("{a = 1}"), ty("{a = 1, b = Int ..}")));
}

TEST(Mst, OpenCodomainUsesHook) {
  Evaluator ev(Checker::default_builtins());
  auto lam = parse_expr("fun (x : Int) -> x");
  EXPECT_EQUIV(ev.mst(lam), ty("Int -> Any"));
  ev.lambda_type = [](const ExprPtr&) { return ty("Int -> Int"); };
  EXPECT_EQUIV(ev.mst(lam), ty("Int -> Int"));
}

TEST(Mst, MembershipRespectsSubtyping) {
  Evaluator ev(Checker::default_builtins());
  std::mt19937 rng{5};
  const std::vector<std::string> vals = {"1", "true", "(1, false)", "{a = 2}", "'x'", "\"s\"", "nil", "((1, 2), 3)"};
  const std::vector<std::string> types = {"Int", "Bool", "(Int, Bool)", "{a = Int ..}", "Char", "String", "Nil",
                                          "((Int, Int), Int)", "Any", "1 | true", "~Int", "(Any, Any)"};
  for (int i = 0; i < 300; ++i) {
    auto v = parse_expr(vals[rng() % vals.size()]);
    Type t = ty(types[rng() % types.size()]), t2 = mk_union(t, ty(types[rng() % types.size()]));
    if (ev.value_in_type(v, t)) EXPECT_TRUE(ev.value_in_type(v, t2));
  }
}

TEST(Eval, Code7Applications) {
  Session s;
  auto c = occt::testing::check_corpus(s, "code07.occ");
  for (auto [name, expect] : {std::pair{"test_1", "1"}, {"test_2", "2"}, {"test_3", "3"}}) {
    EvalResult r = s.evaluate(parse_expr(name, s.context()), 10000);
    ASSERT_EQ(r.status, EvalResult::Status::Done) << name;
    EXPECT_TRUE(expr_equal(r.expr, parse_expr(expect))) << name;
    EXPECT_SUBTYPE(s.evaluator().mst(r.expr), *c.decls.at(name).type);
  }
}

TEST(Mst, ClosuresOverGlobalsUseDeclaredTypes) {
  Session s;
  auto c = occt::testing::check_corpus(s, "code07.occ");
  Type f = *c.decls.at("f").type;
  EvalResult r = s.evaluate(parse_expr("f 3", s.context()), 10000);
  ASSERT_EQ(r.status, EvalResult::Status::Done);
  EXPECT_SUBTYPE(s.evaluator().mst(r.expr), apply(f, mk_int(3)));
  EXPECT_EQUIV(s.evaluator().mst(s.evaluate(parse_expr("f", s.context()), 10).expr), f);
}
