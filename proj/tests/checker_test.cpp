#include <gtest/gtest.h>

#include "occt/checker.hpp"
#include "occt/parser.hpp"
#include "occt/typeops.hpp"
#include "test_util.hpp"

using namespace occt;
using occt::testing::ty;

namespace {

ParseContext ctx_with(std::initializer_list<std::string> builtins) {
  ParseContext c;
  for (const auto& b : builtins) c.builtins.insert(b);
  return c;
}

Path path(std::initializer_list<Step::Letter> ls) {
  Path p;
  for (auto l : ls) p.push_back({l, {}});
  return p;
}

using L = Step::Letter;

}  // namespace

TEST(TypeEnv, EnterBinderForgetsEntriesMentioningTheVariable) {
  auto fx = parse_expr("f x"), fy = parse_expr("f y");
  TypeEnv g = TypeEnv{}.with_occurrence(fx, int_type()).with_occurrence(fy, int_type());
  TypeEnv h = g.enter_binder("x", any());
  EXPECT_FALSE(h.occurrence(fx));
  EXPECT_TRUE(h.occurrence(fy));
  EXPECT_EQ(*h.var("x"), any());
}

TEST(TypeEnv, BottomWhenAnEntryIsEmpty) {
  EXPECT_FALSE(TypeEnv{}.with_var("x", int_type()).bottom());
  EXPECT_TRUE(TypeEnv{}.with_var("x", mk_inter(int_type(), bool_type())).bottom());
  EXPECT_TRUE(TypeEnv{}.with_occurrence(parse_expr("f x"), empty()).bottom());
}

TEST(Checker, Constants) {
  Checker c;
  EXPECT_EQ(c.type_of({}, parse_expr("42")), mk_int(42));
  EXPECT_EQ(c.type_of({}, parse_expr("true")), true_type());
  EXPECT_EQUIV(c.type_of({}, parse_expr("(1, 'a')")), mk_product(mk_int(1), mk_char('a')));
}

TEST(Checker, EfqTypesAnythingUnderEmptyEnvironment) {
  Checker c;
  TypeEnv g = TypeEnv{}.with_var("x", empty());
  EXPECT_EQ(c.type_of(g, parse_expr("x x 3")), empty());
}

TEST(Checker, Errors) {
  Checker c;
  auto rule = [&](const std::string& src, const TypeEnv& g) -> std::string {
    try {
      c.type_of(g, parse_expr(src, ctx_with({"incr"})));
    } catch (const TypeError& e) {
      return e.rule;
    }
    return "";
  };
  TypeEnv g = TypeEnv{}.with_var("b", bool_type());
  EXPECT_EQ(rule("y", g), "Var");
  EXPECT_EQ(rule("3 4", g), "App");
  EXPECT_EQ(rule("incr b", g), "App");
  EXPECT_EQ(rule("fst 3", g), "Proj");
  EXPECT_EQ(rule("{}.a", g), "Select");
  EXPECT_EQ(rule("{3 without a}", g), "Delete");
  EXPECT_EQ(rule("{3 with a = 1}", g), "Update");
  EXPECT_EQ(rule("fun (x : Int -> Bool ;) -> x", g), "Abs");
}

TEST(Checker, ErrorCarriesSpan) {
  Checker c;
  try {
    c.type_of({}, parse_expr("(1,\n  3 4)"));
    FAIL();
  } catch (const TypeError& e) {
    EXPECT_EQ(e.span.line, 2);
    EXPECT_EQ(e.span.col, 2);
  }
}

TEST(Checker, SelectsFieldsAndDeletes) {
  Checker c;
  EXPECT_EQ(c.type_of({}, parse_expr("{a = 1, b = true}.b")), true_type());
  EXPECT_EQUIV(c.type_of({}, parse_expr("{}")), mk_record(RecordRow::closed()));
  EXPECT_EQUIV(c.type_of({}, parse_expr("{{a = 1, b = 2} without a}")),
               mk_record(RecordRow::closed({{"b", mk_int(2)}})));
  EXPECT_EQUIV(c.type_of({}, parse_expr("{{a = 1} with a = true}")),
               mk_record(RecordRow::closed({{"a", true_type()}})));
}

TEST(Checker, LetIsTypedThroughItsBody) {
  Checker c;
  EXPECT_EQUIV(c.type_of({}, parse_expr("let y = incr 1 in (y, y)", ctx_with({"incr"}))),
               mk_product(int_type(), int_type()));
  TypeEnv g = TypeEnv{}.with_var("z", ty("Int | Bool"));
  EXPECT_EQUIV(c.type_of(g, parse_expr("let y = z in if y is Int then incr y else lnot y", ctx_with({"incr", "lnot"}))),
               ty("Int | Bool"));
}

TEST(Checker, TestsOnPreciseArrowTypesAreRejected) {
  Checker c;
  TypeEnv g = TypeEnv{}.with_var("f", any());
  auto e = parse_expr("if f is Int -> Int then 1 else 2");
  EXPECT_THROW(c.type_of(g, e), TypeError);
  EXPECT_NO_THROW(c.type_of(g, parse_expr("if f is Empty -> Any then 1 else 2")));
  EXPECT_NO_THROW(c.type_of(g, parse_expr("if f is Int then 1 else 2")));
  c.config().allow_arrow_tests = true;
  EXPECT_EQUIV(c.type_of(g, e), ty("1 | 2"));
}

// x1 : (Int -> Int) & (String -> String), x2 : Int | String
TEST(Checker, RefinesArgumentInBothBranches) {
  std::map<std::string, Type> b = Checker::default_builtins();
  b["plus"] = ty("Int -> Int -> Int");
  b["concat"] = ty("String -> String -> String");
  Checker c({}, b);
  TypeEnv g = TypeEnv{}.with_var("x1", ty("(Int -> Int) & (String -> String)")).with_var("x2", ty("Int | String"));
  auto e = parse_expr("if x1 x2 is Int then plus (x1 x2) x2 else concat (x1 x2) x2", ctx_with({"plus", "concat"}));
  EXPECT_EQUIV(c.type_of(g, e), ty("Int | String"));
}

// x1 : (Int | String -> Int) | (Bool | String -> Bool), x2 : String
TEST(Checker, RefinesFunctionOfUnionType) {
  std::map<std::string, Type> b = Checker::default_builtins();
  b["plus"] = ty("Int -> Int -> Int");
  Checker c({}, b);
  TypeEnv g = TypeEnv{}
                  .with_var("x1", ty("(Int | String -> Int) | (Bool | String -> Bool)"))
                  .with_var("x2", string_type());
  auto e = parse_expr("if x1 x2 is Int then plus (x1 (x1 x2)) 42 else lnot (x1 (x1 x2))", ctx_with({"plus", "lnot"}));
  EXPECT_EQUIV(c.type_of(g, e), ty("Int | Bool"));
  // Refinement also drops the functions diverging on String.
  TypeEnv g1 = c.refine(g, parse_expr("x1 x2"), int_type());
  EXPECT_SUBTYPE(*g1.var("x1"), ty("Int | String -> Int"));
  EXPECT_EQUIV(apply(*g1.var("x1"), string_type()), int_type());
  TypeEnv g2 = c.refine(g, parse_expr("x1 x2"), mk_neg(int_type()));
  EXPECT_SUBTYPE(*g2.var("x1"), ty("Bool | String -> Bool"));
  EXPECT_EQUIV(apply(*g2.var("x1"), string_type()), bool_type());
}

TEST(Checker, EnvAtRoot) {
  Checker c;
  TypeEnv g = TypeEnv{}.with_var("x", ty("Int | Bool"));
  EXPECT_EQUIV(c.env_at({}, g, parse_expr("x"), int_type()), int_type());
}

TEST(Checker, EnvOfArgumentUsesWorra) {
  Checker c;
  Type t1 = ty("(Bool -> Bool) & (Int -> String | Int)");
  Type t2 = ty("Int | Bool");
  TypeEnv g = TypeEnv{}.with_var("f", t1).with_var("x", t2);
  auto e = parse_expr("f x");
  EXPECT_EQUIV(c.env_at(path({L::Arg}), g, e, string_type()), mk_inter(int_type(), t2));
  EXPECT_EQUIV(c.env_at(path({L::Arg}), g, e, mk_neg(string_type())), t2);
  EXPECT_EQUIV(c.constr(path({L::Fun}), g, e, string_type()), mk_neg(mk_arrow(int_type(), mk_neg(string_type()))));
}

TEST(Checker, PairOfSameVariableIntersects) {
  Checker c;
  TypeEnv g = TypeEnv{}.with_var("x", ty("Int | Bool | Char"));
  TypeEnv r = c.refine_step(g, parse_expr("(x, x)"), ty("(Int | Bool, Int | Char)"));
  EXPECT_EQUIV(*r.var("x"), int_type());
}

TEST(Checker, RecordPaths) {
  Checker c;
  TypeEnv g = TypeEnv{}.with_var("x", ty("{a = Int | Bool ..}"));
  TypeEnv r = c.refine(g, parse_expr("x.a"), int_type());
  EXPECT_EQUIV(*r.var("x"), ty("{a = Int ..}"));
  r = c.refine(g, parse_expr("{x without a}"), ty("{b = Int ..}"));
  EXPECT_EQUIV(*r.var("x"), ty("{a = Int | Bool, b = Int ..}"));
  r = c.refine(TypeEnv{}.with_var("y", ty("Int | Bool")), parse_expr("{{} with a = y}"), ty("{a = Bool ..}"));
  EXPECT_EQUIV(*r.var("y"), bool_type());
}

TEST(Checker, UpdateThenTestRefinesOtherFields) {
  Checker c;
  TypeEnv g = TypeEnv{}.with_var("x", ty("{..}"));
  auto e = parse_expr("if {x with a = 0} is {a = Int, b = Bool ..} | {a = Bool, b = Int ..} then x.b else false");
  EXPECT_EQUIV(c.type_of(g, e), bool_type());
  TypeEnv r = c.refine(g, e->kid(0), e->test);
  EXPECT_EQUIV(*r.var("x"), ty("{b = Bool ..}"));
}

TEST(Checker, IterationCountDefaultsToTwiceTheDepth) {
  Checker c;
  EXPECT_EQ(c.iterations_for(parse_expr("x")), 2);
  EXPECT_EQ(c.iterations_for(parse_expr("(f x, g x)")), 6);
  c.config().iters = 1;
  EXPECT_EQ(c.iterations_for(parse_expr("(f x, g x)")), 1);
}

namespace {

struct Code10 {
  Checker c;
  TypeEnv g;
  ExprPtr e;
  Type t;
  Code10() : c({}, occt::testing::corpus_builtins("code10.occ")) {
    ParseContext ctx = ctx_with({"f", "g"});
    g = TypeEnv{}.with_var("x", any());
    e = parse_expr("(f x, g x)", ctx);
    t = ty("(Int, Bool)");
  }
};

}  // namespace

TEST(Refinement, Code10ReachesEmptyWithinTwoSteps) {
  Code10 k;
  TypeEnv one = k.c.refine_step(k.g, k.e, k.t);
  TypeEnv two = k.c.refine_step(one, k.e, k.t);
  EXPECT_EQUIV(*two.var("x"), empty());
  EXPECT_TRUE(two.bottom());
  EXPECT_TRUE(k.c.refine(k.g, k.e, k.t).bottom());
  TypeEnv neg = k.c.refine(k.g, k.e, mk_neg(k.t));
  EXPECT_EQUIV(*neg.var("x"), mk_neg(int_type()));
}

TEST(Refinement, FirstStepAlreadyEmptiesTheTestedPair) {
  // The static type of the pair is (Bool, Bool), disjoint from (Int, Bool).
  Code10 k;
  EXPECT_EQUIV(k.c.type_of(k.g, k.e), ty("(Bool, Bool)"));
  TypeEnv one = k.c.refine_step(k.g, k.e, k.t);
  EXPECT_EQUIV(*one.occurrence(k.e), empty());
  EXPECT_EQUIV(*one.var("x"), empty());
}

TEST(Refinement, EnvBelowStaticType) {
  Code10 k;
  for (const auto& o : sub_occurrences(k.e))
    for (const auto& p : o.paths) EXPECT_SUBTYPE(k.c.env_at(p, k.g, k.e, k.t), k.c.type_of(k.g, o.expr));
}

TEST(Refinement, MonotoneAndShrinkingOnCorpus) {
  std::vector<std::pair<TypeEnv, ExprPtr>> cases;
  for (const char* f : {"code01.occ", "code02.occ", "code07.occ", "code08.occ", "code09.occ", "code10.occ"}) {
    Session s({}, occt::testing::corpus_builtins(f));
    s.checker().on_type_case = [&](const TypeEnv& g, const ExprPtr& e) {
      if (cases.size() < 400) cases.emplace_back(g, e);
    };
    occt::testing::check_corpus(s, f);
    s.checker().on_type_case = nullptr;
    for (const auto& [g, e] : cases) {
      for (Type t : {e->test, mk_neg(e->test)}) {
        TypeEnv prev = g;
        for (int i = 0; i < 4; ++i) {
          TypeEnv next = s.checker().refine_step(prev, e->kid(0), t);
          for (const auto& o : sub_occurrences(e->kid(0))) {
            Type now = o.expr->kind == Expr::Kind::Var ? *next.var(o.expr->name) : *next.occurrence(o.expr);
            std::optional<Type> before =
                o.expr->kind == Expr::Kind::Var ? prev.var(o.expr->name) : prev.occurrence(o.expr);
            if (before) EXPECT_SUBTYPE(now, *before);
            if (i == 0) EXPECT_SUBTYPE(now, s.checker().type_of(g, o.expr));
          }
          prev = next;
        }
      }
    }
    cases.clear();
  }
}

TEST(Checker, OccurrenceEntryIntersectsWithRetyping) {
  Checker c;
  auto fx = parse_expr("f x");
  TypeEnv g = TypeEnv{}.with_var("f", ty("Int -> Int | Bool")).with_var("x", int_type());
  TypeEnv h = g.with_occurrence(fx, ty("Bool | Char"));
  Type t = c.type_of(h, fx);
  EXPECT_EQUIV(t, bool_type());
  EXPECT_SUBTYPE(t, *h.occurrence(fx));
  EXPECT_SUBTYPE(t, c.type_of(h.without_occurrence(fx), fx));
}

TEST(Checker, TypeCaseCoversBothBranches) {
  Checker c;
  TypeEnv g = TypeEnv{}.with_var("x", ty("Int | Bool"));
  auto e = parse_expr("if x is Int then incr x else lnot x", ctx_with({"incr", "lnot"}));
  Type t = c.type_of(g, e);
  EXPECT_SUBTYPE(c.type_of(c.refine(g, e->kid(0), int_type()), e->kid(1)), t);
  EXPECT_SUBTYPE(c.type_of(c.refine(g, e->kid(0), mk_neg(int_type())), e->kid(2)), t);
}

TEST(Checker, UnreachableBranchWarning) {
  Checker c;
  TypeEnv g = TypeEnv{}.with_var("x", int_type());
  c.type_of(g, parse_expr("if x is Int then 1 else\n 2"));
  auto w = c.warnings();
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0].span.line, 2);
  EXPECT_EQ(w[0].message, "unreachable expression");
}

TEST(Checker, BranchLiveInSomePassIsNotReported) {
  Checker c;
  c.type_of({}, parse_expr("fun (x : Int | Bool) -> if x is Int then 1 else 2"));
  EXPECT_TRUE(c.warnings().empty());
}
