#include <gtest/gtest.h>

#include <random>

#include "occt/ast.hpp"
#include "occt/parser.hpp"
#include "occt/subtype.hpp"

using namespace occt;

namespace {

ParseContext builtins_ctx() {
  ParseContext c;
  c.builtins = {"incr", "lnot"};
  return c;
}

Step step(Step::Letter l, std::string label = {}) { return {l, std::move(label)}; }

}  // namespace

TEST(Parse, LambdaWithInferredCodomain) {
  auto e = parse_expr("fun (x : Int | Bool) -> if x is Int then incr x else lnot x", builtins_ctx());
  ASSERT_EQ(e->kind, Expr::Kind::Lambda);
  ASSERT_EQ(e->arrows.size(), 1u);
  EXPECT_TRUE(equiv(e->arrows[0].dom, mk_union(int_type(), bool_type())));
  EXPECT_FALSE(e->arrows[0].cod.has_value());
  const auto& body = e->kid(0);
  ASSERT_EQ(body->kind, Expr::Kind::TypeCase);
  EXPECT_EQ(body->test, int_type());
  EXPECT_EQ(body->kid(1)->kid(0)->kind, Expr::Kind::BuiltinRef);
}

TEST(Parse, FieldTest) {
  auto e = parse_expr("if x.nodeType is 9 then false else true");
  ASSERT_EQ(e->kind, Expr::Kind::TypeCase);
  EXPECT_EQ(e->kid(0)->kind, Expr::Kind::FieldSel);
  EXPECT_EQ(e->kid(0)->label, "nodeType");
  EXPECT_EQ(e->test, mk_int(9));
}

TEST(Parse, PairOfVariables) {
  auto e = parse_expr("(x, x)");
  ASSERT_EQ(e->kind, Expr::Kind::Pair);
  EXPECT_EQ(e->kid(0)->kind, Expr::Kind::Var);
  EXPECT_EQ(e->kid(1)->name, "x");
}

TEST(Parse, MultiArrowAnnotation) {
  auto e = parse_expr("fun (x : Int -> Int ; Any -> Bool) -> x");
  ASSERT_EQ(e->arrows.size(), 2u);
  EXPECT_EQ(*e->arrows[1].cod, bool_type());
  auto f = parse_expr("fun (f : Int -> Int) -> f");
  ASSERT_EQ(f->arrows.size(), 1u);
  EXPECT_EQ(f->arrows[0].dom, mk_arrow(int_type(), int_type()));
}

TEST(Parse, Records) {
  auto e = parse_expr("{ {a = 1, b = true} with c = 'x' }");
  ASSERT_EQ(e->kind, Expr::Kind::FieldUpdate);
  EXPECT_EQ(e->label, "c");
  EXPECT_EQ(e->kid(0)->kid(0)->kind, Expr::Kind::FieldUpdate);
  auto d = parse_expr("{ r without a }.b");
  EXPECT_EQ(d->kind, Expr::Kind::FieldSel);
  EXPECT_EQ(d->kid(0)->kind, Expr::Kind::FieldDel);
}

TEST(Parse, ProgramWithTypesAndComments) {
  ParseContext ctx;
  auto decls = parse_program(R"(
(* a (* nested *) comment *)
type L = Nil | (Int, L)
let xs = (1, (2, nil))
let y = let z = xs in fst z
xs
)", ctx);
  ASSERT_EQ(decls.size(), 4u);
  EXPECT_EQ(decls[0].kind, Decl::Kind::Types);
  EXPECT_EQ(decls[1].kind, Decl::Kind::Let);
  EXPECT_EQ(decls[2].expr->kind, Expr::Kind::Let);
  EXPECT_EQ(decls[3].kind, Decl::Kind::Expr);
  EXPECT_TRUE(ctx.types.count("L"));
  EXPECT_TRUE(ctx.globals.count("xs"));
}

TEST(Parse, GlobalsShadowBuiltins) {
  ParseContext ctx = builtins_ctx();
  auto decls = parse_program("let incr = fun (x : Int) -> x\nlet y = incr 1", ctx);
  EXPECT_EQ(decls[1].expr->kid(0)->kind, Expr::Kind::Var);
}

TEST(Parse, SyntaxErrorsCarryPosition) {
  try {
    parse_expr("fun (x : Int) ->\n  if x then 1 else 2");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line, 2);
    EXPECT_EQ(e.col, 7);
  }
  EXPECT_THROW(parse_type("Int |"), SyntaxError);
  EXPECT_THROW(parse_type("X where X = X | X"), SyntaxError);
  EXPECT_THROW(parse_expr("(* open"), SyntaxError);
}

TEST(Parse, Types) {
  EXPECT_EQ(parse_type("Int | Bool"), mk_union(int_type(), bool_type()));
  EXPECT_EQ(parse_type("Int -> Int -> Bool"), mk_arrow(int_type(), mk_arrow(int_type(), bool_type())));
  EXPECT_EQ(parse_type("~Int & Any"), mk_neg(int_type()));
  EXPECT_EQ(parse_type("(Int, true)"), mk_product(int_type(), true_type()));
  EXPECT_EQ(parse_type("{a = Int, b =? Bool}"),
            mk_record(RecordRow::closed({{"a", int_type()}, {"b", optional(bool_type())}})));
  EXPECT_EQ(parse_type("{ nodeType=9 ..}"), mk_record(RecordRow::open({{"nodeType", mk_int(9)}})));
  EXPECT_EQ(parse_type("Int \\ 3"), mk_diff(int_type(), mk_int(3)));
}

TEST(Occ, Paths) {
  auto app = parse_expr("x1 x2");
  EXPECT_EQ(occ(app, {step(Step::Letter::Fun)})->name, "x1");
  auto pair = parse_expr("(a, b)");
  EXPECT_EQ(occ(pair, {step(Step::Letter::Right)})->name, "b");
  auto proj = parse_expr("fst e");
  EXPECT_EQ(occ(proj, {step(Step::Letter::First)})->name, "e");
  auto sel = parse_expr("r.l");
  EXPECT_EQ(occ(sel, {step(Step::Letter::Sel, "l")})->name, "r");
  EXPECT_THROW(occ(sel, {step(Step::Letter::Sel, "m")}), InvalidPath);
  EXPECT_THROW(occ(pair, {step(Step::Letter::Fun)}), InvalidPath);
  auto upd = parse_expr("{r with l = v}");
  EXPECT_EQ(occ(upd, {step(Step::Letter::Upd2, "l")})->name, "v");
}

TEST(Occ, SubOccurrences) {
  auto app = parse_expr("x1 x2");
  auto occs = sub_occurrences(app);
  ASSERT_EQ(occs.size(), 3u);
  EXPECT_TRUE(occs[0].paths[0].empty());
  auto pair = sub_occurrences(parse_expr("(x, x)"));
  ASSERT_EQ(pair.size(), 2u);
  EXPECT_EQ(pair[1].paths.size(), 2u);
  auto c = sub_occurrences(parse_expr("42"));
  ASSERT_EQ(c.size(), 1u);
  // Closed under occ, and never under binders.
  auto e = parse_expr("(f (fun (y : Int) -> y) x, snd {r with a = x}.b)");
  for (const auto& o : sub_occurrences(e))
    for (const auto& p : o.paths) {
      EXPECT_TRUE(expr_equal(occ(e, p), o.expr));
      for (std::size_t k = 0; k < p.size(); ++k) EXPECT_NO_THROW(occ(e, Path(p.begin(), p.begin() + k)));
    }
}

TEST(ExprEqual, AlphaInsensitive) {
  EXPECT_TRUE(expr_equal(parse_expr("f x"), parse_expr("f x")));
  EXPECT_TRUE(expr_equal(parse_expr("fun (x : Int) -> x"), parse_expr("fun (y : Int) -> y")));
  EXPECT_FALSE(expr_equal(parse_expr("f x"), parse_expr("f y")));
  EXPECT_FALSE(expr_equal(parse_expr("fun (x : Int) -> y"), parse_expr("fun (y : Int) -> y")));
}

TEST(Substitute, RespectsShadowing) {
  auto e = parse_expr("(x, fun (x : Int) -> x)");
  auto r = substitute(e, "x", mk_const(Constant::integer(1)));
  EXPECT_TRUE(expr_equal(r, parse_expr("(1, fun (x : Int) -> x)")));
  EXPECT_EQ(free_vars(parse_expr("let y = x in (y, z)")), (std::set<std::string>{"x", "z"}));
}

TEST(Pretty, Examples) {
  EXPECT_EQ(pretty_type(mk_union(int_type(), bool_type())), "Int | Bool");
  EXPECT_EQ(pretty_type(parse_type("(Int -> true) & (~Int -> false)")), "(Int -> true) & (~Int -> false)");
  EXPECT_EQ(pretty_type(parse_type("Int -> Int -> Int")), "Int -> Int -> Int");
  EXPECT_EQ(pretty_type(parse_type("(Int -> Int) -> Int")), "(Int -> Int) -> Int");
  EXPECT_EQ(pretty_type(any()), "Any");
  EXPECT_EQ(pretty_type(empty()), "Empty");
  EXPECT_EQ(pretty_type(parse_type("{a = Int, b =? Bool ..}")), "{a = Int, b =? Bool ..}");
}

TEST(Pretty, RecursiveTypes) {
  Type list = parse_type("L where L = Nil | (Int, L)");
  std::string s = pretty_type(list);
  EXPECT_NE(s.find("where"), std::string::npos) << s;
  EXPECT_TRUE(equiv(parse_type(s), list)) << s;
}

namespace {

struct Gen {
  std::mt19937 rng{99};
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  Type type(int d) {
    switch (pick(d > 0 ? 12 : 6)) {
      case 0: return int_type();
      case 1: return mk_int(pick(5) - 2);
      case 2: return bool_type();
      case 3: return pick(2) ? nil_type() : mk_char('a' + pick(3));
      case 4: return pick(2) ? mk_string("s") : string_type();
      case 5: return any();
      case 6: return mk_union(type(d - 1), type(d - 1));
      case 7: return mk_inter(type(d - 1), type(d - 1));
      case 8: return mk_neg(type(d - 1));
      case 9: return mk_arrow(type(d - 1), type(d - 1));
      case 10: return mk_product(type(d - 1), type(d - 1));
      default: {
        std::map<std::string, Type> fs;
        if (pick(2)) fs["a"] = type(d - 1);
        if (pick(2)) fs["b"] = optional(type(d - 1));
        return mk_record(pick(2) ? RecordRow::open(fs) : RecordRow::closed(fs));
      }
    }
  }

  ExprPtr expr(int d, std::vector<std::string>& scope) {
    int k = pick(d > 0 ? 13 : 3);
    switch (k) {
      case 0: {
        switch (pick(4)) {
          case 0: return mk_const(Constant::integer(pick(7) - 3));
          case 1: return mk_const(Constant::atom(pick(2) ? "true" : "nil"));
          case 2: return mk_const(Constant::character(pick(2) ? 'q' : '\n'));
          default: return mk_const(Constant::string("a\"b"));
        }
      }
      case 1:
        return scope.empty() ? mk_var("g") : mk_var(scope[pick(scope.size())]);
      case 2: return mk_empty_record();
      case 3: return mk_app(expr(d - 1, scope), expr(d - 1, scope));
      case 4: {
        std::string x = "v" + std::to_string(scope.size());
        scope.push_back(x);
        std::vector<Arrow> arrows;
        if (pick(2))
          arrows = {{type(1), std::nullopt}};
        else
          arrows = {{type(1), type(1)}, {type(1), type(1)}};
        auto body = expr(d - 1, scope);
        scope.pop_back();
        return mk_lambda(arrows, x, body);
      }
      case 5: return mk_proj(1 + pick(2), expr(d - 1, scope));
      case 6: return mk_pair(expr(d - 1, scope), expr(d - 1, scope));
      case 7: return mk_typecase(expr(d - 1, scope), type(1), expr(d - 1, scope), expr(d - 1, scope));
      case 8: return mk_field_update(expr(d - 1, scope), "l", expr(d - 1, scope));
      case 9: return mk_field_del(expr(d - 1, scope), "l");
      case 10: return mk_field_sel(expr(d - 1, scope), "m");
      default: {
        std::string x = "w" + std::to_string(scope.size());
        auto bound = expr(d - 1, scope);
        scope.push_back(x);
        auto body = expr(d - 1, scope);
        scope.pop_back();
        return mk_let(x, bound, body);
      }
    }
  }
};

}  // namespace

TEST(PrettyProperty, TypeRoundTrip) {
  Gen g;
  for (int i = 0; i < 400; ++i) {
    Type t = g.type(3);
    std::string s = pretty_type(t);
    Type back = parse_type(s);
    EXPECT_TRUE(equiv(back, t)) << s;
  }
}

TEST(PrettyProperty, ExprRoundTrip) {
  Gen g;
  for (int i = 0; i < 300; ++i) {
    std::vector<std::string> scope;
    auto e = g.expr(4, scope);
    std::string s = print_expr(e);
    ExprPtr back;
    ASSERT_NO_THROW(back = parse_expr(s)) << s;
    EXPECT_TRUE(expr_equal(back, e) || print_expr(back) == s) << s << "\n" << print_expr(back);
  }
}
