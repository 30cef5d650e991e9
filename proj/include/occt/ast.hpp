#pragma once

// Abstract syntax of the source language and occurrence paths.

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "occt/types.hpp"

namespace occt {

/// Source location: 1-based line, 0-based columns, `end_col` exclusive.
struct Span {
  int line = 0;
  int col = 0;
  int end_line = 0;
  int end_col = 0;
};

struct Constant {
  enum class Kind { Int, Atom, Char, String };
  Kind kind = Kind::Int;
  std::int64_t n = 0;
  char32_t ch = 0;
  std::string s;  // atom name or string contents

  static Constant integer(std::int64_t v) { return {Kind::Int, v, 0, {}}; }
  static Constant atom(std::string a) { return {Kind::Atom, 0, 0, std::move(a)}; }
  static Constant character(char32_t c) { return {Kind::Char, 0, c, {}}; }
  static Constant string(std::string v) { return {Kind::String, 0, 0, std::move(v)}; }

  /// The singleton type of the constant.
  Type type() const;
  friend bool operator==(const Constant&, const Constant&) = default;
};

/// A lambda annotation: an intersection of arrows. An arrow without a
/// codomain asks the checker to infer one.
struct Arrow {
  Type dom;
  std::optional<Type> cod;
  friend bool operator==(const Arrow&, const Arrow&) = default;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind {
    Const,
    Var,
    App,
    Lambda,
    Proj,
    Pair,
    TypeCase,
    EmptyRecord,
    FieldUpdate,
    FieldDel,
    FieldSel,
    Let,
    BuiltinRef,
  };

  Kind kind = Kind::Const;
  Span span;
  Constant constant;         // Const
  std::string name;          // Var, BuiltinRef, Lambda/Let binder
  std::string label;         // FieldUpdate, FieldDel, FieldSel
  int index = 1;             // Proj: 1 or 2
  std::vector<Arrow> arrows; // Lambda
  Type test;                 // TypeCase
  // App: fun, arg. Lambda: body. Proj, FieldDel, FieldSel: operand.
  // Pair: left, right. TypeCase: scrutinee, then, else.
  // FieldUpdate: record, value. Let: bound, body.
  std::vector<ExprPtr> kids;
  std::size_t hash = 0;  // structural, blind to variable names

  const ExprPtr& kid(std::size_t i) const { return kids.at(i); }
};

// Constructors. Each computes the structural hash.
ExprPtr mk_const(Constant c, Span s = {});
ExprPtr mk_var(std::string x, Span s = {});
ExprPtr mk_builtin(std::string x, Span s = {});
ExprPtr mk_app(ExprPtr f, ExprPtr a, Span s = {});
ExprPtr mk_lambda(std::vector<Arrow> arrows, std::string x, ExprPtr body, Span s = {});
ExprPtr mk_proj(int i, ExprPtr e, Span s = {});
ExprPtr mk_pair(ExprPtr l, ExprPtr r, Span s = {});
ExprPtr mk_typecase(ExprPtr scrutinee, Type t, ExprPtr then_e, ExprPtr else_e, Span s = {});
ExprPtr mk_empty_record(Span s = {});
ExprPtr mk_field_update(ExprPtr rec, std::string label, ExprPtr value, Span s = {});
ExprPtr mk_field_del(ExprPtr rec, std::string label, Span s = {});
ExprPtr mk_field_sel(ExprPtr rec, std::string label, Span s = {});
ExprPtr mk_let(std::string x, ExprPtr bound, ExprPtr body, Span s = {});

/// Structural equality, insensitive to the names of bound variables.
bool expr_equal(const ExprPtr& a, const ExprPtr& b);

struct ExprHash {
  std::size_t operator()(const ExprPtr& e) const { return e->hash; }
};
struct ExprEq {
  bool operator()(const ExprPtr& a, const ExprPtr& b) const { return expr_equal(a, b); }
};

std::set<std::string> free_vars(const ExprPtr& e);
/// Number of nodes on the longest root-to-leaf chain.
int depth(const ExprPtr& e);
/// Is `e` a value: a constant, lambda, builtin, pair of values or a record
/// built from `{}` by updates with values.
bool is_value(const ExprPtr& e);

/// Replace free occurrences of `x` by the closed expression `v`.
ExprPtr substitute(const ExprPtr& e, const std::string& x, const ExprPtr& v);

/// `e` with its children replaced, everything else kept.
ExprPtr with_kids(const ExprPtr& e, std::vector<ExprPtr> kids);

// Paths.

struct Step {
  enum class Letter { Fun, Arg, Left, Right, First, Second, Sel, Del, Upd1, Upd2 };
  Letter letter = Letter::Fun;
  std::string label;  // Sel, Del, Upd1, Upd2
  friend bool operator==(const Step&, const Step&) = default;
  friend auto operator<=>(const Step&, const Step&) = default;
};

using Path = std::vector<Step>;

class InvalidPath : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The sub-expression of `e` at `path`.
ExprPtr occ(const ExprPtr& e, const Path& path);

/// A sub-occurrence and every path leading to it.
struct Occurrence {
  ExprPtr expr;
  std::vector<Path> paths;
};

/// All sub-occurrences of `e`, grouping paths to equal expressions, in
/// order of first appearance (pre-order).
std::vector<Occurrence> sub_occurrences(const ExprPtr& e);

std::string path_to_string(const Path& p);

}  // namespace occt
