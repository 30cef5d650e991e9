#pragma once

// Concrete syntax: parsing and printing of programs, expressions and types.
//
//   decl  ::= let x = e | type X = t (and Y = t)* | e
//   e     ::= fun (x : ann) -> e | if e is t then e else e | let x = e in e
//           | e e | fst e | snd e | e.l | (e, e) | (e) | c | x
//           | {} | {e with l = e} | {e without l} | {l = e, ...}
//   ann   ::= t                          domain only, codomain inferred
//           | t -> t ; t -> t ...        explicit intersection of arrows
//   t     ::= t -> t | t | t | t & t | t \ t | ~t | (t, t) | (t)
//           | {l = t, m =? t ..} | X | Int | Bool | ... | 42 | true | 'c' | "s"
//           | t where X = t and ...
//
// Comments are written (* ... *) and nest.

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "occt/ast.hpp"
#include "occt/types.hpp"

namespace occt {

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& msg, int line, int col)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
  int line;
  int col;
};

/// Names visible to the parser: declared types, builtin functions, and
/// top-level bindings (which shadow builtins of the same name).
struct ParseContext {
  TypeBindings types;
  std::set<std::string> builtins;
  std::set<std::string> globals;
};

struct Decl {
  enum class Kind { Let, Types, Expr };
  Kind kind = Kind::Expr;
  std::string name;                             // Let
  ExprPtr expr;                                 // Let, Expr
  std::vector<std::pair<std::string, Type>> types;  // Types
  Span span;
};

/// Parse a whole program. Type declarations and top-level names are added to
/// `ctx` as they are met.
std::vector<Decl> parse_program(const std::string& src, ParseContext& ctx);
ExprPtr parse_expr(const std::string& src, const ParseContext& ctx = {});
Type parse_type(const std::string& src, const TypeBindings& names = {});

/// Print an expression in the concrete syntax; re-parses to an equal AST.
std::string print_expr(const ExprPtr& e);

/// Render a type in the concrete syntax; re-parses to an equivalent type.
std::string pretty_type(Type t);

}  // namespace occt
