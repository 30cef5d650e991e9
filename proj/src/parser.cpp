#include "occt/parser.hpp"

#include "lexer.hpp"

namespace occt {

namespace {

using detail::Token;
using detail::TokenStream;

class Parser {
 public:
  Parser(const std::string& src, const ParseContext& ctx) : ts_(detail::lex(src)), ctx_(ctx) {}

  std::vector<Decl> program(ParseContext& out) {
    std::vector<Decl> decls;
    while (!ts_.at_end()) {
      const Token& start = ts_.peek();
      Decl d;
      if (ts_.is_kw("type")) {
        d.kind = Decl::Kind::Types;
        d.types = type_decl();
        for (const auto& [n, t] : d.types) ctx_.types[n] = t;
      } else if (ts_.is_kw("let") && !is_let_in()) {
        ts_.next();
        d.kind = Decl::Kind::Let;
        d.name = ts_.expect_ident("a name");
        ts_.expect_sym("=");
        d.expr = expr();
        ctx_.globals.insert(d.name);
      } else {
        d.kind = Decl::Kind::Expr;
        d.expr = expr();
      }
      d.span = span_from(start);
      decls.push_back(std::move(d));
    }
    out.types = ctx_.types;
    out.globals = ctx_.globals;
    return decls;
  }

  ExprPtr single_expr() {
    auto e = expr();
    if (!ts_.at_end()) ts_.fail("unexpected input after expression");
    return e;
  }

 private:
  // A top-level `let` is a declaration unless an `in` closes it. Scan ahead
  // for the matching `in`, skipping nested let/in pairs.
  bool is_let_in() {
    std::size_t save = ts_.position();
    int nest = 0;
    bool found = false;
    ts_.next();
    while (!ts_.at_end()) {
      if (ts_.is_kw("let")) {
        ++nest;
      } else if (ts_.is_kw("in")) {
        if (nest == 0) {
          found = true;
          break;
        }
        --nest;
      } else if (ts_.is_kw("type")) {
        break;
      }
      ts_.next();
      // A new top-level declaration starts a line at column 0.
      if (nest == 0 && ts_.is_kw("let") && ts_.peek().col == 0) break;
    }
    ts_.reset(save);
    return found;
  }

  std::vector<std::pair<std::string, Type>> type_decl() {
    ts_.expect_kw("type");
    const Token& start = ts_.peek();
    std::vector<std::pair<std::string, TypeTermPtr>> eqs;
    do {
      std::string name = ts_.expect_ident("type name");
      ts_.expect_sym("=");
      eqs.emplace_back(name, detail::parse_type_term(ts_));
    } while (ts_.accept_kw("and"));
    std::vector<Type> solved;
    try {
      solved = mk_recursive(eqs, ctx_.types);
    } catch (const ContractivityViolation& e) {
      throw SyntaxError(e.what(), start.line, start.col);
    } catch (const std::invalid_argument& e) {
      throw SyntaxError(e.what(), start.line, start.col);
    }
    std::vector<std::pair<std::string, Type>> out;
    for (std::size_t i = 0; i < eqs.size(); ++i) out.emplace_back(eqs[i].first, solved[i]);
    return out;
  }

  Type type() { return detail::resolve_type(detail::parse_type_with_where(ts_), ctx_.types); }

  Span span_from(const Token& start) const {
    const Token& end = ts_.prev();
    return {start.line, start.col, end.end_line, end.end_col};
  }

  ExprPtr expr() {
    const Token& start = ts_.peek();
    if (ts_.accept_kw("fun")) return lambda(start);
    if (ts_.accept_kw("if")) {
      auto scrutinee = expr();
      ts_.expect_kw("is");
      Type t = type();
      ts_.expect_kw("then");
      auto a = expr();
      ts_.expect_kw("else");
      auto b = expr();
      return mk_typecase(scrutinee, t, a, b, span_from(start));
    }
    if (ts_.accept_kw("let")) {
      std::string x = ts_.expect_ident("a name");
      ts_.expect_sym("=");
      auto bound = expr();
      ts_.expect_kw("in");
      locals_.push_back(x);
      auto body = expr();
      locals_.pop_back();
      return mk_let(x, bound, body, span_from(start));
    }
    return app();
  }

  ExprPtr lambda(const Token& start) {
    std::string x;
    std::vector<Arrow> arrows;
    if (ts_.accept_sym("(")) {
      x = ts_.expect_ident("a parameter name");
      ts_.expect_sym(":");
      arrows = annotation();
      ts_.expect_sym(")");
    } else {
      x = ts_.expect_ident("a parameter");
      arrows.push_back({any(), std::nullopt});
    }
    ts_.expect_sym("->");
    locals_.push_back(x);
    auto body = expr();
    locals_.pop_back();
    return mk_lambda(std::move(arrows), x, body, span_from(start));
  }

  std::vector<Arrow> annotation() {
    const Token& first = ts_.peek();
    Type t = type();
    if (!ts_.is_sym(";")) return {{t, std::nullopt}};
    std::vector<Arrow> arrows;
    arrows.push_back(as_arrow(t, first));
    while (ts_.accept_sym(";")) {
      if (ts_.is_sym(")")) break;
      const Token& at = ts_.peek();
      arrows.push_back(as_arrow(type(), at));
    }
    return arrows;
  }

  static Arrow as_arrow(Type t, const Token& at) {
    const Descr& d = descr(t);
    bool single = d.ints.is_empty() && d.atoms.is_empty() && d.chars.is_empty() && d.strings.is_empty() &&
                  !d.undef && d.products.is_none() && d.records.is_none() && d.arrows.clauses.size() == 1 &&
                  d.arrows.clauses[0].pos.size() == 1 && d.arrows.clauses[0].neg.empty();
    if (!single) throw SyntaxError("annotation items must be arrow types", at.line, at.col);
    const ArrowAtom& a = TypeStore::instance().arrow(d.arrows.clauses[0].pos[0]);
    return {a.dom, a.cod};
  }

  bool starts_atom() const {
    const Token& t = ts_.peek();
    // A token opening a line at column 0 begins the next declaration.
    if (t.col == 0 && t.line > ts_.prev().end_line) return false;
    switch (t.kind) {
      case Token::Kind::Int:
      case Token::Kind::Char:
      case Token::Kind::String:
        return true;
      case Token::Kind::Ident:
        return !detail::is_keyword(t.text);
      case Token::Kind::Sym:
        return t.text == "(" || t.text == "{";
      default:
        return false;
    }
  }

  ExprPtr app() {
    const Token& start = ts_.peek();
    ExprPtr head;
    if (ts_.accept_kw("fst"))
      head = mk_proj(1, postfix(), span_from(start));
    else if (ts_.accept_kw("snd"))
      head = mk_proj(2, postfix(), span_from(start));
    else
      head = postfix();
    while (starts_atom()) head = mk_app(head, postfix(), span_from(start));
    return head;
  }

  ExprPtr postfix() {
    const Token& start = ts_.peek();
    auto e = atom();
    while (ts_.is_sym(".") && ts_.peek(1).kind == Token::Kind::Ident) {
      ts_.next();
      std::string l = ts_.next().text;
      e = mk_field_sel(e, l, span_from(start));
    }
    return e;
  }

  ExprPtr atom() {
    const Token& t = ts_.peek();
    switch (t.kind) {
      case Token::Kind::Int:
        ts_.next();
        return mk_const(Constant::integer(t.n), span_from(t));
      case Token::Kind::Char:
        ts_.next();
        return mk_const(Constant::character(t.ch), span_from(t));
      case Token::Kind::String:
        ts_.next();
        return mk_const(Constant::string(t.text), span_from(t));
      case Token::Kind::Ident: {
        if (detail::is_keyword(t.text)) ts_.fail("expected an expression");
        ts_.next();
        if (t.text == "true" || t.text == "false" || t.text == "nil")
          return mk_const(Constant::atom(t.text), span_from(t));
        return name(t.text, span_from(t));
      }
      default:
        break;
    }
    if (ts_.accept_sym("(")) {
      auto a = expr();
      if (ts_.accept_sym(",")) {
        auto b = expr();
        ts_.expect_sym(")");
        return mk_pair(a, b, span_from(t));
      }
      ts_.expect_sym(")");
      return a;
    }
    if (ts_.accept_sym("{")) return record(t);
    ts_.fail("expected an expression");
  }

  ExprPtr name(const std::string& x, Span s) const {
    for (const auto& l : locals_)
      if (l == x) return mk_var(x, s);
    if (!ctx_.globals.count(x) && ctx_.builtins.count(x)) return mk_builtin(x, s);
    return mk_var(x, s);
  }

  ExprPtr record(const Token& start) {
    if (ts_.accept_sym("}")) return mk_empty_record(span_from(start));
    if (ts_.peek().kind == Token::Kind::Ident && !detail::is_keyword(ts_.peek().text) && ts_.is_sym("=", 1)) {
      ExprPtr r = mk_empty_record(span_from(start));
      do {
        if (ts_.is_sym("}")) break;
        std::string l = ts_.expect_ident("field label");
        ts_.expect_sym("=");
        r = mk_field_update(r, l, expr(), span_from(start));
      } while (ts_.accept_sym(","));
      ts_.expect_sym("}");
      return relocate(r, span_from(start));
    }
    auto r = expr();
    if (ts_.accept_kw("without")) {
      std::string l = ts_.expect_ident("field label");
      ts_.expect_sym("}");
      return mk_field_del(r, l, span_from(start));
    }
    ts_.expect_kw("with");
    do {
      std::string l = ts_.expect_ident("field label");
      ts_.expect_sym("=");
      r = mk_field_update(r, l, expr(), span_from(start));
    } while (ts_.accept_sym(","));
    ts_.expect_sym("}");
    return relocate(r, span_from(start));
  }

  static ExprPtr relocate(const ExprPtr& e, Span s) {
    Expr copy = *e;
    copy.span = s;
    return std::make_shared<const Expr>(std::move(copy));
  }

  TokenStream ts_;
  ParseContext ctx_;
  std::vector<std::string> locals_;
};

}  // namespace

std::vector<Decl> parse_program(const std::string& src, ParseContext& ctx) {
  Parser p(src, ctx);
  return p.program(ctx);
}

ExprPtr parse_expr(const std::string& src, const ParseContext& ctx) {
  Parser p(src, ctx);
  return p.single_expr();
}

Type parse_type(const std::string& src, const TypeBindings& names) {
  TokenStream ts(detail::lex(src));
  Type t = detail::resolve_type(detail::parse_type_with_where(ts), names);
  if (!ts.at_end()) ts.fail("unexpected input after type");
  return t;
}

}  // namespace occt
