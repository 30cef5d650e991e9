#include <map>

#include "lexer.hpp"

namespace occt::detail {

namespace {

using K = TypeTerm::Kind;

const std::map<std::string, Type (*)()>& builtin_types() {
  static const std::map<std::string, Type (*)()> m = {
      {"Int", int_type},         {"Bool", bool_type},   {"Char", char_type},
      {"String", string_type},   {"Any", any},          {"Empty", empty},
      {"True", true_type},       {"False", false_type}, {"Nil", nil_type},
      {"true", true_type},       {"false", false_type}, {"nil", nil_type},
      {"Undef", undef},          {"Atom", [] { return mk_atoms(BasicSet<std::string>::all()); }},
  };
  return m;
}

TypeTermPtr parse_arrow(TokenStream& ts);

TypeTermPtr parse_record(TokenStream& ts) {
  ts.expect_sym("{");
  std::vector<TypeTerm::Field> fields;
  bool open = false;
  TypeTermPtr rest;
  while (!ts.is_sym("}")) {
    if (ts.accept_sym("..")) {
      open = true;
      if (ts.accept_sym("=")) {
        rest = parse_arrow(ts);
      } else if (ts.accept_sym("=?")) {
        rest = TypeTerm::binary(K::Union, parse_arrow(ts), TypeTerm::of(undef()));
      }
      break;
    }
    TypeTerm::Field f;
    f.label = ts.expect_ident("field label");
    if (ts.accept_sym("=?"))
      f.optional = true;
    else
      ts.expect_sym("=");
    f.type = parse_arrow(ts);
    fields.push_back(std::move(f));
    if (!ts.accept_sym(",") && !ts.is_sym("..")) break;
  }
  ts.expect_sym("}");
  auto r = TypeTerm::record(std::move(fields), open);
  if (rest) {
    auto copy = std::make_shared<TypeTerm>(*r);
    copy->rest = rest;
    return copy;
  }
  return r;
}

TypeTermPtr parse_atom(TokenStream& ts) {
  const Token& t = ts.peek();
  switch (t.kind) {
    case Token::Kind::Int:
      ts.next();
      return TypeTerm::of(mk_int(t.n));
    case Token::Kind::Char:
      ts.next();
      return TypeTerm::of(mk_char(t.ch));
    case Token::Kind::String:
      ts.next();
      return TypeTerm::of(mk_string(t.text));
    case Token::Kind::Ident: {
      if (is_keyword(t.text)) ts.fail("expected a type");
      std::string name = ts.next().text;
      auto b = builtin_types().find(name);
      if (b != builtin_types().end()) return TypeTerm::of(b->second());
      return TypeTerm::var(name);
    }
    default:
      break;
  }
  if (ts.is_sym("{")) return parse_record(ts);
  if (ts.accept_sym("(")) {
    auto a = parse_arrow(ts);
    if (ts.accept_sym(",")) {
      auto b = parse_arrow(ts);
      ts.expect_sym(")");
      return TypeTerm::binary(K::Product, a, b);
    }
    ts.expect_sym(")");
    return a;
  }
  ts.fail("expected a type");
}

TypeTermPtr parse_neg(TokenStream& ts) {
  if (ts.accept_sym("~")) return TypeTerm::neg(parse_neg(ts));
  return parse_atom(ts);
}

TypeTermPtr parse_inter(TokenStream& ts) {
  auto t = parse_neg(ts);
  for (;;) {
    if (ts.accept_sym("&"))
      t = TypeTerm::binary(K::Inter, t, parse_neg(ts));
    else if (ts.accept_sym("\\"))
      t = TypeTerm::binary(K::Diff, t, parse_neg(ts));
    else
      return t;
  }
}

TypeTermPtr parse_union(TokenStream& ts) {
  auto t = parse_inter(ts);
  while (ts.accept_sym("|")) t = TypeTerm::binary(K::Union, t, parse_inter(ts));
  return t;
}

TypeTermPtr parse_arrow(TokenStream& ts) {
  auto t = parse_union(ts);
  if (ts.accept_sym("->")) return TypeTerm::binary(K::Arrow, t, parse_arrow(ts));
  return t;
}

}  // namespace

TypeTermPtr parse_type_term(TokenStream& ts) { return parse_arrow(ts); }

ParsedType parse_type_with_where(TokenStream& ts) {
  ParsedType p;
  p.line = ts.peek().line;
  p.col = ts.peek().col;
  p.body = parse_arrow(ts);
  if (ts.accept_kw("where")) {
    do {
      std::string name = ts.expect_ident("type name");
      ts.expect_sym("=");
      p.where.emplace_back(name, parse_arrow(ts));
    } while (ts.accept_kw("and"));
  }
  return p;
}

Type resolve_type(const ParsedType& p, const TypeBindings& names) {
  try {
    if (p.where.empty()) return resolve(p.body, names);
    auto eqs = p.where;
    eqs.emplace_back(" body", p.body);
    return mk_recursive(eqs, names).back();
  } catch (const ContractivityViolation& e) {
    throw SyntaxError(e.what(), p.line, p.col);
  } catch (const std::invalid_argument& e) {
    throw SyntaxError(e.what(), p.line, p.col);
  }
}

}  // namespace occt::detail
