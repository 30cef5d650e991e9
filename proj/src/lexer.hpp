#pragma once

#include <string>
#include <vector>

#include "occt/ast.hpp"
#include "occt/parser.hpp"

namespace occt::detail {

struct Token {
  enum class Kind { Ident, Int, Char, String, Sym, End };
  Kind kind = Kind::End;
  std::string text;  // identifier, symbol, or decoded literal contents
  std::int64_t n = 0;
  char32_t ch = 0;
  int line = 1;
  int col = 0;
  int end_line = 1;
  int end_col = 0;
};

std::vector<Token> lex(const std::string& src);

/// Cursor over a token stream, shared by the type and expression parsers.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t k = 0) const {
    std::size_t i = pos_ + k;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  const Token& prev() const { return toks_[pos_ == 0 ? 0 : pos_ - 1]; }
  bool at_end() const { return peek().kind == Token::Kind::End; }

  bool is_sym(const char* s, std::size_t k = 0) const {
    return peek(k).kind == Token::Kind::Sym && peek(k).text == s;
  }
  bool is_kw(const char* s, std::size_t k = 0) const {
    return peek(k).kind == Token::Kind::Ident && peek(k).text == s;
  }
  bool accept_sym(const char* s) {
    if (!is_sym(s)) return false;
    next();
    return true;
  }
  bool accept_kw(const char* s) {
    if (!is_kw(s)) return false;
    next();
    return true;
  }
  void expect_sym(const char* s);
  void expect_kw(const char* s);
  std::string expect_ident(const char* what);

  [[noreturn]] void fail(const std::string& msg) const;

  std::size_t position() const { return pos_; }
  void reset(std::size_t p) { pos_ = p; }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

bool is_keyword(const std::string& s);

/// A type as written: a body plus the equations of a trailing `where`.
struct ParsedType {
  TypeTermPtr body;
  std::vector<std::pair<std::string, TypeTermPtr>> where;
  int line = 0;
  int col = 0;
};

/// Parse a type at the cursor. Identifiers that are not built-in type names
/// become variables of the returned term.
TypeTermPtr parse_type_term(TokenStream& ts);
ParsedType parse_type_with_where(TokenStream& ts);

/// Resolve a parsed type against named types, reporting failures as syntax
/// errors at the type's position.
Type resolve_type(const ParsedType& p, const TypeBindings& names);

}  // namespace occt::detail
