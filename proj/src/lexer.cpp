#include "lexer.hpp"

#include <cctype>

namespace occt::detail {

namespace {

class Lexer {
 public:
  explicit Lexer(const std::string& s) : src_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.col = col_;
      if (i_ >= src_.size()) {
        t.kind = Token::Kind::End;
        t.end_line = line_;
        t.end_col = col_;
        out.push_back(t);
        return out;
      }
      char c = src_[i_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Token::Kind::Ident;
        while (i_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_' ||
                                    src_[i_] == '\''))
          t.text += advance();
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && i_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_ + 1])))) {
        t.kind = Token::Kind::Int;
        std::string digits(1, advance());
        while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) digits += advance();
        try {
          t.n = std::stoll(digits);
        } catch (const std::out_of_range&) {
          throw SyntaxError("integer literal out of range", t.line, t.col);
        }
        t.text = digits;
      } else if (c == '\'') {
        t.kind = Token::Kind::Char;
        advance();
        t.ch = read_char(t);
        if (i_ >= src_.size() || src_[i_] != '\'') throw SyntaxError("unterminated character literal", t.line, t.col);
        advance();
      } else if (c == '"') {
        t.kind = Token::Kind::String;
        advance();
        while (i_ < src_.size() && src_[i_] != '"') {
          char32_t cp = read_char(t);
          append_utf8(t.text, cp);
        }
        if (i_ >= src_.size()) throw SyntaxError("unterminated string literal", t.line, t.col);
        advance();
      } else {
        t.kind = Token::Kind::Sym;
        static const char* multi[] = {"->", "=?", ".."};
        bool matched = false;
        for (const char* m : multi)
          if (src_.compare(i_, 2, m) == 0) {
            t.text += advance();
            t.text += advance();
            matched = true;
            break;
          }
        if (!matched) {
          static const std::string single = "(){},:;|&~\\=.";
          if (single.find(c) == std::string::npos)
            throw SyntaxError(std::string("unexpected character '") + c + "'", line_, col_);
          t.text += advance();
        }
      }
      t.end_line = line_;
      t.end_col = col_;
      out.push_back(std::move(t));
    }
  }

 private:
  char advance() {
    char c = src_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 0;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    for (;;) {
      while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) advance();
      if (src_.compare(i_, 2, "(*") != 0) return;
      int line = line_, col = col_;
      int nest = 0;
      do {
        if (i_ >= src_.size()) throw SyntaxError("unterminated comment", line, col);
        if (src_.compare(i_, 2, "(*") == 0) {
          ++nest;
          advance();
          advance();
        } else if (src_.compare(i_, 2, "*)") == 0) {
          --nest;
          advance();
          advance();
        } else {
          advance();
        }
      } while (nest > 0);
    }
  }

  char32_t read_char(const Token& t) {
    if (i_ >= src_.size()) throw SyntaxError("unterminated literal", t.line, t.col);
    unsigned char c = static_cast<unsigned char>(advance());
    if (c == '\\') {
      if (i_ >= src_.size()) throw SyntaxError("unterminated literal", t.line, t.col);
      char e = advance();
      switch (e) {
        case 'n': return '\n';
        case 't': return '\t';
        case 'r': return '\r';
        case '0': return 0;
        case '\\': return '\\';
        case '\'': return '\'';
        case '"': return '"';
        default: throw SyntaxError(std::string("unknown escape \\") + e, t.line, t.col);
      }
    }
    if (c < 0x80) return c;
    int extra = c >= 0xF0 ? 3 : c >= 0xE0 ? 2 : c >= 0xC0 ? 1 : -1;
    if (extra < 0) throw SyntaxError("invalid UTF-8", t.line, t.col);
    char32_t cp = c & (0x3F >> extra);
    for (int k = 0; k < extra; ++k) {
      if (i_ >= src_.size()) throw SyntaxError("invalid UTF-8", t.line, t.col);
      cp = (cp << 6) | (static_cast<unsigned char>(src_[i_++]) & 0x3F);
    }
    return cp;
  }

  static void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
  }

  const std::string& src_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 0;
};

}  // namespace

std::vector<Token> lex(const std::string& src) { return Lexer(src).run(); }

void TokenStream::expect_sym(const char* s) {
  if (!accept_sym(s)) fail(std::string("expected '") + s + "'");
}

void TokenStream::expect_kw(const char* s) {
  if (!accept_kw(s)) fail(std::string("expected '") + s + "'");
}

std::string TokenStream::expect_ident(const char* what) {
  if (peek().kind != Token::Kind::Ident || is_keyword(peek().text)) fail(std::string("expected ") + what);
  return next().text;
}

void TokenStream::fail(const std::string& msg) const {
  const Token& t = peek();
  std::string found = t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'";
  if (t.kind == Token::Kind::Char) found = "character literal";
  if (t.kind == Token::Kind::String) found = "string literal";
  throw SyntaxError(msg + ", found " + found, t.line, t.col);
}

bool is_keyword(const std::string& s) {
  static const std::set<std::string> kws = {"fun", "if",   "is",  "then", "else", "let",     "in",  "type",
                                            "and", "where", "with", "without", "fst", "snd"};
  return kws.count(s) > 0;
}

}  // namespace occt::detail
