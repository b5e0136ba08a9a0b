#pragma once

// Text formats:
//
//   expr    ::= "0" | "top" | IDENT | LETTER "." expr | expr "+" expr
//             | expr "&" expr | ("mu"|"nu") IDENT "." expr | "(" expr ")"
//   formula ::= "ff" | "tt" | P | "~" P | IDENT | f "|" f | f "&" f | "O" f
//             | ("mu"|"nu") IDENT "." f | "(" f ")"  [ | f "->" f  | "~" f ]
//   header  ::= "alphabet" LETTER+ ";" | "props" PROP+ ";"
//   lasso   ::= LETTER* "(" LETTER+ ")"
//
// In powerset mode a letter is written as a set `{P,Q}`. `#` starts a
// comment that runs to the end of the line.

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rll/syntax.hpp"

namespace rll {

/// Lexical or syntax error with a 1-based source position.
class ParseError : public SyntaxError {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t col)
      : SyntaxError(std::to_string(line) + ":" + std::to_string(col) + ": " + msg), line_(line), col_(col) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return col_; }

 private:
  std::size_t line_;
  std::size_t col_;
};

namespace detail {

enum class Tok { Ident, Zero, Dot, Plus, Amp, Bar, Tilde, Arrow, LParen, RParen, LBrace, RBrace, Comma, Semi, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t col;
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const std::size_t l = line, cl = col;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      out.push_back({Tok::Arrow, "->", l, cl});
      advance(2);
      continue;
    }
    Tok k;
    switch (c) {
      case '0': k = Tok::Zero; break;
      case '.': k = Tok::Dot; break;
      case '+': k = Tok::Plus; break;
      case '&': k = Tok::Amp; break;
      case '|': k = Tok::Bar; break;
      case '~': k = Tok::Tilde; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '{': k = Tok::LBrace; break;
      case '}': k = Tok::RBrace; break;
      case ',': k = Tok::Comma; break;
      case ';': k = Tok::Semi; break;
      default: throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
    }
    out.push_back({k, std::string(1, c), l, cl});
    advance(1);
  }
  out.push_back({Tok::End, "end of input", line, col});
  return out;
}

class Cursor {
 public:
  explicit Cursor(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_word(std::string_view w) const { return at(Tok::Ident) && peek().text == w; }
  Token take() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  Token expect(Tok k, std::string_view what) {
    if (!at(k)) fail("expected " + std::string(what) + ", found '" + peek().text + "'");
    return take();
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().line, peek().col); }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

inline bool is_keyword(std::string_view w) {
  return w == "mu" || w == "nu" || w == "top" || w == "alphabet" || w == "props";
}

// Parses `{P,Q}` into a powerset letter; the opening brace is current.
inline Letter parse_set_letter(Cursor& c, const Alphabet& a) {
  const Token open = c.expect(Tok::LBrace, "'{'");
  if (!a.is_powerset()) throw ParseError("set letters need a 'props' alphabet", open.line, open.col);
  std::set<std::size_t> props;
  if (!c.at(Tok::RBrace)) {
    while (true) {
      const Token p = c.expect(Tok::Ident, "proposition");
      auto id = a.find_prop(p.text);
      if (!id) throw ParseError("undeclared proposition '" + p.text + "'", p.line, p.col);
      props.insert(id->id);
      if (c.at(Tok::Comma)) {
        c.take();
        continue;
      }
      break;
    }
  }
  c.expect(Tok::RBrace, "'}'");
  return a.letter_of_set(props);
}

class ExprParser {
 public:
  ExprParser(Cursor& c, const Alphabet& a) : c_(c), a_(a) {}

  Expr expr() {
    if (c_.at_word("mu") || c_.at_word("nu")) return binder();
    Expr l = meet();
    if (c_.at(Tok::Plus)) {
      c_.take();
      return Expr::sum(std::move(l), expr());
    }
    return l;
  }

 private:
  Expr binder() {
    const bool least = c_.take().text == "mu";
    const Token x = c_.expect(Tok::Ident, "binder variable");
    if (is_keyword(x.text)) throw ParseError("keyword '" + x.text + "' used as variable", x.line, x.col);
    c_.expect(Tok::Dot, "'.' after binder");
    return Expr::fix(least, x.text, expr());
  }

  Expr meet() {
    Expr l = unary();
    if (c_.at(Tok::Amp)) {
      c_.take();
      return Expr::meet(std::move(l), meet());
    }
    return l;
  }

  Expr unary() {
    if (c_.at_word("mu") || c_.at_word("nu")) return binder();
    if (c_.at(Tok::LBrace)) {
      const Letter l = parse_set_letter(c_, a_);
      c_.expect(Tok::Dot, "'.' after letter");
      return Expr::act(l, unary());
    }
    if (c_.at(Tok::Ident) && c_.peek(1).kind == Tok::Dot && !is_keyword(c_.peek().text)) {
      const Token t = c_.take();
      if (a_.is_powerset()) throw ParseError("letters must be written as sets in a 'props' alphabet", t.line, t.col);
      auto l = a_.find_letter(t.text);
      if (!l) throw ParseError("undeclared letter '" + t.text + "'", t.line, t.col);
      c_.take();
      return Expr::act(*l, unary());
    }
    return atom();
  }

  Expr atom() {
    if (c_.at(Tok::Zero)) {
      c_.take();
      return Expr::zero();
    }
    if (c_.at_word("top")) {
      c_.take();
      return Expr::top();
    }
    if (c_.at(Tok::Ident)) {
      const Token t = c_.take();
      if (is_keyword(t.text)) throw ParseError("unexpected keyword '" + t.text + "'", t.line, t.col);
      return Expr::var(t.text);
    }
    if (c_.at(Tok::LParen)) {
      c_.take();
      Expr e = expr();
      c_.expect(Tok::RParen, "')'");
      return e;
    }
    c_.fail("expected expression, found '" + c_.peek().text + "'");
  }

  Cursor& c_;
  const Alphabet& a_;
};

inline bool is_formula_keyword(std::string_view w) {
  return w == "mu" || w == "nu" || w == "ff" || w == "tt" || w == "O" || w == "props" || w == "alphabet";
}

class FormulaParser {
 public:
  FormulaParser(Cursor& c, const Alphabet& a) : c_(c), a_(a) {}

  Formula formula() {
    if (c_.at_word("mu") || c_.at_word("nu")) return binder();
    const Token start = c_.peek();
    Formula l = disj();
    if (c_.at(Tok::Arrow)) {
      c_.take();
      if (!is_closed(l)) throw ParseError("left side of '->' must be closed", start.line, start.col);
      return implies(l, formula());
    }
    return l;
  }

 private:
  Formula binder() {
    const bool least = c_.take().text == "mu";
    const Token x = c_.expect(Tok::Ident, "binder variable");
    if (is_formula_keyword(x.text) || a_.find_prop(x.text))
      throw ParseError("'" + x.text + "' cannot be used as a variable", x.line, x.col);
    c_.expect(Tok::Dot, "'.' after binder");
    Formula body = formula();
    return least ? Formula::mu(x.text, std::move(body)) : Formula::nu(x.text, std::move(body));
  }

  Formula disj() {
    Formula l = conj();
    if (c_.at(Tok::Bar)) {
      c_.take();
      return Formula::lor(std::move(l), disj());
    }
    return l;
  }

  Formula conj() {
    Formula l = unary();
    if (c_.at(Tok::Amp)) {
      c_.take();
      return Formula::land(std::move(l), conj());
    }
    return l;
  }

  Formula unary() {
    if (c_.at_word("mu") || c_.at_word("nu")) return binder();
    if (c_.at_word("O")) {
      c_.take();
      return Formula::next(unary());
    }
    if (c_.at(Tok::Tilde)) {
      const Token t = c_.take();
      Formula f = unary();
      if (!is_closed(f)) throw ParseError("negation of an open formula", t.line, t.col);
      return negate_formula(f);
    }
    return atom();
  }

  Formula atom() {
    if (c_.at_word("ff")) {
      c_.take();
      return Formula::bot();
    }
    if (c_.at_word("tt")) {
      c_.take();
      return Formula::top();
    }
    if (c_.at(Tok::Ident)) {
      const Token t = c_.take();
      if (is_formula_keyword(t.text)) throw ParseError("unexpected keyword '" + t.text + "'", t.line, t.col);
      if (auto p = a_.find_prop(t.text)) return Formula::prop(*p);
      return Formula::var(t.text);
    }
    if (c_.at(Tok::LParen)) {
      c_.take();
      Formula f = formula();
      c_.expect(Tok::RParen, "')'");
      return f;
    }
    c_.fail("expected formula, found '" + c_.peek().text + "'");
  }

  Cursor& c_;
  const Alphabet& a_;
};

inline void require_closed(const std::set<std::string>& fv) {
  if (fv.empty()) return;
  std::string names;
  for (const auto& n : fv) names += (names.empty() ? "" : ", ") + n;
  throw SyntaxError("unbound variable(s): " + names);
}

inline Alphabet parse_header(Cursor& c) {
  if (!(c.at_word("alphabet") || c.at_word("props")))
    c.fail("expected 'alphabet' or 'props' header, found '" + c.peek().text + "'");
  const Token kw = c.take();
  std::vector<std::string> names;
  while (c.at(Tok::Ident)) names.push_back(c.take().text);
  c.expect(Tok::Semi, "';' ending the header");
  try {
    return kw.text == "props" ? Alphabet::powerset(std::move(names)) : Alphabet::plain(std::move(names));
  } catch (const ParseError&) {
    throw;
  } catch (const SyntaxError& e) {
    throw ParseError(e.what(), kw.line, kw.col);
  }
}

}  // namespace detail

/// Parses an expression over `alphabet`. With `closed`, free variables are
/// rejected.
inline Expr parse_expr(std::string_view text, const Alphabet& alphabet, bool closed = false) {
  detail::Cursor c(detail::lex(text));
  detail::ExprParser p(c, alphabet);
  Expr e = p.expr();
  if (!c.at(detail::Tok::End)) c.fail("unexpected '" + c.peek().text + "' after expression");
  if (closed) detail::require_closed(free_vars(e));
  return e;
}

inline Formula parse_formula(std::string_view text, const Alphabet& alphabet, bool closed = false) {
  if (!alphabet.is_powerset()) throw SyntaxError("formulas need a 'props' alphabet");
  detail::Cursor c(detail::lex(text));
  detail::FormulaParser p(c, alphabet);
  Formula f = p.formula();
  if (!c.at(detail::Tok::End)) c.fail("unexpected '" + c.peek().text + "' after formula");
  if (closed) detail::require_closed(free_vars(f));
  return f;
}

/// Parses an alphabet declaration such as `alphabet a b ;` or `props P ;`.
inline Alphabet parse_alphabet(std::string_view text) {
  detail::Cursor c(detail::lex(text));
  Alphabet a = detail::parse_header(c);
  if (!c.at(detail::Tok::End)) c.fail("unexpected '" + c.peek().text + "' after header");
  return a;
}

struct ExprFile {
  Alphabet alphabet;
  Expr expr;
};

struct FormulaFile {
  Alphabet alphabet;
  Formula formula;
};

/// Header followed by one expression.
inline ExprFile parse_expr_file(std::string_view text, bool closed = true) {
  detail::Cursor c(detail::lex(text));
  ExprFile out;
  out.alphabet = detail::parse_header(c);
  detail::ExprParser p(c, out.alphabet);
  out.expr = p.expr();
  if (!c.at(detail::Tok::End)) c.fail("unexpected '" + c.peek().text + "' after expression");
  if (closed) detail::require_closed(free_vars(out.expr));
  return out;
}

inline FormulaFile parse_formula_file(std::string_view text, bool closed = true) {
  detail::Cursor c(detail::lex(text));
  FormulaFile out;
  out.alphabet = detail::parse_header(c);
  if (!out.alphabet.is_powerset()) throw SyntaxError("formula files need a 'props' header");
  detail::FormulaParser p(c, out.alphabet);
  out.formula = p.formula();
  if (!c.at(detail::Tok::End)) c.fail("unexpected '" + c.peek().text + "' after formula");
  if (closed) detail::require_closed(free_vars(out.formula));
  return out;
}

}  // namespace rll
