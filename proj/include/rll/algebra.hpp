#pragma once

// Syntactic complement and the translations between RLL expressions and
// mu-LTL formulas over a powerset alphabet.

#include <cmath>
#include <string>
#include <vector>

#include "rll/syntax.hpp"

namespace rll {

/// Dual expression: sums and meets swap, mu and nu swap, 0 and top swap,
/// variables are kept, and a.e becomes a.e^c + (sum of b.top for b != a).
inline Expr complement(const Expr& e, const Alphabet& a) {
  switch (e.kind()) {
    case ExprKind::Var: return e;
    case ExprKind::Zero: return Expr::top();
    case ExprKind::Top: return Expr::zero();
    case ExprKind::Sum: return Expr::meet(complement(e.left(), a), complement(e.right(), a));
    case ExprKind::Meet: return Expr::sum(complement(e.left(), a), complement(e.right(), a));
    case ExprKind::Mu: return Expr::nu(e.name(), complement(e.body(), a));
    case ExprKind::Nu: return Expr::mu(e.name(), complement(e.body(), a));
    case ExprKind::Act: {
      Expr head = Expr::act(e.letter(), complement(e.body(), a));
      std::vector<Expr> others;
      for (auto b : a.all_letters())
        if (b != e.letter()) others.push_back(Expr::act(b, Expr::top()));
      return others.empty() ? head : Expr::sum(head, sum_of(others));
    }
  }
  return e;
}

/// Literal conjunction describing letter `l`: propositions in `l` first,
/// then the negated ones, both in declared order.
inline std::vector<Formula> letter_literals(Letter l, const Alphabet& a) {
  std::vector<Formula> lits;
  for (std::size_t p = 0; p < a.props().size(); ++p)
    if (a.contains(l, Prop{p})) lits.push_back(Formula::prop(Prop{p}));
  for (std::size_t p = 0; p < a.props().size(); ++p)
    if (!a.contains(l, Prop{p})) lits.push_back(Formula::neg_prop(Prop{p}));
  return lits;
}

/// The map e -> e°.
inline Formula to_multl(const Expr& e, const Alphabet& a) {
  if (!a.is_powerset()) throw SyntaxError("translation to mu-LTL needs a 'props' alphabet");
  switch (e.kind()) {
    case ExprKind::Var: return Formula::var(e.name());
    case ExprKind::Zero: return Formula::mu("X", Formula::var("X"));
    case ExprKind::Top: return Formula::nu("X", Formula::var("X"));
    case ExprKind::Sum: return Formula::lor(to_multl(e.left(), a), to_multl(e.right(), a));
    case ExprKind::Meet: return Formula::land(to_multl(e.left(), a), to_multl(e.right(), a));
    case ExprKind::Mu: return Formula::mu(e.name(), to_multl(e.body(), a));
    case ExprKind::Nu: return Formula::nu(e.name(), to_multl(e.body(), a));
    case ExprKind::Act: {
      std::vector<Formula> lits = letter_literals(e.letter(), a);
      Formula acc = Formula::next(to_multl(e.body(), a));
      if (lits.empty()) return Formula::land(Formula::top(), acc);
      for (std::size_t i = lits.size(); i-- > 0;) acc = Formula::land(lits[i], acc);
      return acc;
    }
  }
  return Formula::bot();
}

/// The map phi -> phi•.
inline Expr to_rll(const Formula& f, const Alphabet& a) {
  if (!a.is_powerset()) throw SyntaxError("translation from mu-LTL needs a 'props' alphabet");
  switch (f.kind()) {
    case FormulaKind::Bot: return Expr::zero();
    case FormulaKind::Top: return Expr::top();
    case FormulaKind::Prop:
    case FormulaKind::NegProp: {
      const bool want = f.is(FormulaKind::Prop);
      std::vector<Expr> terms;
      for (auto l : a.all_letters())
        if (a.contains(l, f.prop_id()) == want) terms.push_back(Expr::act(l, Expr::top()));
      return sum_of(terms);
    }
    case FormulaKind::Var: return Expr::var(f.name());
    case FormulaKind::Or: return Expr::sum(to_rll(f.left(), a), to_rll(f.right(), a));
    case FormulaKind::And: return Expr::meet(to_rll(f.left(), a), to_rll(f.right(), a));
    case FormulaKind::Next: {
      const Expr body = to_rll(f.body(), a);
      std::vector<Expr> terms;
      for (auto l : a.all_letters()) terms.push_back(Expr::act(l, body));
      return sum_of(terms);
    }
    case FormulaKind::Mu: return Expr::mu(f.name(), to_rll(f.body(), a));
    case FormulaKind::Nu: return Expr::nu(f.name(), to_rll(f.body(), a));
  }
  return Expr::zero();
}

/// Encoding of an n-letter alphabet as the powerset of ceil(log2 n)
/// propositions p0, p1, ...: letter i becomes the set with bits of i.
struct PowersetEncoding {
  Alphabet source;
  Alphabet target;
  Letter encode(Letter l) const { return l; }
};

inline PowersetEncoding powerset_encoding(const Alphabet& a) {
  if (a.is_powerset()) return {a, a};
  const std::size_t n = a.size();
  if ((n & (n - 1)) != 0) throw SyntaxError("alphabet size " + std::to_string(n) + " is not a power of two");
  std::vector<std::string> props;
  for (std::size_t k = 0; (std::size_t{1} << k) < n; ++k) props.push_back("p" + std::to_string(k));
  return {a, Alphabet::powerset(std::move(props))};
}

/// Re-expresses `e` over the encoded alphabet (letter ids are preserved).
inline Expr encode_expr(const Expr& e, const PowersetEncoding& enc) {
  if (e.is(ExprKind::Act)) return Expr::act(enc.encode(e.letter()), encode_expr(e.body(), enc));
  if (e.children().empty()) return e;
  std::vector<Expr> kids;
  for (const auto& k : e.children()) kids.push_back(encode_expr(k, enc));
  return with_children(e, std::move(kids));
}

}  // namespace rll
