#pragma once

// Abstract syntax for right-linear lattice (RLL) expressions and for
// linear-time mu-calculus formulas in negation normal form, together with
// the purely syntactic operations on them: printing, free variables,
// capture-avoiding substitution, alpha-equivalence and formula negation.

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rll {

/// Raised for malformed alphabets, expressions and formulas.
class SyntaxError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Index of a letter inside its Alphabet.
struct Letter {
  std::size_t id = 0;
  auto operator<=>(const Letter&) const = default;
};

/// Index of a proposition inside a powerset Alphabet.
struct Prop {
  std::size_t id = 0;
  auto operator<=>(const Prop&) const = default;
};

// ---------------------------------------------------------------------------
// Alphabet

/// A finite ordered alphabet. In powerset mode the letters are exactly the
/// subsets of a declared proposition basis; letter i is the subset whose
/// bit j is set iff proposition j belongs to it.
class Alphabet {
 public:
  Alphabet() = default;

  static Alphabet plain(std::vector<std::string> letters) {
    if (letters.empty()) throw SyntaxError("alphabet must be nonempty");
    std::set<std::string> seen;
    for (const auto& l : letters) {
      if (l.empty()) throw SyntaxError("empty letter name");
      if (!seen.insert(l).second) throw SyntaxError("duplicate letter '" + l + "'");
    }
    Alphabet a;
    a.letters_ = std::move(letters);
    return a;
  }

  static Alphabet powerset(std::vector<std::string> props) {
    if (props.size() > 16) throw SyntaxError("too many propositions (max 16)");
    std::set<std::string> seen;
    for (const auto& p : props) {
      if (p.empty()) throw SyntaxError("empty proposition name");
      if (!seen.insert(p).second) throw SyntaxError("duplicate proposition '" + p + "'");
    }
    Alphabet a;
    a.props_ = std::move(props);
    a.powerset_ = true;
    const std::size_t n = std::size_t{1} << a.props_.size();
    for (std::size_t mask = 0; mask < n; ++mask) a.letters_.push_back(a.set_name(mask));
    return a;
  }

  std::size_t size() const { return letters_.size(); }
  bool is_powerset() const { return powerset_; }
  const std::vector<std::string>& letters() const { return letters_; }
  const std::vector<std::string>& props() const { return props_; }

  const std::string& letter_name(Letter l) const { return letters_.at(l.id); }
  const std::string& prop_name(Prop p) const { return props_.at(p.id); }

  std::optional<Letter> find_letter(std::string_view name) const {
    for (std::size_t i = 0; i < letters_.size(); ++i)
      if (letters_[i] == name) return Letter{i};
    return std::nullopt;
  }

  std::optional<Prop> find_prop(std::string_view name) const {
    for (std::size_t i = 0; i < props_.size(); ++i)
      if (props_[i] == name) return Prop{i};
    return std::nullopt;
  }

  /// Powerset mode only: does letter `l` contain proposition `p`?
  bool contains(Letter l, Prop p) const { return ((l.id >> p.id) & 1U) != 0; }

  /// Letter for a set of propositions (powerset mode).
  Letter letter_of_set(const std::set<std::size_t>& props) const {
    std::size_t mask = 0;
    for (auto p : props) mask |= std::size_t{1} << p;
    return Letter{mask};
  }

  std::vector<Letter> all_letters() const {
    std::vector<Letter> out;
    for (std::size_t i = 0; i < letters_.size(); ++i) out.push_back(Letter{i});
    return out;
  }

  /// Header line in the text format: `alphabet a b ;` or `props P Q ;`.
  std::string header() const {
    std::string out = powerset_ ? "props" : "alphabet";
    for (const auto& n : powerset_ ? props_ : letters_) out += " " + n;
    return out + " ;";
  }

  bool operator==(const Alphabet& other) const = default;

 private:
  std::string set_name(std::size_t mask) const {
    std::string out = "{";
    bool first = true;
    for (std::size_t j = 0; j < props_.size(); ++j) {
      if (((mask >> j) & 1U) == 0) continue;
      if (!first) out += ",";
      out += props_[j];
      first = false;
    }
    return out + "}";
  }

  std::vector<std::string> letters_;
  std::vector<std::string> props_;
  bool powerset_ = false;
};

// ---------------------------------------------------------------------------
// RLL expressions

enum class ExprKind { Var, Act, Sum, Meet, Mu, Nu, Zero, Top };

/// Immutable RLL expression. Copies share structure.
class Expr {
 public:
  Expr() : Expr(zero()) {}

  static Expr var(std::string name) { return Expr(ExprKind::Var, std::move(name), {}, {}); }
  static Expr act(Letter a, Expr body) { return Expr(ExprKind::Act, {}, a, {std::move(body)}); }
  static Expr sum(Expr l, Expr r) { return Expr(ExprKind::Sum, {}, {}, {std::move(l), std::move(r)}); }
  static Expr meet(Expr l, Expr r) { return Expr(ExprKind::Meet, {}, {}, {std::move(l), std::move(r)}); }
  static Expr mu(std::string x, Expr body) { return Expr(ExprKind::Mu, std::move(x), {}, {std::move(body)}); }
  static Expr nu(std::string x, Expr body) { return Expr(ExprKind::Nu, std::move(x), {}, {std::move(body)}); }
  static Expr zero() {
    static const Expr z(ExprKind::Zero, {}, {}, {});
    return z;
  }
  static Expr top() {
    static const Expr t(ExprKind::Top, {}, {}, {});
    return t;
  }
  /// mu or nu depending on `least`.
  static Expr fix(bool least, std::string x, Expr body) {
    return least ? mu(std::move(x), std::move(body)) : nu(std::move(x), std::move(body));
  }

  ExprKind kind() const { return node_->kind; }
  bool is(ExprKind k) const { return node_->kind == k; }
  bool is_fixpoint() const { return is(ExprKind::Mu) || is(ExprKind::Nu); }
  bool is_binary() const { return is(ExprKind::Sum) || is(ExprKind::Meet); }

  /// Variable name, or binder name of a fixpoint.
  const std::string& name() const { return node_->name; }
  Letter letter() const { return node_->letter; }
  const Expr& left() const { return node_->kids.at(0); }
  const Expr& right() const { return node_->kids.at(1); }
  /// Body of an action or fixpoint.
  const Expr& body() const { return node_->kids.at(0); }
  const std::vector<Expr>& children() const { return node_->kids; }

  /// Exact structural equality (binder names included).
  friend bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind() || a.node_->name != b.node_->name || a.node_->letter != b.node_->letter)
      return false;
    return a.node_->kids == b.node_->kids;
  }

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& k : node_->kids) n += k.size();
    return n;
  }

 private:
  struct Node {
    ExprKind kind;
    std::string name;
    Letter letter;
    std::vector<Expr> kids;
  };

  Expr(ExprKind k, std::string name, Letter a, std::vector<Expr> kids)
      : node_(std::make_shared<const Node>(Node{k, std::move(name), a, std::move(kids)})) {}

  std::shared_ptr<const Node> node_;
};

/// Rebuilds `e` with new children (same kind, name, letter).
inline Expr with_children(const Expr& e, std::vector<Expr> kids) {
  switch (e.kind()) {
    case ExprKind::Act: return Expr::act(e.letter(), std::move(kids.at(0)));
    case ExprKind::Sum: return Expr::sum(std::move(kids.at(0)), std::move(kids.at(1)));
    case ExprKind::Meet: return Expr::meet(std::move(kids.at(0)), std::move(kids.at(1)));
    case ExprKind::Mu: return Expr::mu(e.name(), std::move(kids.at(0)));
    case ExprKind::Nu: return Expr::nu(e.name(), std::move(kids.at(0)));
    default: return e;
  }
}

// ---------------------------------------------------------------------------
// mu-LTL formulas

enum class FormulaKind { Bot, Top, Prop, NegProp, Var, Or, And, Next, Mu, Nu };

/// Immutable mu-LTL formula in negation normal form.
class Formula {
 public:
  Formula() : Formula(bot()) {}

  static Formula bot() {
    static const Formula f(FormulaKind::Bot, {}, {}, {});
    return f;
  }
  static Formula top() {
    static const Formula f(FormulaKind::Top, {}, {}, {});
    return f;
  }
  static Formula prop(Prop p) { return Formula(FormulaKind::Prop, {}, p, {}); }
  static Formula neg_prop(Prop p) { return Formula(FormulaKind::NegProp, {}, p, {}); }
  static Formula var(std::string x) { return Formula(FormulaKind::Var, std::move(x), {}, {}); }
  static Formula lor(Formula l, Formula r) { return Formula(FormulaKind::Or, {}, {}, {std::move(l), std::move(r)}); }
  static Formula land(Formula l, Formula r) { return Formula(FormulaKind::And, {}, {}, {std::move(l), std::move(r)}); }
  static Formula next(Formula b) { return Formula(FormulaKind::Next, {}, {}, {std::move(b)}); }
  static Formula mu(std::string x, Formula b) { return Formula(FormulaKind::Mu, std::move(x), {}, {std::move(b)}); }
  static Formula nu(std::string x, Formula b) { return Formula(FormulaKind::Nu, std::move(x), {}, {std::move(b)}); }

  FormulaKind kind() const { return node_->kind; }
  bool is(FormulaKind k) const { return node_->kind == k; }
  bool is_fixpoint() const { return is(FormulaKind::Mu) || is(FormulaKind::Nu); }
  const std::string& name() const { return node_->name; }
  Prop prop_id() const { return node_->prop; }
  const Formula& left() const { return node_->kids.at(0); }
  const Formula& right() const { return node_->kids.at(1); }
  const Formula& body() const { return node_->kids.at(0); }
  const std::vector<Formula>& children() const { return node_->kids; }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind() || a.node_->name != b.node_->name || a.node_->prop != b.node_->prop) return false;
    return a.node_->kids == b.node_->kids;
  }

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& k : node_->kids) n += k.size();
    return n;
  }

 private:
  struct Node {
    FormulaKind kind;
    std::string name;
    Prop prop;
    std::vector<Formula> kids;
  };

  Formula(FormulaKind k, std::string name, Prop p, std::vector<Formula> kids)
      : node_(std::make_shared<const Node>(Node{k, std::move(name), p, std::move(kids)})) {}

  std::shared_ptr<const Node> node_;
};

inline Formula with_children(const Formula& f, std::vector<Formula> kids) {
  switch (f.kind()) {
    case FormulaKind::Or: return Formula::lor(std::move(kids.at(0)), std::move(kids.at(1)));
    case FormulaKind::And: return Formula::land(std::move(kids.at(0)), std::move(kids.at(1)));
    case FormulaKind::Next: return Formula::next(std::move(kids.at(0)));
    case FormulaKind::Mu: return Formula::mu(f.name(), std::move(kids.at(0)));
    case FormulaKind::Nu: return Formula::nu(f.name(), std::move(kids.at(0)));
    default: return f;
  }
}

// ---------------------------------------------------------------------------
// Generic binder machinery shared by both syntaxes.

namespace detail {

template <class T> struct Traits;

template <> struct Traits<Expr> {
  static bool is_var(const Expr& e) { return e.is(ExprKind::Var); }
  static bool is_binder(const Expr& e) { return e.is_fixpoint(); }
  static Expr make_var(std::string x) { return Expr::var(std::move(x)); }
  static Expr rebind(const Expr& e, std::string x, Expr body) {
    return e.is(ExprKind::Mu) ? Expr::mu(std::move(x), std::move(body)) : Expr::nu(std::move(x), std::move(body));
  }
  static std::string tag(const Expr& e) {
    switch (e.kind()) {
      case ExprKind::Var: return "v";
      case ExprKind::Act: return "a" + std::to_string(e.letter().id);
      case ExprKind::Sum: return "+";
      case ExprKind::Meet: return "&";
      case ExprKind::Mu: return "m";
      case ExprKind::Nu: return "n";
      case ExprKind::Zero: return "0";
      case ExprKind::Top: return "T";
    }
    return "?";
  }
};

template <> struct Traits<Formula> {
  static bool is_var(const Formula& f) { return f.is(FormulaKind::Var); }
  static bool is_binder(const Formula& f) { return f.is_fixpoint(); }
  static Formula make_var(std::string x) { return Formula::var(std::move(x)); }
  static Formula rebind(const Formula& f, std::string x, Formula body) {
    return f.is(FormulaKind::Mu) ? Formula::mu(std::move(x), std::move(body))
                                 : Formula::nu(std::move(x), std::move(body));
  }
  static std::string tag(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::Bot: return "F";
      case FormulaKind::Top: return "T";
      case FormulaKind::Prop: return "p" + std::to_string(f.prop_id().id);
      case FormulaKind::NegProp: return "q" + std::to_string(f.prop_id().id);
      case FormulaKind::Var: return "v";
      case FormulaKind::Or: return "|";
      case FormulaKind::And: return "&";
      case FormulaKind::Next: return "O";
      case FormulaKind::Mu: return "m";
      case FormulaKind::Nu: return "n";
    }
    return "?";
  }
};

template <class T>
void collect_free(const T& t, std::vector<std::string>& bound, std::set<std::string>& out) {
  using Tr = Traits<T>;
  if (Tr::is_var(t)) {
    if (std::find(bound.begin(), bound.end(), t.name()) == bound.end()) out.insert(t.name());
    return;
  }
  if (Tr::is_binder(t)) {
    bound.push_back(t.name());
    collect_free(t.body(), bound, out);
    bound.pop_back();
    return;
  }
  for (const auto& k : t.children()) collect_free(k, bound, out);
}

template <class T>
bool occurs_free(const T& t, const std::string& x) {
  using Tr = Traits<T>;
  if (Tr::is_var(t)) return t.name() == x;
  if (Tr::is_binder(t)) return t.name() != x && occurs_free(t.body(), x);
  for (const auto& k : t.children())
    if (occurs_free(k, x)) return true;
  return false;
}

inline std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string candidate = base + "'";
  while (avoid.count(candidate) != 0) candidate += "'";
  return candidate;
}

template <class T>
std::set<std::string> free_vars_of(const T& t) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_free(t, bound, out);
  return out;
}

template <class T>
T subst(const T& t, const std::string& x, const T& r, const std::set<std::string>& r_free) {
  using Tr = Traits<T>;
  if (Tr::is_var(t)) return t.name() == x ? r : t;
  if (Tr::is_binder(t)) {
    if (t.name() == x || !occurs_free(t.body(), x)) return t;
    if (r_free.count(t.name()) != 0) {
      std::set<std::string> avoid = r_free;
      auto body_free = free_vars_of(t.body());
      avoid.insert(body_free.begin(), body_free.end());
      avoid.insert(x);
      std::string y = fresh_name(t.name(), avoid);
      T renamed = subst(t.body(), t.name(), Tr::make_var(y), {y});
      return Tr::rebind(t, y, subst(renamed, x, r, r_free));
    }
    return Tr::rebind(t, t.name(), subst(t.body(), x, r, r_free));
  }
  if (t.children().empty()) return t;
  std::vector<T> kids;
  kids.reserve(t.children().size());
  for (const auto& k : t.children()) kids.push_back(subst(k, x, r, r_free));
  return with_children(t, std::move(kids));
}

// Canonical text with de Bruijn indices for bound variables.
template <class T>
void canonical(const T& t, std::vector<std::string>& bound, std::string& out) {
  using Tr = Traits<T>;
  if (Tr::is_var(t)) {
    for (std::size_t i = bound.size(); i-- > 0;) {
      if (bound[i] == t.name()) {
        out += "#" + std::to_string(bound.size() - 1 - i);
        return;
      }
    }
    out += "$" + t.name() + ";";
    return;
  }
  out += Tr::tag(t);
  if (Tr::is_binder(t)) {
    bound.push_back(t.name());
    out += "(";
    canonical(t.body(), bound, out);
    out += ")";
    bound.pop_back();
    return;
  }
  if (t.children().empty()) return;
  out += "(";
  for (const auto& k : t.children()) {
    canonical(k, bound, out);
    out += ",";
  }
  out += ")";
}

}  // namespace detail

inline std::set<std::string> free_vars(const Expr& e) { return detail::free_vars_of(e); }
inline std::set<std::string> free_vars(const Formula& f) { return detail::free_vars_of(f); }
inline bool is_closed(const Expr& e) { return free_vars(e).empty(); }
inline bool is_closed(const Formula& f) { return free_vars(f).empty(); }

/// Capture-avoiding substitution e[replacement / var].
inline Expr substitute(const Expr& e, const std::string& var, const Expr& replacement) {
  return detail::subst(e, var, replacement, free_vars(replacement));
}
inline Formula substitute(const Formula& f, const std::string& var, const Formula& replacement) {
  return detail::subst(f, var, replacement, free_vars(replacement));
}

/// One-step unfolding of a fixpoint: sigma X e  |->  e[sigma X e / X].
inline Expr unfold(const Expr& fix) { return substitute(fix.body(), fix.name(), fix); }
inline Formula unfold(const Formula& fix) { return substitute(fix.body(), fix.name(), fix); }

/// Key identifying an expression up to renaming of bound variables.
inline std::string alpha_key(const Expr& e) {
  std::string out;
  std::vector<std::string> bound;
  detail::canonical(e, bound, out);
  return out;
}
inline std::string alpha_key(const Formula& f) {
  std::string out;
  std::vector<std::string> bound;
  detail::canonical(f, bound, out);
  return out;
}

inline bool alpha_equal(const Expr& a, const Expr& b) { return a == b || alpha_key(a) == alpha_key(b); }
inline bool alpha_equal(const Formula& a, const Formula& b) { return a == b || alpha_key(a) == alpha_key(b); }

/// Renames free variable `from` to `to` (capture-avoiding).
inline Expr rename_free(const Expr& e, const std::string& from, const std::string& to) {
  return substitute(e, from, Expr::var(to));
}

// ---------------------------------------------------------------------------
// Formula negation (De Morgan duals, self-dual next). Variables are fixed
// points of negation, which is the right reading for bound occurrences.

inline Formula negate_formula(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Bot: return Formula::top();
    case FormulaKind::Top: return Formula::bot();
    case FormulaKind::Prop: return Formula::neg_prop(f.prop_id());
    case FormulaKind::NegProp: return Formula::prop(f.prop_id());
    case FormulaKind::Var: return f;
    case FormulaKind::Or: return Formula::land(negate_formula(f.left()), negate_formula(f.right()));
    case FormulaKind::And: return Formula::lor(negate_formula(f.left()), negate_formula(f.right()));
    case FormulaKind::Next: return Formula::next(negate_formula(f.body()));
    case FormulaKind::Mu: return Formula::nu(f.name(), negate_formula(f.body()));
    case FormulaKind::Nu: return Formula::mu(f.name(), negate_formula(f.body()));
  }
  return f;
}

/// phi -> psi, as the macro ~phi | psi.
inline Formula implies(const Formula& a, const Formula& b) { return Formula::lor(negate_formula(a), b); }
/// phi <-> psi, as (phi -> psi) & (psi -> phi).
inline Formula iff(const Formula& a, const Formula& b) { return Formula::land(implies(a, b), implies(b, a)); }

// ---------------------------------------------------------------------------
// Printing. Binders extend as far right as possible; `&` binds tighter than
// `+` (resp. `|`); prefix operators bind tightest. Binary operators are
// right-associative.

namespace detail {

inline void print(const Expr& e, const Alphabet& a, int level, std::string& out) {
  switch (e.kind()) {
    case ExprKind::Var: out += e.name(); return;
    case ExprKind::Zero: out += "0"; return;
    case ExprKind::Top: out += "top"; return;
    case ExprKind::Act:
      out += a.letter_name(e.letter());
      out += ".";
      print(e.body(), a, 3, out);
      return;
    case ExprKind::Sum:
    case ExprKind::Meet: {
      const bool sum = e.is(ExprKind::Sum);
      const int mine = sum ? 1 : 2;
      if (level > mine) out += "(";
      print(e.left(), a, mine + 1, out);
      out += sum ? " + " : " & ";
      print(e.right(), a, mine, out);
      if (level > mine) out += ")";
      return;
    }
    case ExprKind::Mu:
    case ExprKind::Nu: {
      if (level > 0) out += "(";
      out += e.is(ExprKind::Mu) ? "mu " : "nu ";
      out += e.name();
      out += ". ";
      print(e.body(), a, e.body().is_binary() ? 3 : 0, out);
      if (level > 0) out += ")";
      return;
    }
  }
}

inline void print(const Formula& f, const Alphabet& a, int level, std::string& out) {
  switch (f.kind()) {
    case FormulaKind::Bot: out += "ff"; return;
    case FormulaKind::Top: out += "tt"; return;
    case FormulaKind::Prop: out += a.prop_name(f.prop_id()); return;
    case FormulaKind::NegProp: out += "~" + a.prop_name(f.prop_id()); return;
    case FormulaKind::Var: out += f.name(); return;
    case FormulaKind::Next:
      out += "O ";
      print(f.body(), a, 3, out);
      return;
    case FormulaKind::Or:
    case FormulaKind::And: {
      const bool disj = f.is(FormulaKind::Or);
      const int mine = disj ? 1 : 2;
      if (level > mine) out += "(";
      print(f.left(), a, mine + 1, out);
      out += disj ? " | " : " & ";
      print(f.right(), a, mine, out);
      if (level > mine) out += ")";
      return;
    }
    case FormulaKind::Mu:
    case FormulaKind::Nu: {
      if (level > 0) out += "(";
      out += f.is(FormulaKind::Mu) ? "mu " : "nu ";
      out += f.name();
      out += ". ";
      const bool binary = f.body().is(FormulaKind::Or) || f.body().is(FormulaKind::And);
      print(f.body(), a, binary ? 3 : 0, out);
      if (level > 0) out += ")";
      return;
    }
  }
}

}  // namespace detail

inline std::string print_expr(const Expr& e, const Alphabet& a) {
  std::string out;
  detail::print(e, a, 0, out);
  return out;
}

inline std::string print_formula(const Formula& f, const Alphabet& a) {
  std::string out;
  detail::print(f, a, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Well-formedness against an alphabet.

inline void check_letters(const Expr& e, const Alphabet& a) {
  if (e.is(ExprKind::Act) && e.letter().id >= a.size())
    throw SyntaxError("letter index " + std::to_string(e.letter().id) + " outside alphabet");
  for (const auto& k : e.children()) check_letters(k, a);
}

/// Sum of `terms` in the given order, right-associated; 0 when empty.
inline Expr sum_of(const std::vector<Expr>& terms) {
  if (terms.empty()) return Expr::zero();
  Expr acc = terms.back();
  for (std::size_t i = terms.size() - 1; i-- > 0;) acc = Expr::sum(terms[i], acc);
  return acc;
}

/// Meet of `terms`, right-associated; top when empty.
inline Expr meet_of(const std::vector<Expr>& terms) {
  if (terms.empty()) return Expr::top();
  Expr acc = terms.back();
  for (std::size_t i = terms.size() - 1; i-- > 0;) acc = Expr::meet(terms[i], acc);
  return acc;
}

}  // namespace rll
