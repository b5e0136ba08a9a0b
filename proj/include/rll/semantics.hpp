#pragma once

// Ultimately periodic words and the fixpoint evaluator over their tails.
//
// A lasso u(v) has n = |u| + |v| positions; position i stands for the i-th
// tail of u v^omega and the successor of the last position wraps back to
// |u|. Every expression denotes a set of positions, and on this finite
// lattice least and greatest fixpoints are reached by Kleene iteration from
// the empty and the full set in at most n + 1 rounds.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rll/parser.hpp"
#include "rll/syntax.hpp"

namespace rll {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Lasso

class Lasso {
 public:
  Lasso() = default;
  Lasso(std::vector<Letter> prefix, std::vector<Letter> period) : prefix_(std::move(prefix)), period_(std::move(period)) {
    if (period_.empty()) throw SyntaxError("lasso period must be nonempty");
  }

  const std::vector<Letter>& prefix() const { return prefix_; }
  const std::vector<Letter>& period() const { return period_; }
  std::size_t positions() const { return prefix_.size() + period_.size(); }
  Letter letter_at(std::size_t i) const { return i < prefix_.size() ? prefix_[i] : period_[i - prefix_.size()]; }
  std::size_t succ(std::size_t i) const { return i + 1 < positions() ? i + 1 : prefix_.size(); }

  /// The first `count` letters of the infinite word.
  std::vector<Letter> unroll(std::size_t count) const {
    std::vector<Letter> out;
    out.reserve(count);
    for (std::size_t i = 0; out.size() < count; i = succ(i)) out.push_back(letter_at(i));
    return out;
  }

  bool operator==(const Lasso&) const = default;

 private:
  std::vector<Letter> prefix_;
  std::vector<Letter> period_ = {Letter{0}};
};

/// Canonical representative: the prefix is shortened while its last letter
/// equals the period's last letter (rotating the period right), then the
/// period is reduced to its primitive root.
inline Lasso lasso_normalize(const Lasso& w) {
  std::vector<Letter> u = w.prefix();
  std::vector<Letter> v = w.period();
  while (!u.empty() && u.back() == v.back()) {
    u.pop_back();
    std::rotate(v.rbegin(), v.rbegin() + 1, v.rend());
  }
  const std::size_t n = v.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool periodic = true;
    for (std::size_t i = d; i < n && periodic; ++i) periodic = v[i] == v[i - d];
    if (periodic) {
      v.resize(d);
      break;
    }
  }
  return Lasso(std::move(u), std::move(v));
}

inline bool is_normalized(const Lasso& w) { return lasso_normalize(w) == w; }

/// `u(v)` with letters juxtaposed; powerset letters as `{P,Q}`.
inline std::string print_lasso(const Lasso& w, const Alphabet& a) {
  std::string out;
  for (auto l : w.prefix()) out += a.letter_name(l);
  out += "(";
  for (auto l : w.period()) out += a.letter_name(l);
  return out + ")";
}

inline Lasso parse_lasso(std::string_view text, const Alphabet& a) {
  std::vector<Letter> prefix, period;
  bool in_period = false, closed = false;
  std::size_t i = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw ParseError(msg + " in lasso '" + std::string(text) + "'", 1, i + 1);
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (closed) fail("trailing input");
    if (c == '(') {
      if (in_period) fail("nested '('");
      in_period = true;
      ++i;
      continue;
    }
    if (c == ')') {
      if (!in_period) fail("unmatched ')'");
      closed = true;
      ++i;
      continue;
    }
    Letter l;
    if (a.is_powerset()) {
      if (c != '{') fail("expected '{'");
      const std::size_t end = text.find('}', i);
      if (end == std::string_view::npos) fail("unterminated '{'");
      std::set<std::size_t> props;
      std::string_view inner = text.substr(i + 1, end - i - 1);
      std::size_t s = 0;
      while (s <= inner.size()) {
        std::size_t comma = inner.find(',', s);
        if (comma == std::string_view::npos) comma = inner.size();
        std::string name;
        for (char ch : inner.substr(s, comma - s))
          if (!std::isspace(static_cast<unsigned char>(ch))) name += ch;
        if (!name.empty()) {
          auto p = a.find_prop(name);
          if (!p) fail("undeclared proposition '" + name + "'");
          props.insert(p->id);
        } else if (comma != inner.size()) {
          fail("empty proposition name");
        }
        s = comma + 1;
      }
      l = a.letter_of_set(props);
      i = end + 1;
    } else {
      // longest declared letter name starting here
      std::size_t best = 0;
      for (std::size_t k = 0; k < a.size(); ++k) {
        const auto& name = a.letters()[k];
        if (name.size() > best && text.substr(i, name.size()) == name) {
          best = name.size();
          l = Letter{k};
        }
      }
      if (best == 0) fail(std::string("undeclared letter at '") + c + "'");
      i += best;
    }
    (in_period ? period : prefix).push_back(l);
  }
  if (!closed) fail("missing '(period)'");
  if (period.empty()) fail("empty period");
  return Lasso(std::move(prefix), std::move(period));
}

// ---------------------------------------------------------------------------
// PositionSet

/// Subset of the positions {0..n-1} of a fixed lasso.
class PositionSet {
 public:
  PositionSet() = default;
  explicit PositionSet(std::size_t n, bool full = false) : n_(n), words_((n + 63) / 64, full ? ~std::uint64_t{0} : 0) {
    trim();
  }

  static PositionSet of(std::size_t n, std::initializer_list<std::size_t> members) {
    PositionSet s(n);
    for (auto m : members) s.insert(m);
    return s;
  }

  std::size_t universe() const { return n_; }
  bool contains(std::size_t i) const { return i < n_ && ((words_[i / 64] >> (i % 64)) & 1U) != 0; }
  void insert(std::size_t i) { words_.at(i / 64) |= std::uint64_t{1} << (i % 64); }
  void erase(std::size_t i) { words_.at(i / 64) &= ~(std::uint64_t{1} << (i % 64)); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool empty() const { return count() == 0; }

  bool subset_of(const PositionSet& o) const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if ((words_[k] & ~o.words_[k]) != 0) return false;
    return true;
  }

  PositionSet& operator|=(const PositionSet& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }
  PositionSet& operator&=(const PositionSet& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }
  friend PositionSet operator|(PositionSet a, const PositionSet& b) { return a |= b; }
  friend PositionSet operator&(PositionSet a, const PositionSet& b) { return a &= b; }
  PositionSet complement() const {
    PositionSet c = *this;
    for (auto& w : c.words_) w = ~w;
    c.trim();
    return c;
  }

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n_; ++i)
      if (contains(i)) out.push_back(i);
    return out;
  }

  bool operator==(const PositionSet&) const = default;

 private:
  void trim() {
    if (n_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
  }

  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Variable valuation; later bindings shadow earlier ones.
using Env = std::vector<std::pair<std::string, PositionSet>>;

namespace detail {

inline const PositionSet& lookup(const Env& env, const std::string& x) {
  for (auto it = env.rbegin(); it != env.rend(); ++it)
    if (it->first == x) return it->second;
  throw EvalError("unbound variable '" + x + "'");
}

/// Positions whose successor lies in `s`.
inline PositionSet pre_image(const Lasso& w, const PositionSet& s) {
  PositionSet out(w.positions());
  for (std::size_t i = 0; i < w.positions(); ++i)
    if (s.contains(w.succ(i))) out.insert(i);
  return out;
}

template <class Body>
PositionSet iterate_fixpoint(const Lasso& w, bool least, Env& env, const std::string& x, Body&& eval_body) {
  PositionSet cur(w.positions(), !least);
  for (std::size_t round = 0; round <= w.positions() + 1; ++round) {
    env.emplace_back(x, cur);
    PositionSet next = eval_body();
    env.pop_back();
    if (next == cur) return cur;
    cur = std::move(next);
  }
  throw EvalError("fixpoint iteration did not converge (non-monotone body?)");
}

inline PositionSet eval_rll(const Expr& e, const Lasso& w, Env& env) {
  const std::size_t n = w.positions();
  switch (e.kind()) {
    case ExprKind::Var: return lookup(env, e.name());
    case ExprKind::Zero: return PositionSet(n);
    case ExprKind::Top: return PositionSet(n, true);
    case ExprKind::Act: {
      PositionSet next = pre_image(w, eval_rll(e.body(), w, env));
      for (std::size_t i = 0; i < n; ++i)
        if (w.letter_at(i) != e.letter()) next.erase(i);
      return next;
    }
    case ExprKind::Sum: return eval_rll(e.left(), w, env) | eval_rll(e.right(), w, env);
    case ExprKind::Meet: return eval_rll(e.left(), w, env) & eval_rll(e.right(), w, env);
    case ExprKind::Mu:
    case ExprKind::Nu:
      return iterate_fixpoint(w, e.is(ExprKind::Mu), env, e.name(), [&] { return eval_rll(e.body(), w, env); });
  }
  return PositionSet(n);
}

inline PositionSet eval_multl(const Formula& f, const Lasso& w, const Alphabet& a, Env& env) {
  const std::size_t n = w.positions();
  switch (f.kind()) {
    case FormulaKind::Bot: return PositionSet(n);
    case FormulaKind::Top: return PositionSet(n, true);
    case FormulaKind::Prop:
    case FormulaKind::NegProp: {
      const bool want = f.is(FormulaKind::Prop);
      PositionSet s(n);
      for (std::size_t i = 0; i < n; ++i)
        if (a.contains(w.letter_at(i), f.prop_id()) == want) s.insert(i);
      return s;
    }
    case FormulaKind::Var: return lookup(env, f.name());
    case FormulaKind::Or: return eval_multl(f.left(), w, a, env) | eval_multl(f.right(), w, a, env);
    case FormulaKind::And: return eval_multl(f.left(), w, a, env) & eval_multl(f.right(), w, a, env);
    case FormulaKind::Next: return pre_image(w, eval_multl(f.body(), w, a, env));
    case FormulaKind::Mu:
    case FormulaKind::Nu:
      return iterate_fixpoint(w, f.is(FormulaKind::Mu), env, f.name(),
                              [&] { return eval_multl(f.body(), w, a, env); });
  }
  return PositionSet(n);
}

}  // namespace detail

/// Positions of `w` whose tails belong to the language of `e` under `env`.
inline PositionSet eval_rll(const Expr& e, const Lasso& w, Env env = {}) {
  for (const auto& [x, s] : env)
    if (s.universe() != w.positions()) throw EvalError("valuation of '" + x + "' has the wrong universe");
  return detail::eval_rll(e, w, env);
}

/// Fixpoint oracle for w in L(e).
inline bool member_oracle(const Expr& e, const Lasso& w) {
  if (!is_closed(e)) throw EvalError("membership needs a closed expression");
  return eval_rll(e, w).contains(0);
}

inline PositionSet eval_multl(const Formula& f, const Lasso& w, const Alphabet& a, Env env = {}) {
  if (!a.is_powerset()) throw EvalError("mu-LTL evaluation needs a powerset alphabet");
  return detail::eval_multl(f, w, a, env);
}

/// w |= phi.
inline bool satisfies(const Formula& f, const Lasso& w, const Alphabet& a) {
  if (!is_closed(f)) throw EvalError("satisfaction needs a closed formula");
  return eval_multl(f, w, a).contains(0);
}

// ---------------------------------------------------------------------------
// Enumeration of normalized lassos in length-lexicographic order: by total
// length, then prefix length, then letters of prefix and period.

template <class Visit>
void for_each_lasso(std::size_t alphabet_size, std::size_t max_prefix, std::size_t max_period, Visit&& visit) {
  if (alphabet_size == 0 || max_period == 0) return;
  for (std::size_t total = 1; total <= max_prefix + max_period; ++total) {
    for (std::size_t plen = 0; plen <= std::min(max_prefix, total - 1); ++plen) {
      const std::size_t vlen = total - plen;
      if (vlen > max_period) continue;
      std::vector<std::size_t> digits(total, 0);
      while (true) {
        std::vector<Letter> u, v;
        for (std::size_t k = 0; k < plen; ++k) u.push_back(Letter{digits[k]});
        for (std::size_t k = plen; k < total; ++k) v.push_back(Letter{digits[k]});
        Lasso w(std::move(u), std::move(v));
        if (is_normalized(w)) {
          if (!visit(w)) return;
        }
        bool wrapped = true;
        for (std::size_t k = total; k-- > 0;) {
          if (++digits[k] < alphabet_size) {
            wrapped = false;
            break;
          }
          digits[k] = 0;
        }
        if (wrapped) break;
      }
    }
  }
}

inline std::vector<Lasso> all_lassos(std::size_t alphabet_size, std::size_t max_prefix, std::size_t max_period) {
  std::vector<Lasso> out;
  for_each_lasso(alphabet_size, max_prefix, max_period, [&](const Lasso& w) {
    out.push_back(w);
    return true;
  });
  return out;
}

}  // namespace rll
