#pragma once

// Proof checking for the equational RLL calculus and the Hilbert-style
// mu-LTL system.
//
// RLL steps prove claims e = f or e <= f (read as e + f = f). A step names
// a rule, cites earlier steps as premises, optionally carries a
// substitution for the rule's metavariables (verified against the matched
// instance), and, for the duality rules, a hypothetical sub-derivation
// with declared fresh variables.
//
// RLL rules
//   structural  refl sym trans eq_leq leq_intro leq_elim antisym cong
//   lattice     sum_zero sum_assoc sum_comm sum_idem sum_absorb sum_dist
//               meet_top meet_assoc meet_comm meet_idem meet_absorb meet_dist
//   letters     act_zero act_sum act_meet act_disjoint act_cover
//   fixpoints   prefix induction postfix coinduction
//   duality     dual_join dual_meet (with hypothetical context), hyp
//   other       assume (top level only; reported in the verdict)
//   extended    bool (two-element Boolean check, closed atoms, t^c = not t)
//               lattice (two-element lattice check, opaque atoms)
//
// mu-LTL rules: taut next_or next_and mu_prefix nu_postfix mp nec mu_rule
// nu_rule.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rll/algebra.hpp"
#include "rll/syntax.hpp"

namespace rll {

class ProofError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Rel { Eq, Leq };
enum class ProofSystem { Rll, Multl };
enum class Tier { Strict, Extended };

struct Claim {
  Rel rel = Rel::Eq;
  Expr lhs;
  Expr rhs;

  static Claim eq(Expr l, Expr r) { return {Rel::Eq, std::move(l), std::move(r)}; }
  static Claim leq(Expr l, Expr r) { return {Rel::Leq, std::move(l), std::move(r)}; }
};

inline bool same_claim(const Claim& a, const Claim& b) {
  return a.rel == b.rel && alpha_equal(a.lhs, b.lhs) && alpha_equal(a.rhs, b.rhs);
}

inline std::string print_claim(const Claim& c, const Alphabet& a) {
  return print_expr(c.lhs, a) + (c.rel == Rel::Eq ? " = " : " <= ") + print_expr(c.rhs, a);
}

struct Step {
  std::string id;
  std::string rule;
  Claim claim;      // RLL system
  Formula formula;  // mu-LTL system
  std::map<std::string, Expr> subst;
  std::map<std::string, Formula> formula_subst;
  std::optional<std::vector<Expr>> atoms;  // optional for `bool`
  std::vector<std::string> premises;
  bool has_hyp = false;
  std::vector<std::string> fresh;
  std::vector<Step> hyp_steps;
};

struct Derivation {
  ProofSystem system = ProofSystem::Rll;
  Tier tier = Tier::Strict;
  Alphabet alphabet;
  std::vector<Step> steps;
};

struct Verdict {
  bool accepted = false;
  std::string step;
  std::string reason;
  /// Ids of `assume` steps the conclusions depend on.
  std::vector<std::string> assumptions;

  static Verdict ok(std::vector<std::string> assumptions = {}) { return {true, {}, {}, std::move(assumptions)}; }
  static Verdict rejected(std::string step, std::string reason) { return {false, std::move(step), std::move(reason), {}}; }
};

inline std::string print_verdict(const Verdict& v) {
  if (!v.accepted) return "rejected at step " + v.step + ": " + v.reason;
  if (v.assumptions.empty()) return "accepted";
  std::string out = "accepted (under assumptions:";
  for (const auto& a : v.assumptions) out += " " + a;
  return out + ")";
}

// ---------------------------------------------------------------------------
// Two-element evaluation of lattice terms over opaque atoms.

namespace detail {

struct BoolTerm {
  enum Kind { Zero, Top, Atom, Sum, Meet } kind = Zero;
  std::size_t atom = 0;
  bool negated = false;
  std::vector<BoolTerm> kids;

  bool eval(std::uint64_t assignment) const {
    switch (kind) {
      case Zero: return false;
      case Top: return true;
      case Atom: return (((assignment >> atom) & 1U) != 0) != negated;
      case Sum: return kids[0].eval(assignment) || kids[1].eval(assignment);
      case Meet: return kids[0].eval(assignment) && kids[1].eval(assignment);
    }
    return false;
  }
};

class AtomTable {
 public:
  // `complements` enables t^c = not t; `open_atoms` allows atoms with free
  // variables; `grow` adds unknown non-lattice subterms as new atoms.
  AtomTable(const Alphabet* alphabet, bool open_atoms, bool grow)
      : alphabet_(alphabet), open_atoms_(open_atoms), grow_(grow) {}

  void add(const Expr& t) {
    if (!open_atoms_ && !is_closed(t)) throw ProofError("open atom " + print_expr(t, *alphabet_));
    const auto key = alpha_key(t);
    if (index_.count(key) != 0) return;
    const std::size_t id = count_++;
    index_.emplace(key, std::make_pair(id, false));
    if (alphabet_ != nullptr && !open_atoms_) index_.emplace(alpha_key(complement(t, *alphabet_)), std::make_pair(id, true));
  }

  BoolTerm translate(const Expr& e) {
    BoolTerm out;
    auto it = index_.find(alpha_key(e));
    if (it != index_.end()) {
      out.kind = BoolTerm::Atom;
      out.atom = it->second.first;
      out.negated = it->second.second;
      return out;
    }
    switch (e.kind()) {
      case ExprKind::Zero: out.kind = BoolTerm::Zero; return out;
      case ExprKind::Top: out.kind = BoolTerm::Top; return out;
      case ExprKind::Sum:
      case ExprKind::Meet:
        out.kind = e.is(ExprKind::Sum) ? BoolTerm::Sum : BoolTerm::Meet;
        out.kids.push_back(translate(e.left()));
        out.kids.push_back(translate(e.right()));
        return out;
      default: break;
    }
    if (!grow_) throw ProofError("unidentified subterm " + print_expr(e, *alphabet_));
    add(e);
    return translate(e);
  }

  std::size_t count() const { return count_; }

 private:
  const Alphabet* alphabet_;
  bool open_atoms_;
  bool grow_;
  std::size_t count_ = 0;
  std::unordered_map<std::string, std::pair<std::size_t, bool>> index_;
};

inline void collect_atoms(const Expr& e, std::vector<Expr>& out) {
  switch (e.kind()) {
    case ExprKind::Zero:
    case ExprKind::Top: return;
    case ExprKind::Sum:
    case ExprKind::Meet:
      collect_atoms(e.left(), out);
      collect_atoms(e.right(), out);
      return;
    default: out.push_back(e);
  }
}

constexpr std::size_t kMaxAtoms = 20;

inline bool two_valued(const Claim& claim, const std::vector<Claim>& premises, AtomTable& table) {
  struct Pair {
    BoolTerm l, r;
    Rel rel;
  };
  auto conv = [&](const Claim& c) { return Pair{table.translate(c.lhs), table.translate(c.rhs), c.rel}; };
  std::vector<Pair> hyps;
  for (const auto& p : premises) hyps.push_back(conv(p));
  const Pair goal = conv(claim);
  if (table.count() > kMaxAtoms) throw ProofError("too many atoms (" + std::to_string(table.count()) + ")");
  auto holds = [](const Pair& p, std::uint64_t v) {
    const bool l = p.l.eval(v), r = p.r.eval(v);
    return p.rel == Rel::Eq ? l == r : (!l || r);
  };
  const std::uint64_t total = std::uint64_t{1} << table.count();
  for (std::uint64_t v = 0; v < total; ++v) {
    bool premises_hold = true;
    for (const auto& h : hyps) premises_hold = premises_hold && holds(h, v);
    if (premises_hold && !holds(goal, v)) return false;
  }
  return true;
}

}  // namespace detail

/// Validity of (premises => claim) in the two-element Boolean algebra, with
/// the given closed atoms as variables and each atom's syntactic complement
/// read as its negation.
inline bool bool_taut(const Claim& claim, const std::vector<Claim>& premises, const std::vector<Expr>& atoms,
                      const Alphabet& alphabet) {
  detail::AtomTable table(&alphabet, false, false);
  for (const auto& t : atoms) table.add(t);
  return detail::two_valued(claim, premises, table);
}

/// As bool_taut, with atoms taken to be the maximal non-lattice subterms.
inline bool bool_taut(const Claim& claim, const std::vector<Claim>& premises, const Alphabet& alphabet) {
  std::vector<Expr> atoms;
  detail::collect_atoms(claim.lhs, atoms);
  detail::collect_atoms(claim.rhs, atoms);
  for (const auto& p : premises) {
    detail::collect_atoms(p.lhs, atoms);
    detail::collect_atoms(p.rhs, atoms);
  }
  return bool_taut(claim, premises, atoms, alphabet);
}

/// Validity of (premises => claim) in the two-element bounded lattice, with
/// all maximal non-lattice subterms (open or closed) as independent atoms.
inline bool lattice_taut(const Claim& claim, const std::vector<Claim>& premises) {
  detail::AtomTable table(nullptr, true, true);
  return detail::two_valued(claim, premises, table);
}

// ---------------------------------------------------------------------------

namespace detail {

struct StepFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] inline void fail(const std::string& why) { throw StepFailure(why); }

/// e <= f read off either e <= f or e + f = f.
inline std::optional<std::pair<Expr, Expr>> leq_view(const Claim& c) {
  if (c.rel == Rel::Leq) return std::make_pair(c.lhs, c.rhs);
  if (c.lhs.is(ExprKind::Sum) && alpha_equal(c.lhs.right(), c.rhs)) return std::make_pair(c.lhs.left(), c.rhs);
  return std::nullopt;
}

/// The equation behind a claim (e <= f becomes e + f = f).
inline std::pair<Expr, Expr> eq_view(const Claim& c) {
  if (c.rel == Rel::Eq) return {c.lhs, c.rhs};
  return {Expr::sum(c.lhs, c.rhs), c.rhs};
}

// Schema matching. Metavariables are Var nodes; letter metavariables are
// Act nodes with reserved ids.
constexpr std::size_t kLetterMetaA = static_cast<std::size_t>(-1);
constexpr std::size_t kLetterMetaB = static_cast<std::size_t>(-2);

struct Binding {
  std::map<std::string, Expr> exprs;
  std::map<std::size_t, Letter> letters;
};

inline bool match(const Expr& pat, const Expr& t, Binding& b) {
  if (pat.is(ExprKind::Var)) {
    auto it = b.exprs.find(pat.name());
    if (it != b.exprs.end()) return alpha_equal(it->second, t);
    b.exprs.emplace(pat.name(), t);
    return true;
  }
  if (pat.kind() != t.kind()) return false;
  if (pat.is(ExprKind::Act)) {
    auto it = b.letters.find(pat.letter().id);
    if (it != b.letters.end()) {
      if (it->second != t.letter()) return false;
    } else {
      b.letters.emplace(pat.letter().id, t.letter());
    }
  }
  for (std::size_t i = 0; i < pat.children().size(); ++i)
    if (!match(pat.children()[i], t.children()[i], b)) return false;
  return true;
}

struct Schema {
  Expr lhs, rhs;
  bool distinct_letters = false;
};

inline const std::map<std::string, Schema>& equational_axioms() {
  static const std::map<std::string, Schema> table = [] {
    const Expr e = Expr::var("e"), f = Expr::var("f"), g = Expr::var("g");
    auto S = [](Expr l, Expr r) { return Expr::sum(std::move(l), std::move(r)); };
    auto M = [](Expr l, Expr r) { return Expr::meet(std::move(l), std::move(r)); };
    auto A = [](Expr body) { return Expr::act(Letter{kLetterMetaA}, std::move(body)); };
    auto B = [](Expr body) { return Expr::act(Letter{kLetterMetaB}, std::move(body)); };
    std::map<std::string, Schema> t;
    t["sum_zero"] = {S(e, Expr::zero()), e};
    t["sum_assoc"] = {S(e, S(f, g)), S(S(e, f), g)};
    t["sum_comm"] = {S(e, f), S(f, e)};
    t["sum_idem"] = {S(e, e), e};
    t["sum_absorb"] = {S(e, M(e, f)), e};
    t["sum_dist"] = {S(e, M(f, g)), M(S(e, f), S(e, g))};
    t["meet_top"] = {M(e, Expr::top()), e};
    t["meet_assoc"] = {M(e, M(f, g)), M(M(e, f), g)};
    t["meet_comm"] = {M(e, f), M(f, e)};
    t["meet_idem"] = {M(e, e), e};
    t["meet_absorb"] = {M(e, S(e, f)), e};
    t["meet_dist"] = {M(e, S(f, g)), S(M(e, f), M(e, g))};
    t["act_zero"] = {A(Expr::zero()), Expr::zero()};
    t["act_sum"] = {A(S(e, f)), S(A(e), A(f))};
    t["act_meet"] = {A(M(e, f)), M(A(e), A(f))};
    t["act_disjoint"] = {M(A(e), B(f)), Expr::zero(), true};
    return t;
  }();
  return table;
}

inline Expr act_cover_rhs(const Alphabet& a) {
  std::vector<Expr> terms;
  for (auto l : a.all_letters()) terms.push_back(Expr::act(l, Expr::top()));
  return sum_of(terms);
}

inline void check_subst(const std::map<std::string, Expr>& given, const std::map<std::string, Expr>& found,
                        const Alphabet& a) {
  for (const auto& [k, v] : given) {
    auto it = found.find(k);
    if (it == found.end()) fail("malformed substitution: '" + k + "' is not a metavariable of this rule");
    if (!alpha_equal(it->second, v))
      fail("substitution mismatch for '" + k + "': instance has " + print_expr(it->second, a));
  }
}

inline std::set<std::string> free_in_claim(const Claim& c) {
  auto out = free_vars(c.lhs);
  auto r = free_vars(c.rhs);
  out.insert(r.begin(), r.end());
  return out;
}

// Scope of visible facts: enclosing hypothetical contexts form a chain.
struct Scope {
  const Scope* parent = nullptr;
  std::map<std::string, Claim> known;
  std::set<std::string> fresh;
  std::optional<Claim> hypothesis;

  const Claim* lookup(const std::string& id) const {
    for (const Scope* s = this; s != nullptr; s = s->parent) {
      auto it = s->known.find(id);
      if (it != s->known.end()) return &it->second;
    }
    return nullptr;
  }

  std::set<std::string> all_fresh() const {
    std::set<std::string> out;
    for (const Scope* s = this; s != nullptr; s = s->parent) out.insert(s->fresh.begin(), s->fresh.end());
    return out;
  }
};

class RllChecker {
 public:
  explicit RllChecker(const Derivation& d) : d_(d), a_(d.alphabet) {}

  Verdict run() {
    if (d_.steps.empty()) return Verdict::rejected("-", "empty derivation");
    Scope top;
    if (auto v = check_list(d_.steps, top)) return *v;
    return Verdict::ok(assumptions_);
  }

 private:
  std::optional<Verdict> check_list(const std::vector<Step>& steps, Scope& scope) {
    for (const auto& s : steps) {
      if (!ids_.insert(s.id).second) return Verdict::rejected(s.id, "duplicate step id");
      try {
        if (auto inner = check_step(s, scope)) return inner;
      } catch (const StepFailure& e) {
        return Verdict::rejected(s.id, e.what());
      } catch (const ProofError& e) {
        return Verdict::rejected(s.id, e.what());
      } catch (const SyntaxError& e) {
        return Verdict::rejected(s.id, e.what());
      }
      scope.known.emplace(s.id, s.claim);
    }
    return std::nullopt;
  }

  std::vector<Claim> premises_of(const Step& s, const Scope& scope, std::optional<std::size_t> expected) const {
    if (expected && s.premises.size() != *expected)
      fail("rule '" + s.rule + "' expects " + std::to_string(*expected) + " premise(s), got " +
           std::to_string(s.premises.size()));
    std::vector<Claim> out;
    for (const auto& p : s.premises) {
      const Claim* c = scope.lookup(p);
      if (c == nullptr) fail("premise mismatch: unknown or later step '" + p + "'");
      out.push_back(*c);
    }
    return out;
  }

  std::string show(const Expr& e) const { return print_expr(e, a_); }
  std::string show(const Claim& c) const { return print_claim(c, a_); }

  std::optional<Verdict> check_step(const Step& s, Scope& scope) {
    const Claim& c = s.claim;
    const std::string& r = s.rule;
    if (s.has_hyp && r != "dual_join" && r != "dual_meet") fail("rule '" + r + "' takes no hypothetical context");

    if (r == "refl") {
      premises_of(s, scope, 0);
      if (!alpha_equal(c.lhs, c.rhs)) fail("refl needs identical sides");
      check_subst(s.subst, {{"e", c.lhs}}, a_);
    } else if (r == "sym") {
      auto p = premises_of(s, scope, 1);
      if (c.rel != Rel::Eq || p[0].rel != Rel::Eq) fail("sym applies to equations");
      if (!alpha_equal(c.lhs, p[0].rhs) || !alpha_equal(c.rhs, p[0].lhs)) fail("premise mismatch: sym of " + show(p[0]));
    } else if (r == "trans") {
      auto p = premises_of(s, scope, 2);
      const bool both_eq = p[0].rel == Rel::Eq && p[1].rel == Rel::Eq;
      if (both_eq != (c.rel == Rel::Eq)) fail("trans: relation must be '=' exactly when both premises are equations");
      if (!alpha_equal(p[0].rhs, p[1].lhs)) fail("premise mismatch: middle terms differ");
      if (!alpha_equal(c.lhs, p[0].lhs) || !alpha_equal(c.rhs, p[1].rhs)) fail("premise mismatch: endpoints differ");
    } else if (r == "eq_leq") {
      auto p = premises_of(s, scope, 1);
      if (p[0].rel != Rel::Eq || c.rel != Rel::Leq) fail("eq_leq turns an equation into '<='");
      if (!alpha_equal(c.lhs, p[0].lhs) || !alpha_equal(c.rhs, p[0].rhs)) fail("premise mismatch");
    } else if (r == "leq_intro") {
      auto p = premises_of(s, scope, 1);
      if (p[0].rel != Rel::Eq || c.rel != Rel::Leq) fail("leq_intro turns e + f = f into e <= f");
      auto v = leq_view(p[0]);
      if (!v || !alpha_equal(v->first, c.lhs) || !alpha_equal(v->second, c.rhs)) fail("premise mismatch");
    } else if (r == "leq_elim") {
      auto p = premises_of(s, scope, 1);
      if (p[0].rel != Rel::Leq || c.rel != Rel::Eq) fail("leq_elim turns e <= f into e + f = f");
      auto [l, rr] = eq_view(p[0]);
      if (!alpha_equal(l, c.lhs) || !alpha_equal(rr, c.rhs)) fail("premise mismatch");
    } else if (r == "antisym") {
      auto p = premises_of(s, scope, 2);
      auto v0 = leq_view(p[0]), v1 = leq_view(p[1]);
      if (c.rel != Rel::Eq || !v0 || !v1) fail("antisym needs two '<=' premises and an equation");
      if (!alpha_equal(v0->first, c.lhs) || !alpha_equal(v0->second, c.rhs) || !alpha_equal(v1->first, c.rhs) ||
          !alpha_equal(v1->second, c.lhs))
        fail("premise mismatch");
    } else if (r == "cong") {
      auto p = premises_of(s, scope, std::nullopt);
      const auto guard = scope.all_fresh();
      if (!cong_walk(c.lhs, c.rhs, c.rel, p, guard, {})) fail("not a congruence instance of the premises");
    } else if (r == "act_cover") {
      premises_of(s, scope, 0);
      auto [l, rr] = eq_view(c);
      const Expr cover = act_cover_rhs(a_);
      const bool ok = (l.is(ExprKind::Top) && alpha_equal(rr, cover)) || (rr.is(ExprKind::Top) && alpha_equal(l, cover));
      if (!ok) fail("not an instance of act_cover (top = " + show(cover) + ")");
    } else if (equational_axioms().count(r) != 0) {
      premises_of(s, scope, 0);
      const Schema& sch = equational_axioms().at(r);
      auto [l, rr] = eq_view(c);
      Binding b;
      bool ok = match(sch.lhs, l, b) && match(sch.rhs, rr, b);
      if (!ok) {
        b = {};
        ok = match(sch.lhs, rr, b) && match(sch.rhs, l, b);
      }
      if (ok && sch.distinct_letters) ok = b.letters.at(kLetterMetaA) != b.letters.at(kLetterMetaB);
      if (!ok) fail("not an instance of " + r);
      check_subst(s.subst, b.exprs, a_);
    } else if (r == "prefix" || r == "postfix") {
      premises_of(s, scope, 0);
      auto v = leq_view(c);
      if (!v) fail(r + " concludes an inequation");
      const bool pre = r == "prefix";
      const Expr& fix = pre ? v->second : v->first;
      const Expr& other = pre ? v->first : v->second;
      if (!fix.is(pre ? ExprKind::Mu : ExprKind::Nu)) fail(std::string("expected a ") + (pre ? "mu" : "nu") + " on the " + (pre ? "right" : "left"));
      if (!alpha_equal(other, unfold(fix))) fail("other side is not the unfolding " + show(unfold(fix)));
      check_subst(s.subst, {{"e", fix.body()}, {"X", Expr::var(fix.name())}}, a_);
    } else if (r == "induction" || r == "coinduction") {
      auto p = premises_of(s, scope, 1);
      auto v = leq_view(c);
      auto pv = leq_view(p[0]);
      if (!v || !pv) fail(r + " works on inequations");
      const bool ind = r == "induction";
      const Expr& fix = ind ? v->first : v->second;
      const Expr& f = ind ? v->second : v->first;
      if (!fix.is(ind ? ExprKind::Mu : ExprKind::Nu)) fail(std::string("expected a ") + (ind ? "mu on the left" : "nu on the right"));
      const Expr ef = substitute(fix.body(), fix.name(), f);
      const bool ok = ind ? alpha_equal(pv->first, ef) && alpha_equal(pv->second, f)
                          : alpha_equal(pv->first, f) && alpha_equal(pv->second, ef);
      if (!ok) fail("premise mismatch: expected " + (ind ? show(ef) + " <= " + show(f) : show(f) + " <= " + show(ef)));
      check_subst(s.subst, {{"e", fix.body()}, {"X", Expr::var(fix.name())}, {"f", f}}, a_);
    } else if (r == "dual_join" || r == "dual_meet") {
      return check_duality(s, scope);
    } else if (r == "hyp") {
      premises_of(s, scope, 0);
      if (!scope.hypothesis) fail("hyp used outside a hypothetical context");
      if (!same_claim(c, *scope.hypothesis)) fail("claim is not the hypothesis " + show(*scope.hypothesis));
    } else if (r == "assume") {
      premises_of(s, scope, 0);
      if (scope.parent != nullptr) fail("assume is only allowed at top level");
      assumptions_.push_back(s.id);
    } else if (r == "bool" || r == "lattice") {
      if (d_.tier != Tier::Extended) fail("rule '" + r + "' requires the extended tier");
      auto p = premises_of(s, scope, std::nullopt);
      bool ok;
      if (r == "bool")
        ok = s.atoms ? bool_taut(c, p, *s.atoms, a_) : bool_taut(c, p, a_);
      else
        ok = lattice_taut(c, p);
      if (!ok) fail("not valid in the two-element " + std::string(r == "bool" ? "Boolean algebra" : "lattice"));
    } else {
      fail("unknown rule '" + r + "'");
    }
    return std::nullopt;
  }

  // Parallel walk: every position where the sides differ must be justified
  // by a premise (eq either way; leq forwards only, for leq claims).
  bool cong_walk(const Expr& l, const Expr& r, Rel rel, const std::vector<Claim>& premises,
                 const std::set<std::string>& guard, std::set<std::string> bound) const {
    if (alpha_equal(l, r)) return true;
    for (const auto& p : premises) {
      bool guarded = false;
      for (const auto& x : free_in_claim(p))
        if (bound.count(x) != 0 && guard.count(x) != 0) guarded = true;
      if (guarded) continue;
      if (p.rel == Rel::Eq && ((alpha_equal(p.lhs, l) && alpha_equal(p.rhs, r)) || (alpha_equal(p.lhs, r) && alpha_equal(p.rhs, l))))
        return true;
      if (rel == Rel::Leq) {
        auto v = leq_view(p);
        if (v && alpha_equal(v->first, l) && alpha_equal(v->second, r)) return true;
      }
    }
    if (l.kind() != r.kind() || l.children().empty()) return false;
    if (l.is(ExprKind::Act) && l.letter() != r.letter()) return false;
    if (l.is_fixpoint()) {
      Expr rb = r.body();
      if (l.name() != r.name()) {
        if (occurs_free(r, l.name())) return false;
        rb = rename_free(rb, r.name(), l.name());
      }
      bound.insert(l.name());
      return cong_walk(l.body(), rb, rel, premises, guard, bound);
    }
    for (std::size_t i = 0; i < l.children().size(); ++i)
      if (!cong_walk(l.children()[i], r.children()[i], rel, premises, guard, bound)) return false;
    return true;
  }

  static bool occurs_free(const Expr& e, const std::string& x) { return free_vars(e).count(x) != 0; }

  std::optional<Verdict> check_duality(const Step& s, Scope& scope) {
    const bool join = s.rule == "dual_join";
    premises_of(s, scope, 0);
    if (!s.has_hyp) fail("duality rule needs a hypothetical context");
    if (s.fresh.size() != 2 || s.fresh[0] == s.fresh[1]) fail("duality rule declares two distinct fresh variables");
    auto v = leq_view(s.claim);
    if (!v) fail("duality rule concludes an inequation");
    const Expr& bound_side = join ? v->first : v->second;
    const Expr& pair = join ? v->second : v->first;
    if (!bound_side.is(join ? ExprKind::Top : ExprKind::Zero)) fail(join ? "expected top on the left" : "expected 0 on the right");
    if (!pair.is(join ? ExprKind::Sum : ExprKind::Meet) || !pair.left().is(ExprKind::Mu) || !pair.right().is(ExprKind::Nu))
      fail(std::string("expected ") + (join ? "mu X e + nu Y f" : "mu X e & nu Y f"));

    const auto conclusion_free = free_in_claim(s.claim);
    const auto enclosing = scope.all_fresh();
    for (const auto& x : s.fresh) {
      if (conclusion_free.count(x) != 0) fail("freshness violation: " + x + " occurs free in the conclusion");
      if (enclosing.count(x) != 0) fail("freshness violation: " + x + " is already a hypothetical variable");
    }
    const Expr X = Expr::var(s.fresh[0]), Y = Expr::var(s.fresh[1]);
    auto combine = [&](Expr l, Expr r) { return join ? Expr::sum(std::move(l), std::move(r)) : Expr::meet(std::move(l), std::move(r)); };
    auto oriented = [&](Expr inner) { return join ? Claim::leq(Expr::top(), std::move(inner)) : Claim::leq(std::move(inner), Expr::zero()); };

    Scope child;
    child.parent = &scope;
    child.fresh = {s.fresh[0], s.fresh[1]};
    child.hypothesis = oriented(combine(X, Y));
    if (s.hyp_steps.empty()) fail("empty hypothetical derivation");
    if (auto inner = check_list(s.hyp_steps, child)) return inner;

    const Claim want = oriented(combine(substitute(pair.left().body(), pair.left().name(), X),
                                        substitute(pair.right().body(), pair.right().name(), Y)));
    const Claim& got = s.hyp_steps.back().claim;
    auto gv = leq_view(got);
    if (!gv || !alpha_equal(gv->first, want.lhs) || !alpha_equal(gv->second, want.rhs))
      fail("hypothetical derivation must end with " + show(want));
    check_subst(s.subst,
                {{"e", pair.left().body()}, {"f", pair.right().body()}, {"X", Expr::var(pair.left().name())},
                 {"Y", Expr::var(pair.right().name())}},
                a_);
    return std::nullopt;
  }

  const Derivation& d_;
  const Alphabet& a_;
  std::set<std::string> ids_;
  std::vector<std::string> assumptions_;
};

// ---------------------------------------------------------------------------
// mu-LTL

struct FormulaAtoms {
  std::unordered_map<std::string, std::size_t> index;
  std::size_t count = 0;

  // Returns (atom, negated).
  std::pair<std::size_t, bool> literal(const Formula& f) {
    const std::string k = alpha_key(f);
    std::string canon = k;
    bool neg = false;
    if (is_closed(f)) {
      const std::string nk = alpha_key(negate_formula(f));
      if (nk < k) {
        canon = nk;
        neg = true;
      }
    }
    auto it = index.find(canon);
    if (it == index.end()) it = index.emplace(canon, count++).first;
    return {it->second, neg};
  }
};

struct PropTerm {
  enum Kind { Bot, Top, Atom, Or, And } kind = Bot;
  std::size_t atom = 0;
  bool negated = false;
  std::vector<PropTerm> kids;

  bool eval(std::uint64_t v) const {
    switch (kind) {
      case Bot: return false;
      case Top: return true;
      case Atom: return (((v >> atom) & 1U) != 0) != negated;
      case Or: return kids[0].eval(v) || kids[1].eval(v);
      case And: return kids[0].eval(v) && kids[1].eval(v);
    }
    return false;
  }
};

inline PropTerm prop_skeleton(const Formula& f, FormulaAtoms& atoms) {
  PropTerm t;
  switch (f.kind()) {
    case FormulaKind::Bot: t.kind = PropTerm::Bot; return t;
    case FormulaKind::Top: t.kind = PropTerm::Top; return t;
    case FormulaKind::Or:
    case FormulaKind::And:
      t.kind = f.is(FormulaKind::Or) ? PropTerm::Or : PropTerm::And;
      t.kids.push_back(prop_skeleton(f.left(), atoms));
      t.kids.push_back(prop_skeleton(f.right(), atoms));
      return t;
    default: {
      auto [id, neg] = atoms.literal(f);
      t.kind = PropTerm::Atom;
      t.atom = id;
      t.negated = neg;
      return t;
    }
  }
}

}  // namespace detail

/// Propositional tautology check; maximal non-propositional subformulas are
/// opaque atoms, a closed atom and its negation are complementary.
inline bool is_tautology(const Formula& f) {
  detail::FormulaAtoms atoms;
  const detail::PropTerm t = detail::prop_skeleton(f, atoms);
  if (atoms.count > detail::kMaxAtoms) throw ProofError("too many atoms (" + std::to_string(atoms.count) + ")");
  const std::uint64_t total = std::uint64_t{1} << atoms.count;
  for (std::uint64_t v = 0; v < total; ++v)
    if (!t.eval(v)) return false;
  return true;
}

namespace detail {

class MultlChecker {
 public:
  explicit MultlChecker(const Derivation& d) : d_(d), a_(d.alphabet) {}

  Verdict run() {
    if (d_.steps.empty()) return Verdict::rejected("-", "empty derivation");
    std::set<std::string> ids;
    for (const auto& s : d_.steps) {
      if (!ids.insert(s.id).second) return Verdict::rejected(s.id, "duplicate step id");
      try {
        check(s);
      } catch (const StepFailure& e) {
        return Verdict::rejected(s.id, e.what());
      } catch (const ProofError& e) {
        return Verdict::rejected(s.id, e.what());
      }
      known_.emplace(s.id, s.formula);
    }
    return Verdict::ok();
  }

 private:
  std::string show(const Formula& f) const { return print_formula(f, a_); }

  std::vector<Formula> premises(const Step& s, std::size_t n) const {
    if (s.premises.size() != n)
      fail("rule '" + s.rule + "' expects " + std::to_string(n) + " premise(s), got " + std::to_string(s.premises.size()));
    std::vector<Formula> out;
    for (const auto& p : s.premises) {
      auto it = known_.find(p);
      if (it == known_.end()) fail("premise mismatch: unknown or later step '" + p + "'");
      out.push_back(it->second);
    }
    return out;
  }

  void check_subst(const Step& s, const std::map<std::string, Formula>& found) const {
    for (const auto& [k, v] : s.formula_subst) {
      auto it = found.find(k);
      if (it == found.end()) fail("malformed substitution: '" + k + "' is not a metavariable of this rule");
      if (!alpha_equal(it->second, v)) fail("substitution mismatch for '" + k + "': instance has " + show(it->second));
    }
  }

  // f = A -> B, read as ~A | B.
  static std::optional<std::pair<Formula, Formula>> as_implication(const Formula& f) {
    if (!f.is(FormulaKind::Or)) return std::nullopt;
    return std::make_pair(negate_formula(f.left()), f.right());
  }

  // Distribution of next over or/and: either direction or both.
  void check_next_dist(const Step& s, FormulaKind op) const {
    premises(s, 0);
    const Formula& f = s.formula;
    std::optional<std::pair<Formula, Formula>> sides;
    if (f.is(FormulaKind::And) && f.left().is(FormulaKind::Or)) sides = as_implication(f.left());
    else sides = as_implication(f);
    if (!sides) fail("not an instance of " + s.rule);
    auto fits = [&](const Formula& inner, const Formula& outer) -> std::optional<std::pair<Formula, Formula>> {
      if (!inner.is(FormulaKind::Next) || !inner.body().is(op)) return std::nullopt;
      const Formula& x = inner.body().left();
      const Formula& y = inner.body().right();
      const Formula expected = op == FormulaKind::Or ? Formula::lor(Formula::next(x), Formula::next(y))
                                                     : Formula::land(Formula::next(x), Formula::next(y));
      if (!alpha_equal(outer, expected)) return std::nullopt;
      return std::make_pair(x, y);
    };
    for (int swap = 0; swap < 2; ++swap) {
      const Formula& l = swap ? sides->second : sides->first;
      const Formula& r = swap ? sides->first : sides->second;
      auto xy = fits(l, r);
      if (!xy) continue;
      const bool ok = alpha_equal(f, implies(sides->first, sides->second)) || alpha_equal(f, iff(l, r)) ||
                      alpha_equal(f, iff(r, l));
      if (!ok) continue;
      check_subst(s, {{"phi", xy->first}, {"psi", xy->second}});
      return;
    }
    fail("not an instance of " + s.rule);
  }

  void check(const Step& s) {
    const std::string& r = s.rule;
    const Formula& f = s.formula;
    if (s.has_hyp) fail("mu-LTL rules take no hypothetical context");
    if (r == "taut") {
      premises(s, 0);
      if (!is_tautology(f)) fail("not a propositional tautology");
    } else if (r == "next_or") {
      check_next_dist(s, FormulaKind::Or);
    } else if (r == "next_and") {
      check_next_dist(s, FormulaKind::And);
    } else if (r == "mu_prefix") {
      premises(s, 0);
      auto imp = as_implication(f);
      if (!imp || !imp->second.is(FormulaKind::Mu) || !alpha_equal(imp->first, unfold(imp->second)))
        fail("not an instance of phi(mu X phi) -> mu X phi");
      check_subst(s, {{"phi", imp->second.body()}, {"X", Formula::var(imp->second.name())}});
    } else if (r == "nu_postfix") {
      premises(s, 0);
      auto imp = as_implication(f);
      if (!imp || !imp->first.is(FormulaKind::Nu) || !alpha_equal(imp->second, unfold(imp->first)))
        fail("not an instance of nu X phi -> phi(nu X phi)");
      check_subst(s, {{"phi", imp->first.body()}, {"X", Formula::var(imp->first.name())}});
    } else if (r == "mp") {
      auto p = premises(s, 2);
      const bool ok = alpha_equal(p[1], Formula::lor(negate_formula(p[0]), f)) ||
                      alpha_equal(p[0], Formula::lor(negate_formula(p[1]), f));
      if (!ok) fail("premise mismatch: neither premise is an implication from the other to the claim");
    } else if (r == "nec") {
      auto p = premises(s, 1);
      if (!f.is(FormulaKind::Next) || !alpha_equal(f.body(), p[0])) fail("premise mismatch: claim must be O of the premise");
    } else if (r == "mu_rule") {
      auto p = premises(s, 1);
      auto imp = as_implication(f);
      if (!imp || !imp->first.is(FormulaKind::Mu)) fail("mu_rule concludes mu X phi -> psi");
      const Formula& fix = imp->first;
      const Formula& psi = imp->second;
      const Formula want = implies(substitute(fix.body(), fix.name(), psi), psi);
      if (!alpha_equal(p[0], want)) fail("premise mismatch: expected " + show(want));
      check_subst(s, {{"phi", fix.body()}, {"X", Formula::var(fix.name())}, {"psi", psi}});
    } else if (r == "nu_rule") {
      auto p = premises(s, 1);
      auto imp = as_implication(f);
      if (!imp || !imp->second.is(FormulaKind::Nu)) fail("nu_rule concludes psi -> nu X phi");
      const Formula& fix = imp->second;
      const Formula& psi = imp->first;
      const Formula want = implies(psi, substitute(fix.body(), fix.name(), psi));
      if (!alpha_equal(p[0], want)) fail("premise mismatch: expected " + show(want));
      check_subst(s, {{"phi", fix.body()}, {"X", Formula::var(fix.name())}, {"psi", psi}});
    } else {
      fail("unknown rule '" + r + "'");
    }
  }

  const Derivation& d_;
  const Alphabet& a_;
  std::map<std::string, Formula> known_;
};

}  // namespace detail

inline Verdict check_rll(const Derivation& d) {
  if (d.system != ProofSystem::Rll) throw ProofError("not an RLL derivation");
  return detail::RllChecker(d).run();
}

inline Verdict check_multl(const Derivation& d) {
  if (d.system != ProofSystem::Multl) throw ProofError("not a mu-LTL derivation");
  return detail::MultlChecker(d).run();
}

inline Verdict check(const Derivation& d) { return d.system == ProofSystem::Rll ? check_rll(d) : check_multl(d); }

}  // namespace rll
