#pragma once

// Generator of derivations for the complement laws
//   top <= e + e^c        and        e & e^c <= 0
// for closed e, by induction on e. Open subterms are handled under
// hypotheses X_i <-> Y_i (top <= X_i + Y_i, resp. X_i & Y_i <= 0), where
// the complement side has X_i renamed to Y_i. Fixpoints introduce such a
// pair through a duality rule; letters follow homomorphism, partition and
// distributivity; lattice glue uses the extended-tier `lattice` rule.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rll/algebra.hpp"
#include "rll/calculus.hpp"

namespace rll {

namespace detail {

inline void collect_names(const Expr& e, std::set<std::string>& out) {
  if (e.is(ExprKind::Var) || e.is_fixpoint()) out.insert(e.name());
  for (const auto& k : e.children()) collect_names(k, out);
}

class ComplementDeriver {
 public:
  ComplementDeriver(const Expr& root, const Alphabet& a) : a_(a) { collect_names(root, taken_); }

  Derivation join_derivation(const Expr& e) {
    Derivation d = blank();
    join(e, {}, d.steps);
    return d;
  }

  Derivation meet_derivation(const Expr& e) {
    Derivation d = blank();
    meet(e, {}, d.steps);
    return d;
  }

 private:
  struct Hyp {
    std::string partner;  // the renamed variable on the complement side
    std::string step;     // step id of the hypothesis
    bool reversed;        // hypothesis states partner first
  };
  using Ctx = std::map<std::string, Hyp>;

  Derivation blank() const {
    Derivation d;
    d.system = ProofSystem::Rll;
    d.tier = Tier::Extended;
    d.alphabet = a_;
    return d;
  }

  std::string fresh_var(const char* base) {
    for (;;) {
      std::string name = base + std::to_string(fresh_counter_++);
      if (taken_.insert(name).second) return name;
    }
  }

  std::string add(std::vector<Step>& out, std::string rule, Claim claim, std::vector<std::string> premises = {}) {
    Step s;
    s.id = "s" + std::to_string(++step_counter_);
    s.rule = std::move(rule);
    s.claim = std::move(claim);
    s.premises = std::move(premises);
    out.push_back(std::move(s));
    return out.back().id;
  }

  static Expr rho(const Expr& e, const Ctx& ctx) {
    Expr out = e;
    for (const auto& [x, h] : ctx) out = rename_free(out, x, h.partner);
    return out;
  }

  Expr co(const Expr& e, const Ctx& ctx) const { return rho(complement(e, a_), ctx); }

  Claim join_goal(const Expr& e, const Ctx& ctx) const { return Claim::leq(Expr::top(), Expr::sum(e, co(e, ctx))); }
  Claim meet_goal(const Expr& e, const Ctx& ctx) const { return Claim::leq(Expr::meet(e, co(e, ctx)), Expr::zero()); }

  std::string join(const Expr& e, const Ctx& ctx, std::vector<Step>& out) {
    const Claim goal = join_goal(e, ctx);
    switch (e.kind()) {
      case ExprKind::Var: {
        const Hyp& h = ctx.at(e.name());
        return h.reversed ? add(out, "lattice", goal, {h.step}) : h.step;
      }
      case ExprKind::Zero:
      case ExprKind::Top: return add(out, "lattice", goal);
      case ExprKind::Sum:
      case ExprKind::Meet: {
        const auto l = join(e.left(), ctx, out);
        const auto r = join(e.right(), ctx, out);
        return add(out, "lattice", goal, {l, r});
      }
      case ExprKind::Act: {
        const Expr& f = e.body();
        const Expr cf = co(f, ctx);
        const Letter a = e.letter();
        const auto ih = join(f, ctx, out);
        const auto s1 = add(out, "cong", Claim::leq(Expr::act(a, Expr::top()), Expr::act(a, Expr::sum(f, cf))), {ih});
        const auto s2 = add(out, "act_sum",
                            Claim::eq(Expr::act(a, Expr::sum(f, cf)), Expr::sum(Expr::act(a, f), Expr::act(a, cf))));
        const auto s3 = add(out, "act_cover", Claim::eq(Expr::top(), act_cover_rhs(a_)));
        return add(out, "lattice", goal, {s1, s2, s3});
      }
      case ExprKind::Mu:
      case ExprKind::Nu: return fixpoint(e, ctx, out, true);
    }
    return {};
  }

  std::string meet(const Expr& e, const Ctx& ctx, std::vector<Step>& out) {
    const Claim goal = meet_goal(e, ctx);
    switch (e.kind()) {
      case ExprKind::Var: {
        const Hyp& h = ctx.at(e.name());
        return h.reversed ? add(out, "lattice", goal, {h.step}) : h.step;
      }
      case ExprKind::Zero:
      case ExprKind::Top: return add(out, "lattice", goal);
      case ExprKind::Sum:
      case ExprKind::Meet: {
        const auto l = meet(e.left(), ctx, out);
        const auto r = meet(e.right(), ctx, out);
        return add(out, "lattice", goal, {l, r});
      }
      case ExprKind::Act: {
        const Expr& f = e.body();
        const Expr cf = co(f, ctx);
        const Letter a = e.letter();
        const auto ih = meet(f, ctx, out);
        std::vector<std::string> prem;
        prem.push_back(add(out, "cong", Claim::leq(Expr::act(a, Expr::meet(f, cf)), Expr::act(a, Expr::zero())), {ih}));
        prem.push_back(add(out, "act_zero", Claim::eq(Expr::act(a, Expr::zero()), Expr::zero())));
        prem.push_back(add(out, "act_meet",
                           Claim::eq(Expr::act(a, Expr::meet(f, cf)), Expr::meet(Expr::act(a, f), Expr::act(a, cf)))));
        for (auto b : a_.all_letters()) {
          if (b == a) continue;
          prem.push_back(add(out, "act_disjoint",
                             Claim::eq(Expr::meet(Expr::act(a, f), Expr::act(b, Expr::top())), Expr::zero())));
        }
        return add(out, "lattice", goal, prem);
      }
      case ExprKind::Mu:
      case ExprKind::Nu: return fixpoint(e, ctx, out, false);
    }
    return {};
  }

  // Duality-rule step for sigma X.g. The rule wants the mu on the left, so
  // a nu is handled with the complement (a mu) in front and commuted back.
  std::string fixpoint(const Expr& e, const Ctx& ctx, std::vector<Step>& out, bool join_side) {
    const bool least = e.is(ExprKind::Mu);
    const Expr ce = co(e, ctx);
    const Expr& mu_side = least ? e : ce;
    const Expr& nu_side = least ? ce : e;
    auto combine = [&](Expr l, Expr r) { return join_side ? Expr::sum(std::move(l), std::move(r)) : Expr::meet(std::move(l), std::move(r)); };
    auto orient = [&](Expr inner) { return join_side ? Claim::leq(Expr::top(), std::move(inner)) : Claim::leq(std::move(inner), Expr::zero()); };

    const std::string xm = fresh_var("U"), yn = fresh_var("V");
    Step rule;
    rule.rule = join_side ? "dual_join" : "dual_meet";
    rule.claim = orient(combine(mu_side, nu_side));
    rule.has_hyp = true;
    rule.fresh = {xm, yn};

    std::vector<Step>& inner = rule.hyp_steps;
    const auto h0 = add(inner, "hyp", orient(combine(Expr::var(xm), Expr::var(yn))));
    // the original expression's bound variable becomes its own fresh name
    const std::string mine = least ? xm : yn;
    const std::string partner = least ? yn : xm;
    Ctx inner_ctx = ctx;
    inner_ctx[mine] = Hyp{partner, h0, !least};
    const Expr g = rename_free(e.body(), e.name(), mine);
    const auto ih = join_side ? join(g, inner_ctx, inner) : meet(g, inner_ctx, inner);
    const Expr cg = co(g, inner_ctx);
    const Claim last = orient(least ? combine(g, cg) : combine(cg, g));
    if (!least || inner.back().id != ih) add(inner, "lattice", last, {ih});

    rule.id = "s" + std::to_string(++step_counter_);
    out.push_back(std::move(rule));
    const std::string id = out.back().id;
    if (least) return id;
    return add(out, "lattice", join_side ? join_goal(e, ctx) : meet_goal(e, ctx), {id});
  }

  const Alphabet& a_;
  std::set<std::string> taken_;
  std::size_t fresh_counter_ = 0;
  std::size_t step_counter_ = 0;
};

}  // namespace detail

struct ComplementDerivations {
  Derivation join;  // top <= e + e^c
  Derivation meet;  // e & e^c <= 0
};

inline ComplementDerivations derive_complement(const Expr& e, const Alphabet& a) {
  if (!is_closed(e)) throw ProofError("derive_complement needs a closed expression");
  check_letters(e, a);
  return {detail::ComplementDeriver(e, a).join_derivation(e), detail::ComplementDeriver(e, a).meet_derivation(e)};
}

}  // namespace rll
