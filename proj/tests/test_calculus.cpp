#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace rll;
using testing_support::ex;

namespace {

const Alphabet AB = testing_support::letters(2);
const Alphabet PQ = Alphabet::powerset({"P", "Q"});

Step step(std::string id, std::string rule, Claim c, std::vector<std::string> premises = {}) {
  Step s;
  s.id = std::move(id);
  s.rule = std::move(rule);
  s.claim = std::move(c);
  s.premises = std::move(premises);
  return s;
}

Step fstep(std::string id, std::string rule, const std::string& formula, std::vector<std::string> premises = {}) {
  Step s;
  s.id = std::move(id);
  s.rule = std::move(rule);
  s.formula = parse_formula(formula, PQ);
  s.premises = std::move(premises);
  return s;
}

Derivation rll_proof(std::vector<Step> steps, Tier tier = Tier::Strict) {
  Derivation d;
  d.system = ProofSystem::Rll;
  d.tier = tier;
  d.alphabet = AB;
  d.steps = std::move(steps);
  return d;
}

Derivation multl_proof(std::vector<Step> steps) {
  Derivation d;
  d.system = ProofSystem::Multl;
  d.alphabet = PQ;
  d.steps = std::move(steps);
  return d;
}

Claim leq(const std::string& l, const std::string& r) { return Claim::leq(ex(l, AB), ex(r, AB)); }
Claim eq(const std::string& l, const std::string& r) { return Claim::eq(ex(l, AB), ex(r, AB)); }

// ---------------------------------------------------------------------------
// RLL checker

TEST(CheckRll, ZeroBelowAnything) {
  const Verdict v = check(rll_proof({step("1", "refl", leq("a.top", "a.top")),
                                     step("2", "induction", leq("mu X. X", "a.top"), {"1"})}));
  EXPECT_TRUE(v.accepted) << print_verdict(v);
  EXPECT_EQ(print_verdict(v), "accepted");
}

TEST(CheckRll, TransMismatch) {
  const Verdict v = check(rll_proof({step("1", "sum_comm", eq("a.top + b.top", "b.top + a.top")),
                                     step("2", "sum_idem", eq("a.0 + a.0", "a.0")),
                                     step("3", "trans", eq("a.top + b.top", "a.0"), {"1", "2"})}));
  EXPECT_FALSE(v.accepted);
  EXPECT_EQ(v.step, "3");
  EXPECT_NE(v.reason.find("premise mismatch"), std::string::npos);
  EXPECT_EQ(print_verdict(v).rfind("rejected at step 3: ", 0), 0u);
}

TEST(CheckRll, AxiomInstancesEitherOrientation) {
  EXPECT_TRUE(check(rll_proof({step("1", "sum_comm", eq("b.top + a.0", "a.0 + b.top"))})).accepted);
  EXPECT_TRUE(check(rll_proof({step("1", "act_zero", eq("0", "a.0"))})).accepted);
  EXPECT_TRUE(check(rll_proof({step("1", "act_disjoint", eq("a.top & b.top", "0"))})).accepted);
  EXPECT_FALSE(check(rll_proof({step("1", "act_disjoint", eq("a.top & a.top", "0"))})).accepted);
  EXPECT_TRUE(check(rll_proof({step("1", "act_cover", eq("top", "a.top + b.top"))})).accepted);
  EXPECT_FALSE(check(rll_proof({step("1", "act_cover", eq("top", "a.top"))})).accepted);
}

TEST(CheckRll, SubstitutionIsChecked) {
  Step s = step("1", "sum_comm", eq("a.top + b.top", "b.top + a.top"));
  s.subst = {{"e", ex("a.top", AB)}, {"f", ex("b.top", AB)}};
  EXPECT_TRUE(check(rll_proof({s})).accepted);
  s.subst = {{"e", ex("b.top", AB)}};
  EXPECT_FALSE(check(rll_proof({s})).accepted);
  s.subst = {{"q", ex("b.top", AB)}};
  const Verdict v = check(rll_proof({s}));
  EXPECT_FALSE(v.accepted);
  EXPECT_NE(v.reason.find("malformed substitution"), std::string::npos);
}

TEST(CheckRll, PrefixAndInduction) {
  EXPECT_TRUE(check(rll_proof({step("1", "prefix", leq("a.(mu X. a.X)", "mu X. a.X"))})).accepted);
  EXPECT_FALSE(check(rll_proof({step("1", "prefix", leq("mu X. a.X", "a.(mu X. a.X)"))})).accepted);
  EXPECT_TRUE(check(rll_proof({step("1", "postfix", leq("nu X. a.X", "a.(nu X. a.X)"))})).accepted);
  // induction needs e(f) <= f, not f <= e(f)
  EXPECT_FALSE(check(rll_proof({step("1", "refl", leq("top", "top")),
                                step("2", "coinduction", leq("top", "nu X. a.X"), {"1"})}))
                   .accepted);
}

TEST(CheckRll, CongruenceUnderBinders) {
  // from a.top <= top conclude mu Y. (b.Y + a.top) <= mu Y. (b.Y + top)
  const Verdict v = check(rll_proof({step("1", "refl", leq("a.top", "a.top")),
                                     step("2", "coinduction", leq("a.top", "nu X. X"), {"1"}),
                                     step("3", "cong", leq("b.(nu X. X) + a.top", "b.(nu X. X) + nu X. X"), {"2"})}));
  EXPECT_TRUE(v.accepted) << print_verdict(v);
  const Verdict bad = check(rll_proof({step("1", "refl", leq("a.top", "a.top")),
                                       step("2", "coinduction", leq("a.top", "nu X. X"), {"1"}),
                                       step("3", "cong", leq("b.(nu X. X) + nu X. X", "b.(nu X. X) + a.top"), {"2"})}));
  EXPECT_FALSE(bad.accepted);
}

TEST(CheckRll, StrictTierRejectsOracleSteps) {
  const Verdict v = check(rll_proof({step("1", "lattice", leq("a.top & b.top", "a.top"))}));
  EXPECT_FALSE(v.accepted);
  EXPECT_TRUE(check(rll_proof({step("1", "lattice", leq("a.top & b.top", "a.top"))}, Tier::Extended)).accepted);
}

TEST(CheckRll, StructuralErrors) {
  EXPECT_FALSE(check(rll_proof({})).accepted);
  EXPECT_FALSE(check(rll_proof({step("1", "refl", leq("top", "top")), step("1", "refl", leq("0", "0"))})).accepted);
  EXPECT_FALSE(check(rll_proof({step("1", "sym", eq("top", "top"), {"2"}), step("2", "refl", eq("top", "top"))})).accepted);
  EXPECT_FALSE(check(rll_proof({step("1", "frobnicate", eq("top", "top"))})).accepted);
  EXPECT_FALSE(check(rll_proof({step("1", "hyp", leq("top", "top"))})).accepted);
}

TEST(CheckRll, AssumptionsAreReported) {
  const Verdict v = check(rll_proof({step("h", "assume", leq("a.top", "b.top")),
                                     step("c", "lattice", leq("a.top + b.top", "b.top"), {"h"})},
                                    Tier::Extended));
  ASSERT_TRUE(v.accepted);
  EXPECT_EQ(v.assumptions, std::vector<std::string>{"h"});
  EXPECT_EQ(print_verdict(v), "accepted (under assumptions: h)");
}

Step duality(const std::string& id, Claim c, std::vector<std::string> fresh, std::vector<Step> hyp) {
  Step s = step(id, "dual_join", std::move(c));
  s.has_hyp = true;
  s.fresh = std::move(fresh);
  s.hyp_steps = std::move(hyp);
  return s;
}

TEST(CheckRll, DualityRule) {
  // top <= mu X. X + nu Y. Y from top <= U + V
  const Claim goal = leq("top", "(mu X. X) + nu Y. Y");
  const Claim h = Claim::leq(Expr::top(), Expr::sum(Expr::var("U"), Expr::var("V")));
  EXPECT_TRUE(check(rll_proof({duality("1", goal, {"U", "V"}, {step("h", "hyp", h)})})).accepted);
  EXPECT_FALSE(check(rll_proof({duality("1", goal, {"U", "U"}, {step("h", "hyp", h)})})).accepted);
  // the hypothesis pairs the fresh variables in declared order
  EXPECT_FALSE(check(rll_proof({duality("1", goal, {"V", "U"}, {step("h", "hyp", h)})})).accepted);
  const Claim last = Claim::leq(Expr::top(), Expr::sum(Expr::var("V"), Expr::var("U")));
  EXPECT_FALSE(check(rll_proof({duality("1", goal, {"U", "V"}, {step("h", "hyp", h), step("2", "lattice", last, {"h"})})},
                                Tier::Extended))
                   .accepted);
}

TEST(CheckRll, FreshnessViolation) {
  const Claim goal = Claim::leq(Expr::top(), Expr::sum(parse_expr("mu X. X + U", AB), ex("nu Y. Y", AB)));
  const Claim h = Claim::leq(Expr::top(), Expr::sum(Expr::var("U"), Expr::var("V")));
  const Verdict v = check(rll_proof({duality("1", goal, {"U", "V"}, {step("h", "hyp", h)})}));
  EXPECT_FALSE(v.accepted);
  EXPECT_NE(v.reason.find("freshness violation"), std::string::npos);
}

TEST(CheckRll, NestedFreshNamesMustDiffer) {
  auto d = derive_complement(example_ia(AB), AB).join;
  std::vector<Step*> all;
  testing_support::flatten(d.steps, all);
  std::vector<Step*> rules;
  for (auto* s : all)
    if (s->has_hyp) rules.push_back(s);
  ASSERT_EQ(rules.size(), 2u);
  const auto outer = rules[0]->fresh;
  // rename the inner rule's fresh variables to the outer ones throughout
  auto reuse = d;
  std::vector<Step*> all2;
  testing_support::flatten(reuse.steps, all2);
  Step* inner = nullptr;
  for (auto* s : all2)
    if (s->has_hyp && s->fresh != outer) inner = s;
  ASSERT_NE(inner, nullptr);
  inner->fresh = outer;
  EXPECT_FALSE(check(reuse).accepted);
}

// ---------------------------------------------------------------------------
// Boolean and lattice oracles

TEST(BoolTaut, Examples) {
  const Expr t = example_ia(AB), s = ex("a.b.top", AB), tc = complement(t, AB);
  const std::vector<Claim> premises{Claim::leq(Expr::top(), Expr::sum(t, tc)), Claim::leq(Expr::meet(t, tc), Expr::zero()),
                                    Claim::leq(Expr::top(), Expr::sum(t, s))};
  EXPECT_TRUE(bool_taut(Claim::leq(tc, s), premises, {t, s}, AB));
  const Expr e = ex("a.top", AB), f = ex("b.top", AB), g = ex("b.0", AB);
  EXPECT_TRUE(bool_taut(Claim::eq(Expr::meet(e, Expr::sum(f, g)), Expr::sum(Expr::meet(e, f), Expr::meet(e, g))), {},
                        {e, f, g}, AB));
  EXPECT_FALSE(bool_taut(Claim::leq(Expr::top(), t), {Claim::leq(Expr::top(), Expr::sum(t, s))}, {t, s}, AB));
}

TEST(BoolTaut, ComplementIsNegation) {
  const Expr t = example_fb(AB);
  EXPECT_TRUE(bool_taut(Claim::leq(Expr::top(), Expr::sum(t, complement(t, AB))), {}, {t}, AB));
  EXPECT_FALSE(lattice_taut(Claim::leq(Expr::top(), Expr::sum(t, complement(t, AB))), {}));
}

TEST(BoolTaut, RejectsOpenAndUnknownAtoms) {
  EXPECT_THROW(bool_taut(Claim::leq(Expr::var("X"), Expr::top()), {}, {Expr::var("X")}, AB), ProofError);
  EXPECT_THROW(bool_taut(Claim::leq(ex("a.top", AB), Expr::top()), {}, {}, AB), ProofError);
}

// Random two-valued terms, evaluated independently of the library.
struct Term {
  int kind;  // 0 zero, 1 top, 2 atom, 3 negated atom, 4 sum, 5 meet
  std::size_t atom = 0;
  std::vector<Term> kids;

  bool value(std::uint32_t v) const {
    switch (kind) {
      case 0: return false;
      case 1: return true;
      case 2: return (v >> atom) & 1u;
      case 3: return !((v >> atom) & 1u);
      case 4: return kids[0].value(v) || kids[1].value(v);
      default: return kids[0].value(v) && kids[1].value(v);
    }
  }

  Expr expr(const std::vector<Expr>& atoms) const {
    switch (kind) {
      case 0: return Expr::zero();
      case 1: return Expr::top();
      case 2: return atoms[atom];
      case 3: return complement(atoms[atom], AB);
      case 4: return Expr::sum(kids[0].expr(atoms), kids[1].expr(atoms));
      default: return Expr::meet(kids[0].expr(atoms), kids[1].expr(atoms));
    }
  }
};

Term random_term(std::mt19937_64& rng, std::size_t atoms, int depth) {
  std::uniform_int_distribution<int> leaf(0, 9), node(0, 2);
  if (depth == 0 || node(rng) == 0) {
    const int r = leaf(rng);
    if (r == 0) return {0, 0, {}};
    if (r == 1) return {1, 0, {}};
    return {r % 2 == 0 ? 2 : 3, rng() % atoms, {}};
  }
  return {node(rng) == 0 ? 5 : 4, 0, {random_term(rng, atoms, depth - 1), random_term(rng, atoms, depth - 1)}};
}

TEST(BoolTaut, AgreesWithBruteForce) {
  std::mt19937_64 rng(61);
  std::vector<Expr> pool;
  Expr chain = Expr::top();
  for (int i = 0; i < 6; ++i) pool.push_back(chain = Expr::act(Letter{static_cast<std::size_t>(i % 2)}, chain));
  int valid = 0;
  for (int i = 0; i < 2000; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(i % 6);
    const std::vector<Expr> atoms(pool.begin(), pool.begin() + static_cast<long>(n));
    std::vector<std::pair<Term, Term>> prem;
    std::vector<bool> prem_eq;
    for (auto k = rng() % 3; k > 0; --k) {
      prem.emplace_back(random_term(rng, n, 3), random_term(rng, n, 3));
      prem_eq.push_back(rng() % 2 == 0);
    }
    const Term l = random_term(rng, n, 3), r = random_term(rng, n, 3);
    const bool goal_eq = rng() % 2 == 0;
    bool expected = true;
    for (std::uint32_t v = 0; v < (1u << n) && expected; ++v) {
      bool hyps = true;
      for (std::size_t k = 0; k < prem.size(); ++k) {
        const bool a = prem[k].first.value(v), b = prem[k].second.value(v);
        hyps = hyps && (prem_eq[k] ? a == b : (!a || b));
      }
      const bool a = l.value(v), b = r.value(v);
      if (hyps && !(goal_eq ? a == b : (!a || b))) expected = false;
    }
    std::vector<Claim> cp;
    for (std::size_t k = 0; k < prem.size(); ++k) {
      const Expr a = prem[k].first.expr(atoms), b = prem[k].second.expr(atoms);
      cp.push_back(prem_eq[k] ? Claim::eq(a, b) : Claim::leq(a, b));
    }
    const Expr a = l.expr(atoms), b = r.expr(atoms);
    const Claim goal = goal_eq ? Claim::eq(a, b) : Claim::leq(a, b);
    EXPECT_EQ(bool_taut(goal, cp, atoms, AB), expected) << print_claim(goal, AB);
    valid += expected;
  }
  EXPECT_GT(valid, 100);
}

// ---------------------------------------------------------------------------
// mu-LTL checker

TEST(CheckMultl, AxiomsAndRules) {
  EXPECT_TRUE(check(multl_proof({fstep("1", "mu_prefix", "P | O (mu X. P | O X) -> (mu X. P | O X)")})).accepted);
  EXPECT_TRUE(check(multl_proof({fstep("1", "nu_postfix", "(nu X. P & O X) -> P & O (nu X. P & O X)")})).accepted);
  EXPECT_TRUE(check(multl_proof({fstep("1", "taut", "P | ~P")})).accepted);
  EXPECT_FALSE(check(multl_proof({fstep("1", "taut", "P | Q")})).accepted);
  EXPECT_TRUE(check(multl_proof({fstep("1", "next_or", "O (P | Q) -> O P | O Q")})).accepted);
  EXPECT_TRUE(check(multl_proof({fstep("1", "next_or", "O P | O Q -> O (P | Q)")})).accepted);
  EXPECT_TRUE(check(multl_proof({fstep("1", "next_and", "O (P & Q) -> O P & O Q")})).accepted);
}

TEST(CheckMultl, ModusPonens) {
  EXPECT_TRUE(check(multl_proof({fstep("1", "taut", "P | ~P"), fstep("2", "taut", "(P | ~P) -> (Q | ~Q)"),
                                 fstep("3", "mp", "Q | ~Q", {"1", "2"})}))
                  .accepted);
  const Verdict v = check(multl_proof({fstep("1", "taut", "P | ~P"), fstep("2", "taut", "(Q | ~Q) -> (Q | ~Q)"),
                                       fstep("3", "mp", "Q | ~Q", {"1", "2"})}));
  EXPECT_FALSE(v.accepted);
  EXPECT_EQ(v.step, "3");
}

TEST(CheckMultl, FixpointRules) {
  // nu-rule: from psi -> phi(psi) conclude psi -> nu X phi
  EXPECT_TRUE(check(multl_proof({fstep("1", "taut", "(P & ~P) -> P & O (P & ~P) | ~(P & ~P)"),
                                 fstep("2", "taut", "(P & ~P) -> (P & ~P)")}))
                  .accepted);
  EXPECT_TRUE(check(multl_proof({fstep("1", "nu_postfix", "(nu X. P & O X) -> P & O (nu X. P & O X)"),
                                 fstep("2", "nu_rule", "(nu X. P & O X) -> (nu Y. P & O Y)", {"1"})}))
                  .accepted);
  EXPECT_TRUE(check(multl_proof({fstep("1", "mu_prefix", "P | O (mu X. P | O X) -> (mu X. P | O X)"),
                                 fstep("2", "mu_rule", "(mu Y. P | O Y) -> (mu X. P | O X)", {"1"})}))
                  .accepted);
  EXPECT_FALSE(check(multl_proof({fstep("1", "mu_prefix", "P | O (mu X. P | O X) -> (mu X. P | O X)"),
                                  fstep("2", "nu_rule", "(mu Y. P | O Y) -> (mu X. P | O X)", {"1"})}))
                   .accepted);
}

TEST(CheckMultl, Necessitation) {
  EXPECT_TRUE(check(multl_proof({fstep("1", "taut", "P | ~P"), fstep("2", "nec", "O (P | ~P)", {"1"})})).accepted);
  EXPECT_FALSE(check(multl_proof({fstep("1", "taut", "P | ~P"), fstep("2", "nec", "O O (P | ~P)", {"1"})})).accepted);
}

// ---------------------------------------------------------------------------
// Shipped proofs

class ProofFiles : public ::testing::Test {
 protected:
  static Derivation load(const std::filesystem::path& p) { return parse_derivation(testing_support::read_text(p)); }
};

TEST_F(ProofFiles, AllAccepted) {
  const auto files = testing_support::proof_files();
  ASSERT_GE(files.size(), 6u);
  for (const auto& f : files) {
    const Verdict v = check(load(f));
    EXPECT_TRUE(v.accepted) << f << ": " << print_verdict(v);
  }
}

TEST_F(ProofFiles, MutantsRejected) {
  for (const auto& f : testing_support::proof_files()) {
    const auto muts = testing_support::mutants(load(f));
    EXPECT_FALSE(muts.empty());
    for (const auto& [label, d] : muts) EXPECT_FALSE(check(d).accepted) << f.filename() << ": " << label;
  }
}

TEST_F(ProofFiles, JsonRoundTrip) {
  for (const auto& f : testing_support::proof_files()) {
    const Derivation d = load(f);
    const Derivation back = parse_derivation(derivation_to_json(d).dump());
    EXPECT_EQ(print_verdict(check(back)), print_verdict(check(d)));
    EXPECT_EQ(derivation_to_json(back), derivation_to_json(d));
  }
}

TEST(ProofJson, Errors) {
  EXPECT_THROW(parse_derivation("{"), ProofError);
  EXPECT_THROW(parse_derivation("[]"), ProofError);
  EXPECT_THROW(parse_derivation(R"({"system":"rll","steps":[]})"), ProofError);
  EXPECT_THROW(parse_derivation(R"({"system":"x","alphabet":["a"],"steps":[]})"), ProofError);
  EXPECT_THROW(parse_derivation(R"({"alphabet":["a"],"steps":[{"id":1,"rule":"refl","claim":{"lhs":"a.","rhs":"0"}}]})"),
               ProofError);
  EXPECT_THROW(parse_derivation(R"({"alphabet":["a"],"steps":[{"id":1,"rule":"refl","claim":{"lhs":"0","rhs":"0"},"subst":[]}]})"),
               ProofError);
}

// Closed conclusions of assumption-free accepted derivations hold on all
// desk-scale lassos.
void expect_sound(const Derivation& d) {
  const Verdict v = check(d);
  ASSERT_TRUE(v.accepted);
  if (!v.assumptions.empty()) return;
  const Step& last = d.steps.back();
  const std::size_t k = d.alphabet.size();
  for (const auto& w : all_lassos(k, 2, 2)) {
    if (d.system == ProofSystem::Multl) {
      EXPECT_TRUE(satisfies(last.formula, w, d.alphabet));
      continue;
    }
    const Claim& c = last.claim;
    if (!is_closed(c.lhs) || !is_closed(c.rhs)) return;
    const bool l = member_oracle(c.lhs, w), r = member_oracle(c.rhs, w);
    EXPECT_TRUE(c.rel == Rel::Eq ? l == r : (!l || r)) << print_claim(c, d.alphabet) << " on " << print_lasso(w, d.alphabet);
  }
}

TEST_F(ProofFiles, Soundness) {
  for (const auto& f : testing_support::proof_files()) expect_sound(load(f));
}

// ---------------------------------------------------------------------------
// Complement derivations

TEST(DeriveComplement, Examples) {
  for (const char* text : {"0", "top", "mu X. a.X", "nu X. a.X"}) {
    const auto pair = derive_complement(ex(text, AB), AB);
    EXPECT_TRUE(check(pair.join).accepted) << text << ": " << print_verdict(check(pair.join));
    EXPECT_TRUE(check(pair.meet).accepted) << text << ": " << print_verdict(check(pair.meet));
    EXPECT_EQ(pair.join.tier, Tier::Extended);
  }
  const auto zero = derive_complement(Expr::zero(), AB);
  EXPECT_TRUE(same_claim(zero.join.steps.back().claim, Claim::leq(Expr::top(), Expr::sum(Expr::zero(), Expr::top()))));
  EXPECT_TRUE(same_claim(zero.meet.steps.back().claim, Claim::leq(Expr::meet(Expr::zero(), Expr::top()), Expr::zero())));
  EXPECT_THROW(derive_complement(Expr::var("X"), AB), ProofError);
}

TEST(DeriveComplement, RunningExamples) {
  for (const char* name : {"ia", "fb", "ia&fb"}) {
    const Expr e = example_by_name(name, AB);
    const auto pair = derive_complement(e, AB);
    EXPECT_TRUE(check(pair.join).accepted) << name;
    EXPECT_TRUE(check(pair.meet).accepted) << name;
    expect_sound(pair.join);
    expect_sound(pair.meet);
  }
}

TEST(DeriveComplement, Corpus) {
  for (std::size_t k = 1; k <= 3; ++k) {
    const Alphabet A = testing_support::letters(k);
    for (const auto& e : testing_support::closed_corpus(70 + k, 60, k, 8)) {
      const auto pair = derive_complement(e, A);
      const Verdict j = check(pair.join), m = check(pair.meet);
      EXPECT_TRUE(j.accepted) << print_expr(e, A) << ": " << print_verdict(j);
      EXPECT_TRUE(m.accepted) << print_expr(e, A) << ": " << print_verdict(m);
      EXPECT_TRUE(same_claim(pair.join.steps.back().claim,
                             Claim::leq(Expr::top(), Expr::sum(e, complement(e, A)))));
    }
  }
}

}  // namespace
