#include <gtest/gtest.h>

#include <regex>
#include <set>

#include "helpers.hpp"

using namespace rll;
using testing_support::ex;

namespace {

const Alphabet AB = testing_support::letters(2);

Apa apa_of(const Expr& e, const Alphabet& a = AB) { return build_apa(coloured_closure(e), a); }

std::size_t count_matches(const std::string& text, const std::string& pattern) {
  const std::regex re(pattern);
  return static_cast<std::size_t>(std::distance(std::sregex_iterator(text.begin(), text.end(), re), std::sregex_iterator()));
}

TEST(Apa, SingleLoop) {
  const Apa a = apa_of(ex("mu X. a.X", AB));
  EXPECT_EQ(a.size(), 2u);
  ASSERT_EQ(a.letter_transitions.size(), 1u);
  EXPECT_EQ(a.letter_transitions[0].letter, Letter{0});
  EXPECT_EQ(a.epsilon_transitions.size(), 1u);
}

TEST(Apa, IntersectionRootIsUniversal) {
  const Apa a = apa_of(example_by_name("ia&fb", AB));
  EXPECT_EQ(a.owner[a.initial], Owner::Universal);
  std::size_t out = 0;
  for (const auto& t : a.epsilon_transitions) out += t.source == a.initial;
  EXPECT_EQ(out, 2u);
  EXPECT_EQ(a.size(), 13u);
}

TEST(Apa, ZeroIsADeadlockedExistentialState) {
  const Apa a = apa_of(Expr::zero());
  EXPECT_EQ(a.size(), 1u);
  EXPECT_EQ(a.owner[0], Owner::Existential);
  EXPECT_TRUE(a.letter_transitions.empty());
  EXPECT_TRUE(a.epsilon_transitions.empty());
}

TEST(Apa, NeedsPriorities) { EXPECT_THROW(build_apa(fl_closure(Expr::zero()), AB), ClosureError); }

TEST(Dot, Zero) {
  const std::string dot = export_dot(apa_of(Expr::zero()));
  EXPECT_NE(dot.find("n0 [shape=diamond, label=\"0 [p=0]\"];"), std::string::npos);
  EXPECT_EQ(dot.rfind("digraph apa {", 0), 0u);
  EXPECT_EQ(dot.back(), '\n');
}

TEST(Dot, SingleLoop) {
  const std::string dot = export_dot(apa_of(ex("mu X. a.X", AB)));
  EXPECT_EQ(count_matches(dot, R"(n\d+ \[shape)"), 2u);
  EXPECT_EQ(count_matches(dot, R"(-> n\d+ \[label="a"\];)"), 1u);
  EXPECT_EQ(count_matches(dot, R"(-> n\d+;)"), 1u);
}

TEST(Dot, IntersectionShape) {
  const std::string dot = export_dot(apa_of(example_by_name("ia&fb", AB)));
  EXPECT_EQ(count_matches(dot, R"(n\d+ \[shape)"), 13u);
  EXPECT_EQ(count_matches(dot, "shape=box"), 1u);
  // ia: a.X, b.Y; fb: b.X, a.X, a.(nu Y. a.Y)
  EXPECT_EQ(count_matches(dot, R"(\[label="[ab]"\];)"), 5u);
}

TEST(Dot, ByteStable) {
  const Expr e = example_fb(AB);
  EXPECT_EQ(export_dot(apa_of(e)), export_dot(apa_of(e)));
}

TEST(ApaProperties, TransitionShapes) {
  for (const auto& e : testing_support::closed_corpus(21, 300, 3, 14)) {
    const Apa a = apa_of(e, testing_support::letters(3));
    std::vector<std::size_t> letters(a.size(), 0), eps(a.size(), 0);
    for (const auto& t : a.letter_transitions) {
      ++letters[t.source];
      EXPECT_TRUE(a.states[t.source].is(ExprKind::Act));
      EXPECT_EQ(a.states[t.source].letter(), t.letter);
      EXPECT_TRUE(alpha_equal(a.states[t.target], a.states[t.source].body()));
    }
    for (const auto& t : a.epsilon_transitions) ++eps[t.source];
    for (std::size_t i = 0; i < a.size(); ++i) {
      const Expr& s = a.states[i];
      switch (s.kind()) {
        case ExprKind::Act:
          EXPECT_EQ(letters[i], 1u);
          EXPECT_EQ(eps[i], 0u);
          break;
        case ExprKind::Sum:
        case ExprKind::Meet: EXPECT_EQ(eps[i], 2u); break;
        case ExprKind::Mu:
        case ExprKind::Nu: EXPECT_EQ(eps[i], 1u); break;
        default: EXPECT_EQ(letters[i] + eps[i], 0u);
      }
      const bool universal = s.is(ExprKind::Top) || s.is(ExprKind::Meet);
      EXPECT_EQ(a.owner[i], universal ? Owner::Universal : Owner::Existential);
    }
  }
}

TEST(ApaProperties, EveryStateReachable) {
  for (const auto& e : testing_support::closed_corpus(22, 300, 2, 14)) {
    const Apa a = apa_of(e);
    std::vector<bool> seen(a.size(), false);
    std::vector<std::size_t> stack{a.initial};
    seen[a.initial] = true;
    while (!stack.empty()) {
      const std::size_t s = stack.back();
      stack.pop_back();
      for (const auto& t : a.letter_transitions)
        if (t.source == s && !seen[t.target]) seen[t.target] = true, stack.push_back(t.target);
      for (const auto& t : a.epsilon_transitions)
        if (t.source == s && !seen[t.target]) seen[t.target] = true, stack.push_back(t.target);
    }
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_TRUE(seen[i]);
  }
}

TEST(ApaProperties, DistinctClosuresGiveDistinctGraphs) {
  const auto corpus = testing_support::closed_corpus(23, 150, 2, 10);
  std::set<std::string> keys, dots;
  for (const auto& e : corpus) {
    if (!keys.insert(alpha_key(e)).second) continue;
    EXPECT_TRUE(dots.insert(export_dot(apa_of(e))).second) << print_expr(e, AB);
  }
}

}  // namespace
