#pragma once

// The alternating parity automaton of an expression: states are the
// closure members, 0 and sums are existential, top and meets universal.
// Every other state has a single successor and is marked existential.

#include <string>
#include <vector>

#include "rll/closure.hpp"

namespace rll {

enum class Owner { Existential, Universal };

struct LetterTransition {
  std::size_t source;
  Letter letter;
  std::size_t target;
  bool operator==(const LetterTransition&) const = default;
};

struct EpsilonTransition {
  std::size_t source;
  std::size_t target;
  bool operator==(const EpsilonTransition&) const = default;
};

struct Apa {
  Alphabet alphabet;
  std::vector<Expr> states;  // closure members, same indices
  std::size_t initial = 0;
  std::vector<LetterTransition> letter_transitions;
  std::vector<EpsilonTransition> epsilon_transitions;
  std::vector<Owner> owner;
  std::vector<unsigned> priority;

  std::size_t size() const { return states.size(); }
};

inline Owner owner_of(const Expr& e) {
  return (e.is(ExprKind::Top) || e.is(ExprKind::Meet)) ? Owner::Universal : Owner::Existential;
}

inline Apa build_apa(const FlClosure& c, const Alphabet& alphabet) {
  if (c.priority.size() != c.members.size()) throw ClosureError("closure has no priorities assigned");
  Apa a;
  a.alphabet = alphabet;
  a.states = c.members;
  a.initial = 0;
  a.priority = c.priority;
  for (const auto& m : c.members) a.owner.push_back(owner_of(m));
  for (const auto& e : c.edges) {
    if (e.kind == EdgeKind::Act)
      a.letter_transitions.push_back({e.source, e.letter, e.target});
    else
      a.epsilon_transitions.push_back({e.source, e.target});
  }
  return a;
}

namespace detail {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace detail

/// DOT rendering. Existential states are diamonds, universal states boxes;
/// node order follows state order, so output is byte-stable.
inline std::string export_dot(const Apa& a) {
  std::string out = "digraph apa {\n";
  out += "  // initial: n" + std::to_string(a.initial) + "\n";
  for (std::size_t i = 0; i < a.size(); ++i) {
    out += "  n" + std::to_string(i) + " [shape=";
    out += a.owner[i] == Owner::Existential ? "diamond" : "box";
    out += ", label=\"" + detail::dot_escape(print_expr(a.states[i], a.alphabet)) + " [p=" +
           std::to_string(a.priority[i]) + "]\"];\n";
  }
  for (const auto& t : a.letter_transitions)
    out += "  n" + std::to_string(t.source) + " -> n" + std::to_string(t.target) + " [label=\"" +
           detail::dot_escape(a.alphabet.letter_name(t.letter)) + "\"];\n";
  for (const auto& t : a.epsilon_transitions)
    out += "  n" + std::to_string(t.source) + " -> n" + std::to_string(t.target) + ";\n";
  out += "}\n";
  return out;
}

}  // namespace rll
