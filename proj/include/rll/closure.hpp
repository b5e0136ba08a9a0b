#pragma once

// Fischer-Ladner closure of a closed expression and its parity colouring.
//
// The one-step relation is
//   a.e -> e,   e + f -> e, f,   e & f -> e, f,   sX.e -> e[sX.e / X].
// Members are identified up to alpha-equivalence and numbered in
// breadth-first discovery order from the root.
//
// Priorities: members are ranked by a linear extension r of the subformula
// order (smaller subformulas first, discovery order breaking ties). A mu
// member gets 2r+1, every other member 2r. The ranks are injective, so the
// subformula-least member seen infinitely often along a play also carries the
// least priority seen infinitely often; that member is always a fixpoint, so
// the min-parity condition reproduces "won by Eloise iff it is a nu".

#include <deque>
#include <string>
#include <unordered_map>
#include <vector>

#include "rll/syntax.hpp"

namespace rll {

enum class EdgeKind { Act, SumLeft, SumRight, MeetLeft, MeetRight, Unfold };

inline const char* edge_kind_name(EdgeKind k) {
  switch (k) {
    case EdgeKind::Act: return "act";
    case EdgeKind::SumLeft: return "sum-left";
    case EdgeKind::SumRight: return "sum-right";
    case EdgeKind::MeetLeft: return "meet-left";
    case EdgeKind::MeetRight: return "meet-right";
    case EdgeKind::Unfold: return "unfold";
  }
  return "?";
}

struct FlEdge {
  std::size_t source;
  std::size_t target;
  EdgeKind kind;
  Letter letter;  // meaningful for EdgeKind::Act only

  bool operator==(const FlEdge&) const = default;
};

struct FlClosure {
  Expr root;
  std::vector<Expr> members;
  std::vector<FlEdge> edges;
  /// (f, g) with f a proper subformula of g, both members.
  std::vector<std::pair<std::size_t, std::size_t>> subformula_pairs;
  /// Linear extension of the subformula order; empty until assigned.
  std::vector<std::size_t> rank;
  std::vector<unsigned> priority;

  std::size_t size() const { return members.size(); }

  std::vector<std::size_t> successors(std::size_t i) const {
    std::vector<std::size_t> out;
    for (const auto& e : edges)
      if (e.source == i) out.push_back(e.target);
    return out;
  }
};

class ClosureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void collect_subterm_keys(const Expr& e, std::unordered_map<std::string, bool>& out) {
  out.emplace(alpha_key(e), true);
  for (const auto& k : e.children()) collect_subterm_keys(k, out);
}

}  // namespace detail

/// Least set of expressions containing `e` and closed under the one-step
/// relation. Priorities are not assigned here.
inline FlClosure fl_closure(const Expr& e) {
  if (!is_closed(e)) throw ClosureError("Fischer-Ladner closure needs a closed expression");
  FlClosure c;
  c.root = e;
  std::unordered_map<std::string, std::size_t> index;
  std::deque<std::size_t> queue;

  auto intern = [&](const Expr& f) {
    auto key = alpha_key(f);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    const std::size_t id = c.members.size();
    index.emplace(std::move(key), id);
    c.members.push_back(f);
    queue.push_back(id);
    return id;
  };

  intern(e);
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    const Expr f = c.members[i];
    switch (f.kind()) {
      case ExprKind::Act: c.edges.push_back({i, intern(f.body()), EdgeKind::Act, f.letter()}); break;
      case ExprKind::Sum: {
        const auto l = intern(f.left());
        const auto r = intern(f.right());
        c.edges.push_back({i, l, EdgeKind::SumLeft, {}});
        c.edges.push_back({i, r, EdgeKind::SumRight, {}});
        break;
      }
      case ExprKind::Meet: {
        const auto l = intern(f.left());
        const auto r = intern(f.right());
        c.edges.push_back({i, l, EdgeKind::MeetLeft, {}});
        c.edges.push_back({i, r, EdgeKind::MeetRight, {}});
        break;
      }
      case ExprKind::Mu:
      case ExprKind::Nu: c.edges.push_back({i, intern(unfold(f)), EdgeKind::Unfold, {}}); break;
      default: break;
    }
  }

  // subformula relation restricted to members
  for (std::size_t g = 0; g < c.members.size(); ++g) {
    std::unordered_map<std::string, bool> subs;
    detail::collect_subterm_keys(c.members[g], subs);
    for (std::size_t f = 0; f < c.members.size(); ++f) {
      if (f == g) continue;
      if (subs.count(alpha_key(c.members[f])) != 0) c.subformula_pairs.emplace_back(f, g);
    }
  }
  return c;
}

/// Fills `rank` and `priority`: a subformula-topological order with
/// discovery-order tie-break; mu members odd, all others even.
inline FlClosure assign_priorities(FlClosure c) {
  const std::size_t n = c.members.size();
  std::vector<std::size_t> pending(n, 0);
  std::vector<std::vector<std::size_t>> above(n);
  for (auto [f, g] : c.subformula_pairs) {
    ++pending[g];
    above[f].push_back(g);
  }
  c.rank.assign(n, 0);
  std::vector<bool> done(n, false);
  for (std::size_t r = 0; r < n; ++r) {
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!done[i] && pending[i] == 0) {
        pick = i;
        break;
      }
    }
    if (pick == n) throw ClosureError("subformula relation is cyclic");
    done[pick] = true;
    c.rank[pick] = r;
    for (auto g : above[pick]) --pending[g];
  }
  c.priority.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<unsigned>(c.rank[i]);
    c.priority[i] = c.members[i].is(ExprKind::Mu) ? 2 * r + 1 : 2 * r;
  }
  return c;
}

/// Closure with priorities assigned.
inline FlClosure coloured_closure(const Expr& e) { return assign_priorities(fl_closure(e)); }

/// Line-oriented listing: members with priorities, then edges.
inline std::string print_closure(const FlClosure& c, const Alphabet& a) {
  std::string out = "members " + std::to_string(c.members.size()) + "\n";
  for (std::size_t i = 0; i < c.members.size(); ++i) {
    out += std::to_string(i) + "\t";
    out += c.priority.empty() ? "p=?" : "p=" + std::to_string(c.priority[i]);
    out += "\t" + print_expr(c.members[i], a) + "\n";
  }
  out += "edges " + std::to_string(c.edges.size()) + "\n";
  for (const auto& e : c.edges) {
    out += std::to_string(e.source) + " -> " + std::to_string(e.target) + "\t" + edge_kind_name(e.kind);
    if (e.kind == EdgeKind::Act) out += " " + a.letter_name(e.letter);
    out += "\n";
  }
  return out;
}

}  // namespace rll
