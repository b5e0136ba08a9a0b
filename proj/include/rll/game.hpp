#pragma once

// Evaluation games on (lasso position, closure member) pairs and a
// recursive (Zielonka) parity game solver.
//
// Conventions: min-parity (an infinite play is won by Eloise iff the least
// priority seen infinitely often is even); a player with no move at a
// position they own loses.

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rll/algebra.hpp"
#include "rll/automaton.hpp"
#include "rll/closure.hpp"
#include "rll/semantics.hpp"

namespace rll {

enum class Player { Eloise = 0, Abelard = 1 };

inline Player opponent(Player p) { return p == Player::Eloise ? Player::Abelard : Player::Eloise; }
inline const char* player_name(Player p) { return p == Player::Eloise ? "Eloise" : "Abelard"; }

struct GamePosition {
  Player owner;
  unsigned priority;
};

struct ParityGame {
  std::vector<GamePosition> positions;
  std::vector<std::vector<std::size_t>> edges;
  std::size_t initial = 0;
  /// For evaluation games: (lasso position, closure member) of each node.
  std::vector<std::pair<std::size_t, std::size_t>> origin;

  std::size_t size() const { return positions.size(); }

  std::size_t add(Player owner, unsigned priority) {
    positions.push_back({owner, priority});
    edges.emplace_back();
    return positions.size() - 1;
  }
};

struct Solution {
  std::vector<Player> winner;
  /// Positional strategies, defined on owned positions inside the owner's
  /// winning region (and only where the owner has a move).
  std::vector<std::optional<std::size_t>> strategy_eloise;
  std::vector<std::optional<std::size_t>> strategy_abelard;

  const std::vector<std::optional<std::size_t>>& strategy(Player p) const {
    return p == Player::Eloise ? strategy_eloise : strategy_abelard;
  }
};

namespace detail {

class ZielonkaSolver {
 public:
  explicit ZielonkaSolver(const ParityGame& g) : g_(g), n_(g.size()), preds_(n_) {
    for (std::size_t v = 0; v < n_; ++v)
      for (auto u : g_.edges[v]) preds_[u].push_back(v);
  }

  Solution solve() {
    Solution sol;
    sol.winner.assign(n_, Player::Eloise);
    sol.strategy_eloise.assign(n_, std::nullopt);
    sol.strategy_abelard.assign(n_, std::nullopt);

    // Positions from which a player can force the other into a deadlock.
    Set all(n_, 1);
    auto [abelard_forced, abelard_strat] = attractor(Player::Abelard, Set(n_, 0), all);
    Set rest = minus(all, abelard_forced);
    auto [eloise_forced, eloise_strat] = attractor(Player::Eloise, Set(n_, 0), rest);
    Set core = minus(rest, eloise_forced);

    Result r = zielonka(core);
    for (std::size_t v = 0; v < n_; ++v) {
      Player w;
      std::optional<std::size_t> move;
      if (abelard_forced[v]) {
        w = Player::Abelard;
        move = abelard_strat[v];
      } else if (eloise_forced[v]) {
        w = Player::Eloise;
        move = eloise_strat[v];
      } else {
        w = r.win[1][v] ? Player::Abelard : Player::Eloise;
        move = r.strat[v];
      }
      sol.winner[v] = w;
      if (g_.positions[v].owner == w && move) (w == Player::Eloise ? sol.strategy_eloise : sol.strategy_abelard)[v] = move;
    }
    return sol;
  }

 private:
  using Set = std::vector<char>;
  using Strat = std::vector<std::optional<std::size_t>>;

  struct Result {
    Set win[2];
    Strat strat;
  };

  static Set minus(const Set& a, const Set& b) {
    Set out(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && !b[i];
    return out;
  }

  // Attractor of `target` for player p inside `sub`. Opponent positions in
  // `sub` with no move inside `sub` are attracted vacuously.
  std::pair<Set, Strat> attractor(Player p, const Set& target, const Set& sub) const {
    Set attr(n_, 0);
    Strat strat(n_, std::nullopt);
    std::vector<std::size_t> remaining(n_, 0);
    std::deque<std::size_t> queue;
    for (std::size_t v = 0; v < n_; ++v) {
      if (!sub[v]) continue;
      for (auto u : g_.edges[v])
        if (sub[u]) ++remaining[v];
      if (target[v] || (g_.positions[v].owner != p && remaining[v] == 0)) {
        attr[v] = 1;
        queue.push_back(v);
      }
    }
    while (!queue.empty()) {
      const auto v = queue.front();
      queue.pop_front();
      for (auto u : preds_[v]) {
        if (!sub[u] || attr[u]) continue;
        if (g_.positions[u].owner == p) {
          attr[u] = 1;
          strat[u] = v;
          queue.push_back(u);
        } else if (--remaining[u] == 0) {
          attr[u] = 1;
          queue.push_back(u);
        }
      }
    }
    return {attr, strat};
  }

  std::optional<std::size_t> any_move_within(std::size_t v, const Set& sub) const {
    for (auto u : g_.edges[v])
      if (sub[u]) return u;
    return std::nullopt;
  }

  Result zielonka(const Set& sub) {
    Result res;
    res.win[0].assign(n_, 0);
    res.win[1].assign(n_, 0);
    res.strat.assign(n_, std::nullopt);

    std::optional<unsigned> lowest;
    for (std::size_t v = 0; v < n_; ++v)
      if (sub[v] && (!lowest || g_.positions[v].priority < *lowest)) lowest = g_.positions[v].priority;
    if (!lowest) return res;

    const Player alpha = (*lowest % 2 == 0) ? Player::Eloise : Player::Abelard;
    const int a = static_cast<int>(alpha), b = 1 - a;
    Set top(n_, 0);
    for (std::size_t v = 0; v < n_; ++v) top[v] = sub[v] && g_.positions[v].priority == *lowest;

    auto [attr_a, strat_a] = attractor(alpha, top, sub);
    Result inner = zielonka(minus(sub, attr_a));

    bool opponent_wins_something = false;
    for (std::size_t v = 0; v < n_; ++v) opponent_wins_something |= inner.win[b][v] != 0;

    if (!opponent_wins_something) {
      res.win[a] = sub;
      for (std::size_t v = 0; v < n_; ++v) {
        if (!sub[v] || g_.positions[v].owner != alpha) continue;
        if (!attr_a[v])
          res.strat[v] = inner.strat[v];
        else if (!top[v])
          res.strat[v] = strat_a[v];
        else
          res.strat[v] = any_move_within(v, sub);
      }
      return res;
    }

    auto [attr_b, strat_b] = attractor(opponent(alpha), inner.win[b], sub);
    Result outer = zielonka(minus(sub, attr_b));
    for (std::size_t v = 0; v < n_; ++v) {
      if (!sub[v]) continue;
      if (attr_b[v]) {
        res.win[b][v] = 1;
        if (g_.positions[v].owner == opponent(alpha)) res.strat[v] = inner.win[b][v] ? inner.strat[v] : strat_b[v];
      } else {
        res.win[a][v] = outer.win[a][v];
        res.win[b][v] = outer.win[b][v];
        res.strat[v] = outer.strat[v];
      }
    }
    return res;
  }

  const ParityGame& g_;
  std::size_t n_;
  std::vector<std::vector<std::size_t>> preds_;
};

}  // namespace detail

inline Solution solve_parity(const ParityGame& g) { return detail::ZielonkaSolver(g).solve(); }

/// Evaluation game of `e` (via its coloured closure) on the lasso `w`,
/// restricted to the part reachable from (0, e).
inline ParityGame build_arena(const FlClosure& c, const Lasso& w) {
  if (c.priority.size() != c.size()) throw ClosureError("closure has no priorities assigned");
  ParityGame g;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  std::deque<std::size_t> queue;
  std::vector<std::vector<std::size_t>> succ(c.size());
  for (const auto& e : c.edges) succ[e.source].push_back(e.target);

  auto intern = [&](std::size_t pos, std::size_t member) {
    auto key = std::make_pair(pos, member);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    const Player owner = owner_of(c.members[member]) == Owner::Universal ? Player::Abelard : Player::Eloise;
    const auto id = g.add(owner, c.priority[member]);
    g.origin.push_back(key);
    index.emplace(key, id);
    queue.push_back(id);
    return id;
  };

  g.initial = intern(0, 0);
  while (!queue.empty()) {
    const auto id = queue.front();
    queue.pop_front();
    const auto [pos, member] = g.origin[id];
    const Expr& f = c.members[member];
    if (f.is(ExprKind::Act)) {
      if (w.letter_at(pos) == f.letter()) {
        const auto t = intern(w.succ(pos), succ[member].at(0));
        g.edges[id].push_back(t);
      }
      continue;
    }
    for (auto target : succ[member]) {
      const auto t = intern(pos, target);
      g.edges[id].push_back(t);
    }
  }
  return g;
}

inline ParityGame build_arena(const Expr& e, const Lasso& w) { return build_arena(coloured_closure(e), w); }

inline bool member_game(const FlClosure& c, const Lasso& w) {
  const ParityGame g = build_arena(c, w);
  return solve_parity(g).winner[g.initial] == Player::Eloise;
}

/// w in L(e), decided by solving the evaluation game.
inline bool member_game(const Expr& e, const Lasso& w) {
  if (!is_closed(e)) throw EvalError("membership needs a closed expression");
  return member_game(coloured_closure(e), w);
}

struct SearchBounds {
  std::size_t max_prefix = 2;
  std::size_t max_period = 3;
};

/// First normalized lasso (length-lexicographic order) on which e and f
/// disagree, if any within the bounds. A semi-decision only.
inline std::optional<Lasso> equiv_bounded(const Expr& e, const Expr& f, const Alphabet& a, SearchBounds bounds) {
  if (!is_closed(e) || !is_closed(f)) throw EvalError("equivalence search needs closed expressions");
  const FlClosure ce = coloured_closure(e), cf = coloured_closure(f);
  std::optional<Lasso> found;
  for_each_lasso(a.size(), bounds.max_prefix, bounds.max_period, [&](const Lasso& w) {
    if (member_game(ce, w) != member_game(cf, w)) {
      found = w;
      return false;
    }
    return true;
  });
  return found;
}

/// First lasso in L(e & f^c), i.e. a witness against L(e) being included
/// in L(f).
inline std::optional<Lasso> inclusion_bounded(const Expr& e, const Expr& f, const Alphabet& a, SearchBounds bounds) {
  if (!is_closed(e) || !is_closed(f)) throw EvalError("inclusion search needs closed expressions");
  const FlClosure c = coloured_closure(Expr::meet(e, complement(f, a)));
  std::optional<Lasso> found;
  for_each_lasso(a.size(), bounds.max_prefix, bounds.max_period, [&](const Lasso& w) {
    if (member_game(c, w)) {
      found = w;
      return false;
    }
    return true;
  });
  return found;
}

}  // namespace rll
