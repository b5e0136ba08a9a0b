#pragma once

#include <cstdint>
#include <algorithm>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "rll/rll.hpp"

namespace testing_support {

inline rll::Alphabet letters(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
  return rll::Alphabet::plain(names);
}

inline rll::Expr ex(const std::string& text, const rll::Alphabet& a) { return rll::parse_expr(text, a, true); }

inline rll::Lasso lasso(const std::string& text, const rll::Alphabet& a) { return rll::parse_lasso(text, a); }

/// Seeded (expression, lasso) pairs over an alphabet of the given size.
struct Pair {
  rll::Expr expr;
  rll::Lasso word;
};

inline std::vector<Pair> random_pairs(std::uint64_t seed, std::size_t count, std::size_t alphabet_size,
                                      std::size_t max_size, std::size_t max_prefix, std::size_t max_period) {
  std::mt19937_64 rng(seed);
  const rll::ExprSampler exprs(alphabet_size, max_size);
  const rll::LassoSampler words(alphabet_size, max_prefix, max_period);
  std::vector<Pair> out;
  for (std::size_t i = 0; i < count; ++i) {
    rll::Expr e = exprs.sample(rng);
    out.push_back({e, words.sample(rng)});
  }
  return out;
}

}  // namespace testing_support

namespace testing_support {

inline std::size_t expr_size(const rll::Expr& e) {
  std::size_t n = 1;
  for (const auto& k : e.children()) n += expr_size(k);
  return n;
}

inline std::vector<rll::Expr> closed_corpus(std::uint64_t seed, std::size_t count, std::size_t alphabet_size,
                                            std::size_t max_size) {
  std::mt19937_64 rng(seed);
  const rll::ExprSampler s(alphabet_size, max_size);
  std::vector<rll::Expr> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(s.sample(rng));
  return out;
}

}  // namespace testing_support

namespace testing_support {

/// Reference semantics over bitmask position sets: fixpoints are the
/// intersection of all prefixed points (mu) or union of all postfixed points
/// (nu), found by enumerating every subset. Only for lassos with few positions.
class ReferenceEval {
 public:
  explicit ReferenceEval(const rll::Lasso& w) : w_(w), n_(w.positions()), full_((1u << n_) - 1) {
    if (n_ > 10) throw std::invalid_argument("reference evaluator limited to 10 positions");
  }

  using Env = std::vector<std::pair<std::string, std::uint32_t>>;

  std::uint32_t eval(const rll::Expr& e, Env& env) const {
    using rll::ExprKind;
    switch (e.kind()) {
      case ExprKind::Zero: return 0;
      case ExprKind::Top: return full_;
      case ExprKind::Var:
        for (auto it = env.rbegin(); it != env.rend(); ++it)
          if (it->first == e.name()) return it->second;
        throw std::invalid_argument("unbound " + e.name());
      case ExprKind::Sum: return eval(e.left(), env) | eval(e.right(), env);
      case ExprKind::Meet: return eval(e.left(), env) & eval(e.right(), env);
      case ExprKind::Act: {
        const std::uint32_t s = eval(e.body(), env);
        std::uint32_t out = 0;
        for (std::size_t i = 0; i < n_; ++i)
          if (w_.letter_at(i) == e.letter() && ((s >> w_.succ(i)) & 1u)) out |= 1u << i;
        return out;
      }
      case ExprKind::Mu:
      case ExprKind::Nu: {
        const bool least = e.is(ExprKind::Mu);
        std::uint32_t acc = least ? full_ : 0;
        for (std::uint32_t cand = 0; cand <= full_; ++cand) {
          env.emplace_back(e.name(), cand);
          const std::uint32_t img = eval(e.body(), env);
          env.pop_back();
          if (least && (img & ~cand) == 0) acc &= cand;
          if (!least && (cand & ~img) == 0) acc |= cand;
        }
        return acc;
      }
    }
    return 0;
  }

  std::uint32_t eval(const rll::Expr& e) const {
    Env env;
    return eval(e, env);
  }

  std::uint32_t full() const { return full_; }

 private:
  rll::Lasso w_;
  std::size_t n_;
  std::uint32_t full_;
};

inline std::uint32_t mask_of(const rll::PositionSet& s) {
  std::uint32_t m = 0;
  for (auto i : s.members()) m |= 1u << i;
  return m;
}

inline rll::PositionSet set_of(std::uint32_t m, std::size_t n) {
  rll::PositionSet s(n);
  for (std::size_t i = 0; i < n; ++i)
    if ((m >> i) & 1u) s.insert(i);
  return s;
}

}  // namespace testing_support

#include <filesystem>
#include <fstream>
#include <sstream>

namespace testing_support {

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::filesystem::path> proof_files() {
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(std::filesystem::path(RLL_SOURCE_DIR) / "proofs"))
    if (entry.path().extension() == ".json") out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

template <class T>
std::optional<T> rename_first_var(const T& t, const std::string& to) {
  if (t.children().empty()) {
    if (t.is(decltype(t.kind())::Var) && t.name() != to) return T::var(to);
    return std::nullopt;
  }
  auto kids = t.children();
  for (auto& k : kids) {
    if (auto r = rename_first_var(k, to)) {
      k = *r;
      return rll::with_children(t, kids);
    }
  }
  return std::nullopt;
}

inline void flatten(std::vector<rll::Step>& steps, std::vector<rll::Step*>& out) {
  for (auto& s : steps) {
    out.push_back(&s);
    flatten(s.hyp_steps, out);
  }
}

/// Single-step mutants of a derivation: lhs/rhs swap of each '<=' step
/// whose swap is not trivially valid by the lattice bounds (mu-LTL steps are
/// negated instead), and renaming the first variable occurrence of a claim.
inline std::vector<std::pair<std::string, rll::Derivation>> mutants(const rll::Derivation& base) {
  using namespace rll;
  std::vector<std::pair<std::string, Derivation>> out;
  std::vector<Step*> index;
  Derivation probe = base;
  flatten(probe.steps, index);
  for (std::size_t k = 0; k < index.size(); ++k) {
    for (int kind = 0; kind < 2; ++kind) {
      Derivation d = base;
      std::vector<Step*> steps;
      flatten(d.steps, steps);
      Step& s = *steps[k];
      std::string label;
      if (d.system == ProofSystem::Rll) {
        Claim& c = s.claim;
        if (kind == 0) {
          if (c.rel != Rel::Leq || alpha_equal(c.lhs, c.rhs) || c.lhs.is(ExprKind::Top) || c.rhs.is(ExprKind::Zero)) continue;
          std::swap(c.lhs, c.rhs);
          label = "swap";
        } else if (auto l = rename_first_var(c.lhs, "Zmut")) {
          c.lhs = *l;
          label = "rename";
        } else if (auto r = rename_first_var(c.rhs, "Zmut")) {
          c.rhs = *r;
          label = "rename";
        } else {
          continue;
        }
      } else if (kind == 0) {
        s.formula = negate_formula(s.formula);
        label = "negate";
      } else if (auto f = rename_first_var(s.formula, "Zmut")) {
        s.formula = *f;
        label = "rename";
      } else {
        continue;
      }
      out.emplace_back(label + " at step " + s.id, std::move(d));
    }
  }
  return out;
}

}  // namespace testing_support
