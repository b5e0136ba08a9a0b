#pragma once

// Seeded random expressions and lassos, plus the running examples.
//
// Expressions are drawn uniformly among all closed AST shapes of a given
// size (node count), letters and variable choices included; the size is
// first drawn with probability proportional to the number of shapes of
// that size. A binder at depth k binds X<k>, so every variable occurrence
// refers to an enclosing binder.

#include <random>
#include <string>
#include <vector>

#include "rll/parser.hpp"
#include "rll/semantics.hpp"
#include "rll/syntax.hpp"

namespace rll {

class ExprSampler {
 public:
  ExprSampler(std::size_t alphabet_size, std::size_t max_size) : letters_(alphabet_size), max_size_(max_size) {
    if (alphabet_size == 0) throw SyntaxError("empty alphabet");
    if (max_size == 0) throw SyntaxError("size budget must be positive");
    counts_.assign(max_size + 1, std::vector<long double>(max_size + 1, 0.0L));
    for (std::size_t s = 1; s <= max_size; ++s)
      for (std::size_t k = 0; k + s <= max_size + 1; ++k) counts_[s][k] = compute(s, k);
  }

  /// Number of closed shapes of size exactly s.
  long double count(std::size_t s) const { return s <= max_size_ ? counts_[s][0] : 0.0L; }

  Expr sample(std::mt19937_64& rng) const {
    std::vector<long double> weights;
    for (std::size_t s = 1; s <= max_size_; ++s) weights.push_back(counts_[s][0]);
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    return sample_of_size(pick(rng) + 1, rng);
  }

  Expr sample_of_size(std::size_t s, std::mt19937_64& rng) const { return build(s, 0, rng); }

 private:
  long double at(std::size_t s, std::size_t k) const { return s == 0 || s > max_size_ ? 0.0L : counts_[s][k]; }

  long double pairs(std::size_t s, std::size_t k) const {
    long double total = 0;
    for (std::size_t i = 1; i + 2 <= s; ++i) total += at(i, k) * at(s - 1 - i, k);
    return total;
  }

  long double compute(std::size_t s, std::size_t k) const {
    if (s == 1) return 2.0L + static_cast<long double>(k);
    return static_cast<long double>(letters_) * at(s - 1, k) + 2.0L * pairs(s, k) + 2.0L * at(s - 1, k + 1);
  }

  static std::string var_name(std::size_t depth) { return "X" + std::to_string(depth); }

  Expr build(std::size_t s, std::size_t k, std::mt19937_64& rng) const {
    if (s == 1) {
      std::uniform_int_distribution<std::size_t> d(0, k + 1);
      const std::size_t c = d(rng);
      if (c == 0) return Expr::zero();
      if (c == 1) return Expr::top();
      return Expr::var(var_name(c - 2));
    }
    const long double acts = static_cast<long double>(letters_) * at(s - 1, k);
    const long double bins = 2.0L * pairs(s, k);
    const long double fixes = 2.0L * at(s - 1, k + 1);
    std::uniform_real_distribution<long double> u(0.0L, acts + bins + fixes);
    long double x = u(rng);
    if (x < acts) {
      std::uniform_int_distribution<std::size_t> d(0, letters_ - 1);
      return Expr::act(Letter{d(rng)}, build(s - 1, k, rng));
    }
    x -= acts;
    if (x < bins) {
      const bool is_sum = x < bins / 2;
      std::vector<long double> w;
      for (std::size_t i = 1; i + 2 <= s; ++i) w.push_back(at(i, k) * at(s - 1 - i, k));
      std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
      const std::size_t i = pick(rng) + 1;
      Expr l = build(i, k, rng);
      Expr r = build(s - 1 - i, k, rng);
      return is_sum ? Expr::sum(std::move(l), std::move(r)) : Expr::meet(std::move(l), std::move(r));
    }
    x -= bins;
    return Expr::fix(x < fixes / 2, var_name(k), build(s - 1, k + 1, rng));
  }

  std::size_t letters_;
  std::size_t max_size_;
  std::vector<std::vector<long double>> counts_;
};

/// Uniform choice among the normalized lassos within the bounds.
class LassoSampler {
 public:
  LassoSampler(std::size_t alphabet_size, std::size_t max_prefix, std::size_t max_period)
      : all_(all_lassos(alphabet_size, max_prefix, max_period)) {}

  const Lasso& sample(std::mt19937_64& rng) const {
    std::uniform_int_distribution<std::size_t> d(0, all_.size() - 1);
    return all_[d(rng)];
  }

  const std::vector<Lasso>& all() const { return all_; }

 private:
  std::vector<Lasso> all_;
};

/// The alphabet {a, b} of the running examples.
inline Alphabet example_alphabet() { return Alphabet::plain({"a", "b"}); }

/// Infinitely many a's.
inline Expr example_ia(const Alphabet& a) { return parse_expr("nu X. mu Y. a.X + b.Y", a, true); }

/// Finitely many b's.
inline Expr example_fb(const Alphabet& a) { return parse_expr("mu X. b.X + a.X + a.nu Y. a.Y", a, true); }

struct ExampleRow {
  std::string name;   // "ia", "fb" or "ia&fb"
  std::string lasso;  // u(v) notation
  bool expected;
};

/// Expected memberships of the running examples over {a, b}.
inline std::vector<ExampleRow> example_table() {
  return {
      {"ia", "(ab)", true},     {"ia", "(ba)", true},  {"ia", "b(ab)", true}, {"ia", "a(b)", false},
      {"ia", "(b)", false},     {"fb", "(a)", true},   {"fb", "ab(a)", true}, {"fb", "(ab)", false},
      {"fb", "(b)", false},     {"ia&fb", "bb(a)", true}, {"ia&fb", "(ab)", false}, {"ia&fb", "(b)", false},
  };
}

inline Expr example_by_name(const std::string& name, const Alphabet& a) {
  if (name == "ia") return example_ia(a);
  if (name == "fb") return example_fb(a);
  if (name == "ia&fb") return Expr::meet(example_ia(a), example_fb(a));
  throw SyntaxError("unknown example '" + name + "'");
}

}  // namespace rll
