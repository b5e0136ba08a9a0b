// Command-line front end. Exit codes: 0 positive / agree, 1 negative /
// counterexample, 2 usage or input error.

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "rll/rll.hpp"

namespace {

using namespace rll;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Overrides {
  std::string alphabet;
  std::string props;

  void apply(const Alphabet& file_alphabet, const std::string& path) const {
    if (alphabet.empty() && props.empty()) return;
    if (!alphabet.empty() && !props.empty()) throw InputError("--alphabet and --props are mutually exclusive");
    auto split = [](const std::string& s) {
      std::vector<std::string> out;
      std::string cur;
      for (char c : s) {
        if (c == ',' || c == ' ') {
          if (!cur.empty()) out.push_back(cur);
          cur.clear();
        } else {
          cur += c;
        }
      }
      if (!cur.empty()) out.push_back(cur);
      return out;
    };
    const Alphabet flag = alphabet.empty() ? Alphabet::powerset(split(props)) : Alphabet::plain(split(alphabet));
    if (!(flag == file_alphabet))
      throw InputError(path + ": header '" + file_alphabet.header() + "' does not match flag '" + flag.header() + "'");
  }
};

template <class F>
auto with_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw InputError(path + ":" + e.what());
  } catch (const SyntaxError& e) {
    throw InputError(path + ": " + e.what());
  }
}

ExprFile load_expr(const std::string& path, const Overrides& o) {
  ExprFile f = with_path(path, [&] { return parse_expr_file(read_file(path)); });
  o.apply(f.alphabet, path);
  return f;
}

FormulaFile load_formula(const std::string& path, const Overrides& o) {
  FormulaFile f = with_path(path, [&] { return parse_formula_file(read_file(path)); });
  o.apply(f.alphabet, path);
  return f;
}

Lasso load_lasso(const std::string& text, const Alphabet& a) {
  try {
    return parse_lasso(text, a);
  } catch (const std::exception& e) {
    throw InputError("lasso '" + text + "': " + e.what());
  }
}

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--alphabet", o.alphabet, "Expected letters (comma separated); must match the file header");
  cmd->add_option("--props", o.props, "Expected propositions (comma separated); must match the file header");
}

int report_search(const std::optional<Lasso>& found, const Alphabet& a) {
  if (found) {
    std::cout << print_lasso(*found, a) << "\n";
    return 1;
  }
  std::cout << "no difference found up to bounds\n";
  return 0;
}

int selftest(std::uint64_t seed, std::size_t count) {
  std::size_t failures = 0;
  const Alphabet ab = example_alphabet();
  for (const auto& row : example_table()) {
    const Expr e = example_by_name(row.name, ab);
    const Lasso w = parse_lasso(row.lasso, ab);
    const bool g = member_game(e, w), o = member_oracle(e, w);
    if (g != row.expected || o != row.expected) {
      ++failures;
      std::cout << "FAIL example " << row.name << " on " << row.lasso << ": game=" << g << " oracle=" << o << "\n";
    }
  }
  std::cout << "examples: " << example_table().size() << " rows checked\n";

  std::mt19937_64 rng(seed);
  std::size_t checked = 0;
  for (std::size_t letters = 1; letters <= 3; ++letters) {
    const ExprSampler exprs(letters, 12);
    const LassoSampler lassos(letters, 3, 4);
    for (std::size_t i = 0; i < count / 3 + (letters <= count % 3 ? 1 : 0); ++i) {
      const Expr e = exprs.sample(rng);
      const Lasso& w = lassos.sample(rng);
      ++checked;
      if (member_game(e, w) != member_oracle(e, w)) {
        ++failures;
        std::vector<std::string> names;
        for (std::size_t l = 0; l < letters; ++l) names.push_back(std::string(1, static_cast<char>('a' + l)));
        const Alphabet a = Alphabet::plain(names);
        std::cout << "FAIL agreement: " << print_expr(e, a) << " on " << print_lasso(w, a) << "\n";
      }
    }
  }
  std::cout << "agreement: " << checked << " random pairs checked (seed " << seed << ")\n";
  std::cout << (failures == 0 ? "selftest passed" : "selftest FAILED") << "\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Right-linear lattice expressions: automata, games, complements, proofs"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Overrides ov;
  std::string file, file2, lasso_text, via = "game", target, side = "both";
  std::size_t max_prefix = 2, max_period = 3, count = 1000;
  std::uint64_t seed = 20240601;
  bool formula = false;
  int code = 0;

  auto* parse = app.add_subcommand("parse", "Parse a file and print it in normal form");
  parse->add_option("file", file, "Expression (or, with --formula, formula) file")->required();
  parse->add_flag("--formula", formula, "Read a mu-LTL formula file");
  add_overrides(parse, ov);
  parse->callback([&] {
    if (formula) {
      const auto f = load_formula(file, ov);
      std::cout << f.alphabet.header() << "\n" << print_formula(f.formula, f.alphabet) << "\n";
    } else {
      const auto f = load_expr(file, ov);
      std::cout << f.alphabet.header() << "\n" << print_expr(f.expr, f.alphabet) << "\n";
    }
  });

  auto* closure = app.add_subcommand("closure", "Print the coloured Fischer-Ladner closure");
  closure->add_option("file", file)->required();
  add_overrides(closure, ov);
  closure->callback([&] {
    const auto f = load_expr(file, ov);
    std::cout << print_closure(coloured_closure(f.expr), f.alphabet);
  });

  auto* dot = app.add_subcommand("apa-dot", "Print the alternating parity automaton in DOT");
  dot->add_option("file", file)->required();
  add_overrides(dot, ov);
  dot->callback([&] {
    const auto f = load_expr(file, ov);
    std::cout << export_dot(build_apa(coloured_closure(f.expr), f.alphabet));
  });

  auto* member = app.add_subcommand("member", "Decide lasso membership");
  member->add_option("file", file)->required();
  member->add_option("lasso", lasso_text, "Lasso u(v), e.g. b(ab)")->required();
  member->add_option("--via", via, "game, oracle or both")->check(CLI::IsMember({"game", "oracle", "both"}));
  add_overrides(member, ov);
  member->callback([&] {
    const auto f = load_expr(file, ov);
    const Lasso w = load_lasso(lasso_text, f.alphabet);
    if (via == "both") {
      const bool g = member_game(f.expr, w), o = member_oracle(f.expr, w);
      if (g != o) {
        std::cout << "disagreement (game=" << g << ", oracle=" << o << ")\n";
        code = 2;
        return;
      }
      std::cout << (g ? "true" : "false") << " (game=oracle)\n";
      code = g ? 0 : 1;
      return;
    }
    const bool r = via == "game" ? member_game(f.expr, w) : member_oracle(f.expr, w);
    std::cout << (r ? "true" : "false") << "\n";
    code = r ? 0 : 1;
  });

  auto* oracle = app.add_subcommand("oracle-member", "Decide lasso membership by fixpoint evaluation");
  oracle->add_option("file", file)->required();
  oracle->add_option("lasso", lasso_text)->required();
  add_overrides(oracle, ov);
  oracle->callback([&] {
    const auto f = load_expr(file, ov);
    const bool r = member_oracle(f.expr, load_lasso(lasso_text, f.alphabet));
    std::cout << (r ? "true" : "false") << "\n";
    code = r ? 0 : 1;
  });

  auto* comp = app.add_subcommand("complement", "Print the syntactic complement");
  comp->add_option("file", file)->required();
  add_overrides(comp, ov);
  comp->callback([&] {
    const auto f = load_expr(file, ov);
    std::cout << f.alphabet.header() << "\n" << print_expr(complement(f.expr, f.alphabet), f.alphabet) << "\n";
  });

  auto* translate = app.add_subcommand("translate", "Translate between expressions and mu-LTL formulas");
  translate->add_option("file", file)->required();
  translate->add_option("--to", target, "ltl (from an expression file) or rll (from a formula file)")
      ->required()
      ->check(CLI::IsMember({"ltl", "rll"}));
  add_overrides(translate, ov);
  translate->callback([&] {
    if (target == "ltl") {
      const auto f = load_expr(file, ov);
      std::cout << f.alphabet.header() << "\n" << print_formula(to_multl(f.expr, f.alphabet), f.alphabet) << "\n";
    } else {
      const auto f = load_formula(file, ov);
      std::cout << f.alphabet.header() << "\n" << print_expr(to_rll(f.formula, f.alphabet), f.alphabet) << "\n";
    }
  });

  auto add_search = [&](const char* name, const char* help, bool inclusion) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("left", file)->required();
    cmd->add_option("right", file2)->required();
    cmd->add_option("--max-prefix", max_prefix, "Largest prefix length searched");
    cmd->add_option("--max-period", max_period, "Largest period length searched");
    add_overrides(cmd, ov);
    cmd->callback([&, inclusion] {
      const auto l = load_expr(file, ov);
      const auto r = load_expr(file2, ov);
      if (!(l.alphabet == r.alphabet))
        throw InputError(file + " and " + file2 + " declare different alphabets");
      const SearchBounds b{max_prefix, max_period};
      code = report_search(inclusion ? inclusion_bounded(l.expr, r.expr, l.alphabet, b)
                                     : equiv_bounded(l.expr, r.expr, l.alphabet, b),
                           l.alphabet);
    });
  };
  add_search("equiv", "Search for a lasso distinguishing two expressions", false);
  add_search("incl", "Search for a lasso in the left language but not the right", true);

  auto* checkcmd = app.add_subcommand("check", "Check a JSON derivation");
  checkcmd->add_option("file", file)->required();
  checkcmd->callback([&] {
    Derivation d;
    try {
      d = parse_derivation(read_file(file));
    } catch (const ProofError& e) {
      throw InputError(file + ": " + e.what());
    }
    const Verdict v = check(d);
    std::cout << print_verdict(v) << "\n";
    code = v.accepted ? 0 : 1;
  });

  auto* derive = app.add_subcommand("derive-complement", "Emit derivations of top <= e + e^c and e & e^c <= 0");
  derive->add_option("file", file)->required();
  derive->add_option("--side", side, "join, meet or both")->check(CLI::IsMember({"join", "meet", "both"}));
  add_overrides(derive, ov);
  derive->callback([&] {
    const auto f = load_expr(file, ov);
    const auto pair = derive_complement(f.expr, f.alphabet);
    if (side == "join") {
      std::cout << derivation_to_json(pair.join).dump(2) << "\n";
    } else if (side == "meet") {
      std::cout << derivation_to_json(pair.meet).dump(2) << "\n";
    } else {
      nlohmann::json j{{"join", derivation_to_json(pair.join)}, {"meet", derivation_to_json(pair.meet)}};
      std::cout << j.dump(2) << "\n";
    }
  });

  auto* self = app.add_subcommand("selftest", "Run the example table and a seeded game/oracle agreement suite");
  self->add_option("--seed", seed, "Random seed");
  self->add_option("--count", count, "Number of random pairs");
  self->callback([&] { code = selftest(seed, count); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int r = app.exit(e);
    return e.get_exit_code() == 0 ? r : 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return code;
}
