#pragma once

// JSON proof files.
//
//   {"system": "rll" | "multl", "tier": "strict" | "extended",
//    "alphabet": [...],             letters (rll) or propositions (multl)
//    "props": [...],                alternative: powerset alphabet for rll
//    "steps": [{"id": ..., "claim": ..., "rule": ..., "subst": {...},
//               "premises": [...], "atoms": [...],
//               "hyp": {"fresh": [...], "steps": [...]}}]}
//
// RLL claims are {"rel": "eq" | "leq", "lhs": "...", "rhs": "..."};
// mu-LTL claims are a formula string or {"formula": "..."}. Ids may be
// strings or integers.

#include <string>

#include "json.hpp"
#include "rll/calculus.hpp"
#include "rll/parser.hpp"

namespace rll {

namespace detail {

using nlohmann::json;

inline std::string id_of(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw ProofError("step ids must be strings or integers");
}

inline std::string text_of(const json& j, const char* what) {
  if (!j.is_string()) throw ProofError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

inline Step step_from_json(const json& j, const Derivation& d) {
  if (!j.is_object()) throw ProofError("each step must be an object");
  Step s;
  if (!j.contains("id")) throw ProofError("step without id");
  s.id = id_of(j.at("id"));
  auto where = [&](const std::string& msg) { return ProofError("step " + s.id + ": " + msg); };
  try {
    if (!j.contains("rule")) throw where("missing rule");
    s.rule = text_of(j.at("rule"), "rule");
    if (!j.contains("claim")) throw where("missing claim");
    const json& c = j.at("claim");
    if (d.system == ProofSystem::Rll) {
      if (!c.is_object() || !c.contains("lhs") || !c.contains("rhs")) throw where("claim needs lhs and rhs");
      const std::string rel = c.contains("rel") ? text_of(c.at("rel"), "rel") : "eq";
      if (rel != "eq" && rel != "leq") throw where("rel must be 'eq' or 'leq'");
      s.claim.rel = rel == "eq" ? Rel::Eq : Rel::Leq;
      s.claim.lhs = parse_expr(text_of(c.at("lhs"), "lhs"), d.alphabet);
      s.claim.rhs = parse_expr(text_of(c.at("rhs"), "rhs"), d.alphabet);
    } else {
      const json& f = c.is_object() ? c.at("formula") : c;
      s.formula = parse_formula(text_of(f, "formula"), d.alphabet);
    }
    if (j.contains("subst")) {
      if (!j.at("subst").is_object()) throw where("malformed substitution: expected an object");
      for (const auto& [k, v] : j.at("subst").items()) {
        if (d.system == ProofSystem::Rll)
          s.subst.emplace(k, parse_expr(text_of(v, "substitution value"), d.alphabet));
        else
          s.formula_subst.emplace(k, parse_formula(text_of(v, "substitution value"), d.alphabet));
      }
    }
    if (j.contains("atoms")) {
      std::vector<Expr> atoms;
      for (const auto& a : j.at("atoms")) atoms.push_back(parse_expr(text_of(a, "atom"), d.alphabet));
      s.atoms = std::move(atoms);
    }
    if (j.contains("premises"))
      for (const auto& p : j.at("premises")) s.premises.push_back(id_of(p));
    if (j.contains("hyp")) {
      const json& h = j.at("hyp");
      s.has_hyp = true;
      if (h.contains("fresh"))
        for (const auto& x : h.at("fresh")) s.fresh.push_back(text_of(x, "fresh variable"));
      if (h.contains("steps"))
        for (const auto& sub : h.at("steps")) s.hyp_steps.push_back(step_from_json(sub, d));
    }
  } catch (const ParseError& e) {
    throw where(std::string("parse error: ") + e.what());
  } catch (const json::exception& e) {
    throw where(e.what());
  }
  return s;
}

inline json claim_to_json(const Step& s, const Derivation& d) {
  if (d.system == ProofSystem::Multl) return print_formula(s.formula, d.alphabet);
  return json{{"rel", s.claim.rel == Rel::Eq ? "eq" : "leq"},
              {"lhs", print_expr(s.claim.lhs, d.alphabet)},
              {"rhs", print_expr(s.claim.rhs, d.alphabet)}};
}

inline json step_to_json(const Step& s, const Derivation& d) {
  json j = json::object();
  j["id"] = s.id;
  j["claim"] = claim_to_json(s, d);
  j["rule"] = s.rule;
  if (!s.subst.empty()) {
    json m = json::object();
    for (const auto& [k, v] : s.subst) m[k] = print_expr(v, d.alphabet);
    j["subst"] = m;
  }
  if (!s.formula_subst.empty()) {
    json m = json::object();
    for (const auto& [k, v] : s.formula_subst) m[k] = print_formula(v, d.alphabet);
    j["subst"] = m;
  }
  if (s.atoms) {
    json a = json::array();
    for (const auto& t : *s.atoms) a.push_back(print_expr(t, d.alphabet));
    j["atoms"] = a;
  }
  j["premises"] = s.premises;
  if (s.has_hyp) {
    json steps = json::array();
    for (const auto& sub : s.hyp_steps) steps.push_back(step_to_json(sub, d));
    j["hyp"] = json{{"fresh", s.fresh}, {"steps", steps}};
  }
  return j;
}

}  // namespace detail

inline Derivation derivation_from_json(const nlohmann::json& j) {
  using detail::text_of;
  if (!j.is_object()) throw ProofError("proof file must be a JSON object");
  Derivation d;
  const std::string system = j.contains("system") ? text_of(j.at("system"), "system") : "rll";
  if (system == "rll")
    d.system = ProofSystem::Rll;
  else if (system == "multl")
    d.system = ProofSystem::Multl;
  else
    throw ProofError("unknown system '" + system + "'");
  const std::string tier = j.contains("tier") ? text_of(j.at("tier"), "tier") : "strict";
  if (tier == "strict")
    d.tier = Tier::Strict;
  else if (tier == "extended")
    d.tier = Tier::Extended;
  else
    throw ProofError("unknown tier '" + tier + "'");

  auto names = [&](const char* key) {
    std::vector<std::string> out;
    for (const auto& x : j.at(key)) out.push_back(text_of(x, key));
    return out;
  };
  if (j.contains("props"))
    d.alphabet = Alphabet::powerset(names("props"));
  else if (j.contains("alphabet"))
    d.alphabet = d.system == ProofSystem::Multl ? Alphabet::powerset(names("alphabet")) : Alphabet::plain(names("alphabet"));
  else
    throw ProofError("proof file declares no alphabet");

  if (!j.contains("steps") || !j.at("steps").is_array()) throw ProofError("proof file needs a 'steps' array");
  for (const auto& s : j.at("steps")) d.steps.push_back(detail::step_from_json(s, d));
  return d;
}

inline Derivation parse_derivation(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProofError(std::string("invalid JSON: ") + e.what());
  }
  return derivation_from_json(j);
}

inline nlohmann::json derivation_to_json(const Derivation& d) {
  nlohmann::json j = nlohmann::json::object();
  j["system"] = d.system == ProofSystem::Rll ? "rll" : "multl";
  j["tier"] = d.tier == Tier::Strict ? "strict" : "extended";
  if (d.alphabet.is_powerset())
    j[d.system == ProofSystem::Rll ? "props" : "alphabet"] = d.alphabet.props();
  else
    j["alphabet"] = d.alphabet.letters();
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : d.steps) steps.push_back(detail::step_to_json(s, d));
  j["steps"] = steps;
  return j;
}

}  // namespace rll
