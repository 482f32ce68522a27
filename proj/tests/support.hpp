#pragma once

#include <random>
#include <string>
#include <vector>

#include "symbreak/oracle.hpp"
#include "symbreak/program.hpp"
#include "symbreak/smodels.hpp"

namespace testsupport {

using namespace symbreak;

inline Program p1() { return read_text("a :- not b.\nb :- not a.\n"); }
inline Program p2() { return read_text("a ; b.\n"); }

inline AtomSet atoms(const Program& p, std::initializer_list<const char*> names) {
  std::vector<AtomId> v;
  for (const char* n : names) v.push_back(p.require(n));
  return make_atom_set(v);
}

inline std::vector<std::string> names(const Program& p, const AtomSet& s) {
  std::vector<std::string> out;
  for (AtomId a : s) out.push_back(p.name(a));
  return out;
}

struct RandomProgramConfig {
  AtomId atoms = 5;
  std::size_t min_rules = 1;
  std::size_t max_rules = 6;
  std::size_t max_body = 3;
  std::size_t max_head = 2;
  bool disjunctive = true;
  bool choice = false;
  bool cardinality = false;
  bool integrity = true;
};

/// Random ground program over named atoms x1..xn.
inline Program random_program(std::mt19937_64& rng, const RandomProgramConfig& cfg) {
  Program p;
  for (AtomId a = 1; a <= cfg.atoms; ++a) p.add_atom("x" + std::to_string(a));
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  auto atom = [&] { return static_cast<AtomId>(pick(1, cfg.atoms)); };
  std::size_t nrules = pick(cfg.min_rules, cfg.max_rules);
  for (std::size_t i = 0; i < nrules; ++i) {
    std::vector<int> kinds{0};
    if (cfg.choice) kinds.push_back(1);
    if (cfg.cardinality) kinds.push_back(2);
    int kind = kinds[pick(0, kinds.size() - 1)];
    Rule r;
    std::size_t nb = pick(kind == 2 ? 1 : 0, cfg.max_body);
    std::vector<bool> used(cfg.atoms + 1, false);
    for (std::size_t j = 0; j < nb; ++j) {
      AtomId a = atom();
      if (used[a]) continue;
      used[a] = true;
      (pick(0, 2) == 0 ? r.body_neg : r.body_pos).push_back(a);
    }
    if (kind == 1) {
      r.kind = RuleKind::Choice;
      std::size_t nh = pick(1, cfg.max_head);
      for (std::size_t j = 0; j < nh; ++j) {
        AtomId a = atom();
        if (std::find(r.head.begin(), r.head.end(), a) == r.head.end()) r.head.push_back(a);
      }
    } else if (kind == 2) {
      r.kind = RuleKind::Cardinality;
      r.bound = static_cast<std::uint32_t>(pick(0, r.body_size() + 1));
      if (!cfg.integrity || pick(0, 1)) r.head.push_back(atom());
    } else {
      std::size_t nh = pick(cfg.integrity ? 0 : 1, cfg.disjunctive ? cfg.max_head : 1);
      for (std::size_t j = 0; j < nh; ++j) {
        AtomId a = atom();
        if (std::find(r.head.begin(), r.head.end(), a) == r.head.end()) r.head.push_back(a);
      }
    }
    p.rules.push_back(std::move(r));
  }
  return p;
}

/// Answer sets straight from the definition: every subset of all atoms of
/// the (expanded) program, projected and deduplicated.
inline std::vector<AtomSet> answer_sets_by_definition(const Program& p) {
  Program q = expand(p);
  std::vector<AtomSet> out;
  AtomId n = q.atom_count;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    AtomSet m;
    for (AtomId a = 1; a <= n; ++a)
      if (mask >> (a - 1) & 1) m.push_back(a);
    if (!is_answer_set(q, m)) continue;
    AtomSet proj;
    for (AtomId a : m)
      if (a <= p.atom_count && !p.is_hidden(a)) proj.push_back(a);
    out.push_back(proj);
  }
  std::sort(out.begin(), out.end(), lex_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace testsupport
