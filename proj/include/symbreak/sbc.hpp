#ifndef SYMBREAK_SBC_HPP
#define SYMBREAK_SBC_HPP

// Lex-leader symmetry-breaking constraints. Atoms are ordered by ascending
// id, the smallest id being the most significant position, and true counts
// as 1.

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include "symbreak/error.hpp"
#include "symbreak/oracle.hpp"
#include "symbreak/perm_group.hpp"
#include "symbreak/permutation.hpp"
#include "symbreak/program.hpp"

namespace symbreak {

struct PcConfig {
  /// Keep only the first k selected positions; nullopt keeps all.
  std::optional<std::size_t> k_supports;
  bool restrict_to_support = true;
  bool exclude_cycle_max = true;
  bool skip_fact_pairs = true;

  static PcConfig no_opt() {
    PcConfig c;
    c.restrict_to_support = c.exclude_cycle_max = c.skip_fact_pairs = false;
    return c;
  }
};

struct PermutationConstraint {
  /// Selected positions a_1 < ... < a_q.
  std::vector<AtomId> indices;
  std::vector<Rule> rules;
  /// c_2 .. c_q, hidden.
  std::vector<AtomId> chain_atoms;
};

/// Positions compared by the constraint for pi, after the configured
/// reductions (support, cycle maxima, fact pairs, then truncation).
inline std::vector<AtomId> selected_indices(const Program& p, const Permutation& pi,
                                            const PcConfig& cfg) {
  std::vector<AtomId> idx;
  if (cfg.restrict_to_support) {
    idx = pi.support();
  } else {
    std::set<AtomId> all = p.atoms();
    idx.assign(all.begin(), all.end());
  }
  if (cfg.exclude_cycle_max) {
    std::set<AtomId> maxima;
    for (const auto& c : pi.cycles()) maxima.insert(*std::max_element(c.begin(), c.end()));
    std::erase_if(idx, [&](AtomId a) { return maxima.contains(a); });
  }
  if (cfg.skip_fact_pairs) {
    std::set<AtomId> facts;
    for (const Rule& r : p.rules)
      if (r.is_fact()) facts.insert(r.head.front());
    std::erase_if(idx, [&](AtomId a) { return facts.contains(a) && facts.contains(pi(a)); });
  }
  if (cfg.k_supports && idx.size() > *cfg.k_supports) idx.resize(*cfg.k_supports);
  return idx;
}

/// True iff the vector of `a` over `indices` is lexicographically greater
/// than the vector of a o pi over the same indices, i.e. a violates PC(pi).
inline bool lex_greater_than_image(const AtomSet& a, const Permutation& pi,
                                   const std::vector<AtomId>& indices) {
  auto holds = [&](AtomId x) { return std::binary_search(a.begin(), a.end(), x); };
  for (AtomId x : indices) {
    bool l = holds(x), r = holds(pi(x));
    if (l != r) return l;
  }
  return false;
}

/// Rules enforcing a <=_lex a o pi on the selected positions, using fresh
/// hidden chain atoms numbered from `first_fresh`. The chain ends in false:
/// no fact is emitted for c_{q+1}. Rules whose body contains an atom both
/// positively and negatively are omitted.
inline PermutationConstraint build_pc(const Program& p, const Permutation& pi,
                                      const PcConfig& cfg, AtomId first_fresh) {
  if (pi.is_identity()) throw Error(ErrorKind::IdentityPermutation, "identity has no constraint");
  if (!is_program_symmetry(p, pi))
    throw Error(ErrorKind::NotASymmetry, to_cycle_string(pi, p) + " is not a symmetry");
  PermutationConstraint pc;
  pc.indices = selected_indices(p, pi, cfg);
  const auto& a = pc.indices;
  std::size_t q = a.size();
  auto emit = [&](Rule r) {
    if (!detail::intersects(r.body_pos, r.body_neg)) pc.rules.push_back(std::move(r));
  };
  if (q == 0) return pc;
  emit(Rule::integrity({a[0]}, {pi(a[0])}));
  if (q == 1) return pc;
  // c(i) is c_{i+1} in 0-based position i, for 1 <= i < q
  for (std::size_t i = 1; i < q; ++i) pc.chain_atoms.push_back(first_fresh + AtomId(i - 1));
  auto c = [&](std::size_t i) { return pc.chain_atoms[i - 1]; };
  emit(Rule::integrity({c(1)}));
  for (std::size_t i = 1; i < q; ++i) {
    emit(Rule::normal({c(i)}, {a[i - 1], a[i]}, {pi(a[i])}));
    emit(Rule::normal({c(i)}, {a[i]}, {pi(a[i - 1]), pi(a[i])}));
    if (i + 1 < q) {
      emit(Rule::normal({c(i)}, {a[i - 1], c(i + 1)}));
      emit(Rule::normal({c(i)}, {c(i + 1)}, {pi(a[i - 1])}));
    }
  }
  return pc;
}

/// p extended with one constraint per non-identity generator; chain atoms
/// are allocated above p's atom count and are not shared between
/// constraints.
inline Program build_sbc(const Program& p, const std::vector<Permutation>& gens,
                         const PcConfig& cfg = {}) {
  Program out = p;
  for (const Permutation& pi : gens) {
    if (pi.is_identity()) continue;
    PermutationConstraint pc = build_pc(p, pi, cfg, out.atom_count + 1);
    for (std::size_t i = 0; i < pc.chain_atoms.size(); ++i) out.new_atom();
    for (Rule& r : pc.rules) out.rules.push_back(std::move(r));
  }
  return out;
}

/// Lex-least member of each orbit of p's answer sets under the group
/// generated by `gens`, sorted by lex_less.
inline std::vector<AtomSet> lexleader_oracle(const Program& p, const std::vector<Permutation>& gens,
                                             std::size_t closure_limit = 1000000) {
  std::vector<Permutation> group = group_closure(gens, closure_limit);
  std::set<AtomSet> reps;
  for (const AtomSet& a : enumerate_answer_sets(p)) {
    AtomSet best = a;
    for (const Permutation& g : group) {
      AtomSet img = g.apply(a);
      if (lex_less(img, best)) best = std::move(img);
    }
    reps.insert(std::move(best));
  }
  std::vector<AtomSet> out(reps.begin(), reps.end());
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

}  // namespace symbreak

#endif
