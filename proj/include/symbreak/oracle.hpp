#ifndef SYMBREAK_ORACLE_HPP
#define SYMBREAK_ORACLE_HPP

// Reference semantics by brute force: reducts, the answer-set test and
// exhaustive enumeration. The other modules are tested against these.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "symbreak/error.hpp"
#include "symbreak/program.hpp"

namespace symbreak {

/// A set of true atoms, kept sorted ascending.
using AtomSet = std::vector<AtomId>;

inline AtomSet make_atom_set(std::vector<AtomId> atoms) {
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  return atoms;
}

/// Lexicographic order of characteristic vectors (ascending atom id, false
/// before true): at the smallest atom where two sets differ, the set missing
/// it is smaller.
inline bool lex_less(const AtomSet& a, const AtomSet& b) {
  std::size_t i = 0;
  while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
  if (i == a.size() && i == b.size()) return false;
  if (i == a.size()) return true;
  if (i == b.size()) return false;
  return a[i] > b[i];
}

inline Program reduct(const Program& p, const AtomSet& m) {
  detail::require_expanded(p, "reduct");
  Program out = p;
  out.rules.clear();
  for (const Rule& r : p.rules) {
    bool blocked = std::any_of(r.body_neg.begin(), r.body_neg.end(),
                               [&](AtomId a) { return std::binary_search(m.begin(), m.end(), a); });
    if (!blocked) out.rules.push_back(Rule::normal(r.head, r.body_pos));
  }
  return out;
}

struct OracleOptions {
  /// Largest |M| for which minimality of a disjunctive reduct is decided by
  /// subset search.
  std::size_t atom_budget = 24;
};

namespace detail {

// Searches for a model N of `rules` that is a proper subset of M. Rules are
// pre-restricted to M and given as (head, positive body) index lists over
// positions 0..n-1 of M.
using LocalRule = std::pair<std::vector<std::size_t>, std::vector<std::size_t>>;

inline bool has_smaller_model(const std::vector<LocalRule>& rules, std::size_t n) {
  std::vector<std::vector<std::size_t>> at(n);
  for (std::size_t i = 0; i < rules.size(); ++i) {
    std::size_t mx = 0;
    for (auto x : rules[i].first) mx = std::max(mx, x);
    for (auto x : rules[i].second) mx = std::max(mx, x);
    if (n > 0) at[mx].push_back(i);
  }
  std::vector<std::int8_t> val(n, 0);
  auto ok_at = [&](std::size_t k) {
    for (auto i : at[k]) {
      bool body = std::all_of(rules[i].second.begin(), rules[i].second.end(),
                              [&](std::size_t x) { return val[x] == 1; });
      bool head = std::any_of(rules[i].first.begin(), rules[i].first.end(),
                              [&](std::size_t x) { return val[x] == 1; });
      if (body && !head) return false;
    }
    return true;
  };
  auto dfs = [&](auto&& self, std::size_t k, bool dropped) -> bool {
    if (k == n) return dropped;
    for (std::int8_t v : {std::int8_t(-1), std::int8_t(1)}) {
      val[k] = v;
      if (ok_at(k) && self(self, k + 1, dropped || v == -1)) return true;
    }
    val[k] = 0;
    return false;
  };
  return dfs(dfs, 0, false);
}

}  // namespace detail

/// True iff `m` respects the compute statements, is a model of the reduct
/// and no proper subset of `m` is.
inline bool is_answer_set(const Program& p, const AtomSet& m, OracleOptions opts = {}) {
  detail::require_expanded(p, "is_answer_set");
  AtomId top = p.atom_count;
  for (AtomId a : m) top = std::max(top, a);
  std::vector<char> in(top + 1, 0);
  for (AtomId a : m) in[a] = 1;
  for (AtomId a : p.compute_true)
    if (!in[a]) return false;
  for (AtomId a : p.compute_false)
    if (in[a]) return false;

  bool normal = true;
  std::vector<const Rule*> red;
  for (const Rule& r : p.rules) {
    bool blocked = std::any_of(r.body_neg.begin(), r.body_neg.end(), [&](AtomId a) { return in[a]; });
    if (blocked) continue;
    bool body = std::all_of(r.body_pos.begin(), r.body_pos.end(), [&](AtomId a) { return in[a]; });
    bool head = std::any_of(r.head.begin(), r.head.end(), [&](AtomId a) { return in[a]; });
    if (body && !head) return false;
    if (r.head.size() > 1) normal = false;
    red.push_back(&r);
  }

  if (normal) {
    std::vector<char> lfp(top + 1, 0);
    bool changed = true;
    while (changed) {
      changed = false;
      for (const Rule* r : red) {
        if (r->head.empty() || lfp[r->head.front()]) continue;
        if (std::all_of(r->body_pos.begin(), r->body_pos.end(), [&](AtomId a) { return lfp[a]; })) {
          lfp[r->head.front()] = 1;
          changed = true;
        }
      }
    }
    for (AtomId a = 0; a <= top; ++a)
      if (lfp[a] != in[a]) return false;
    return true;
  }

  if (m.size() > opts.atom_budget)
    throw Error(ErrorKind::TooLarge, "minimality check over " + std::to_string(m.size()) +
                                         " atoms exceeds the budget of " +
                                         std::to_string(opts.atom_budget));
  std::vector<std::size_t> index(top + 1, 0);
  for (std::size_t i = 0; i < m.size(); ++i) index[m[i]] = i;
  std::vector<detail::LocalRule> rules;
  for (const Rule* r : red) {
    if (!std::all_of(r->body_pos.begin(), r->body_pos.end(), [&](AtomId a) { return in[a]; }))
      continue;
    detail::LocalRule rr;
    for (AtomId h : r->head)
      if (in[h]) rr.first.push_back(index[h]);
    for (AtomId b : r->body_pos) rr.second.push_back(index[b]);
    rules.push_back(std::move(rr));
  }
  return !detail::has_smaller_model(rules, m.size());
}

struct EnumerateOptions {
  /// Stop after this many distinct projected answer sets; 0 means all.
  std::size_t limit = 0;
  OracleOptions oracle{};
};

/// All answer sets of `p`, projected to its visible atoms, without
/// duplicates and in lex order. Choice and cardinality rules are expanded
/// first. The search is a plain DFS over atoms in id order with two cheap
/// prunings (violated rule, unsupported true atom), each applied once every
/// atom it mentions is decided.
inline std::vector<AtomSet> enumerate_answer_sets(const Program& p, EnumerateOptions opts = {}) {
  const Program q = expand(p);
  const AtomId n = q.atom_count;
  std::vector<char> visible(n + 1, 0);
  for (const auto& [id, name] : p.symbols)
    if (id <= p.atom_count && id <= n) visible[id] = 1;

  std::vector<std::size_t> rule_max(q.rules.size(), 0);
  std::vector<std::vector<std::size_t>> check_rules(n + 1);
  std::vector<std::vector<std::size_t>> head_of(n + 1);
  std::vector<char> can_be_true(n + 1, 0);
  for (std::size_t i = 0; i < q.rules.size(); ++i) {
    const Rule& r = q.rules[i];
    AtomId mx = 0;
    for (AtomId a : r.head) mx = std::max(mx, a);
    for (AtomId a : r.body_pos) mx = std::max(mx, a);
    for (AtomId a : r.body_neg) mx = std::max(mx, a);
    rule_max[i] = mx;
    if (mx > 0) check_rules[mx].push_back(i);
    for (AtomId h : r.head) {
      head_of[h].push_back(i);
      can_be_true[h] = 1;
    }
  }
  std::vector<std::vector<AtomId>> check_support(n + 1);
  for (AtomId a = 1; a <= n; ++a) {
    if (!can_be_true[a]) continue;
    std::size_t mx = a;
    for (std::size_t i : head_of[a]) mx = std::max(mx, rule_max[i]);
    check_support[mx].push_back(a);
  }
  std::vector<std::int8_t> forced(n + 1, 0);
  for (AtomId a : q.compute_true)
    if (a <= n) forced[a] = 1;
  for (AtomId a : q.compute_false)
    if (a <= n) forced[a] = forced[a] == 1 ? 2 : -1;

  // Empty-bodied integrity constraints are checked with rule_max 0.
  for (const Rule& r : q.rules)
    if (r.head.empty() && r.body_size() == 0) return {};
  for (AtomId a : q.compute_true)
    if (a > n) return {};

  std::vector<std::int8_t> val(n + 1, 0);
  auto lit_true = [&](AtomId a, bool negated) { return negated ? val[a] == -1 : val[a] == 1; };
  auto body_true = [&](const Rule& r) {
    for (AtomId a : r.body_pos)
      if (!lit_true(a, false)) return false;
    for (AtomId a : r.body_neg)
      if (!lit_true(a, true)) return false;
    return true;
  };
  auto consistent_at = [&](AtomId k) {
    for (std::size_t i : check_rules[k]) {
      const Rule& r = q.rules[i];
      if (body_true(r) && std::none_of(r.head.begin(), r.head.end(),
                                       [&](AtomId h) { return val[h] == 1; }))
        return false;
    }
    for (AtomId a : check_support[k]) {
      if (val[a] != 1) continue;
      bool supported = false;
      for (std::size_t i : head_of[a]) {
        const Rule& r = q.rules[i];
        if (!body_true(r)) continue;
        if (std::all_of(r.head.begin(), r.head.end(),
                        [&](AtomId h) { return h == a || val[h] == -1; })) {
          supported = true;
          break;
        }
      }
      if (!supported) return false;
    }
    return true;
  };

  std::vector<AtomSet> found;
  std::vector<AtomSet> seen_sorted;
  auto record = [&]() {
    AtomSet full, proj;
    for (AtomId a = 1; a <= n; ++a)
      if (val[a] == 1) {
        full.push_back(a);
        if (visible[a]) proj.push_back(a);
      }
    if (!is_answer_set(q, full, opts.oracle)) return;
    auto it = std::lower_bound(seen_sorted.begin(), seen_sorted.end(), proj);
    if (it != seen_sorted.end() && *it == proj) return;
    seen_sorted.insert(it, proj);
    found.push_back(std::move(proj));
  };

  // Iterative DFS over atoms 1..n; each level tries F then T.
  if (n == 0) {
    record();
  } else {
    AtomId k = 1;
    auto first_value = [&](AtomId a) -> std::int8_t {
      if (forced[a] == 2) return 0;
      if (forced[a] == 1) return can_be_true[a] ? 1 : 0;
      return -1;
    };
    auto next_value = [&](AtomId a, std::int8_t v) -> std::int8_t {
      if (v == -1 && forced[a] == 0 && can_be_true[a]) return 1;
      return 0;
    };
    val[1] = first_value(1);
    while (true) {
      if (val[k] != 0 && consistent_at(k)) {
        if (k == n) {
          record();
          if (opts.limit && found.size() >= opts.limit) break;
        } else {
          ++k;
          val[k] = first_value(k);
          continue;
        }
      }
      // Move to the next value at this level, backtracking as needed.
      while (k >= 1) {
        std::int8_t nv = val[k] == 0 ? 0 : next_value(k, val[k]);
        if (nv != 0) {
          val[k] = nv;
          break;
        }
        val[k] = 0;
        --k;
      }
      if (k == 0) break;
    }
  }

  std::sort(found.begin(), found.end(), lex_less);
  return found;
}

inline std::vector<AtomSet> enumerate_answer_sets(const Program& p, std::size_t limit) {
  EnumerateOptions o;
  o.limit = limit;
  return enumerate_answer_sets(p, o);
}

}  // namespace symbreak

#endif
