#ifndef SYMBREAK_PROGRAM_HPP
#define SYMBREAK_PROGRAM_HPP

// Ground logic programs: rules, symbol table, compute sections, and the
// program transformations that everything else builds on (normalisation,
// shifting, choice/cardinality expansion, tightness).

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "symbreak/error.hpp"

namespace symbreak {

/// Atoms are 1-based; 0 never denotes an atom.
using AtomId = std::uint32_t;

struct Literal {
  AtomId atom = 0;
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

inline Literal pos(AtomId a) { return {a, false}; }
inline Literal neg(AtomId a) { return {a, true}; }

enum class RuleKind : std::uint8_t { Disjunctive, Choice, Cardinality };

/// One ground rule. Disjunctive rules with an empty head are integrity
/// constraints; cardinality rules have at most one head atom and a bound.
struct Rule {
  RuleKind kind = RuleKind::Disjunctive;
  std::vector<AtomId> head;
  std::uint32_t bound = 0;
  std::vector<AtomId> body_pos;
  std::vector<AtomId> body_neg;

  bool is_integrity() const { return kind == RuleKind::Disjunctive && head.empty(); }
  bool is_fact() const {
    return kind == RuleKind::Disjunctive && head.size() == 1 && body_pos.empty() &&
           body_neg.empty();
  }
  std::size_t body_size() const { return body_pos.size() + body_neg.size(); }

  std::vector<Literal> body() const {
    std::vector<Literal> out;
    out.reserve(body_size());
    for (AtomId a : body_pos) out.push_back(pos(a));
    for (AtomId a : body_neg) out.push_back(neg(a));
    return out;
  }

  friend bool operator==(const Rule&, const Rule&) = default;

  static Rule normal(std::vector<AtomId> head, std::vector<AtomId> body_pos = {},
                     std::vector<AtomId> body_neg = {}) {
    return {RuleKind::Disjunctive, std::move(head), 0, std::move(body_pos), std::move(body_neg)};
  }
  static Rule integrity(std::vector<AtomId> body_pos, std::vector<AtomId> body_neg = {}) {
    return {RuleKind::Disjunctive, {}, 0, std::move(body_pos), std::move(body_neg)};
  }
  static Rule choice(std::vector<AtomId> head, std::vector<AtomId> body_pos = {},
                     std::vector<AtomId> body_neg = {}) {
    return {RuleKind::Choice, std::move(head), 0, std::move(body_pos), std::move(body_neg)};
  }
  static Rule cardinality(std::optional<AtomId> head, std::uint32_t bound,
                          std::vector<AtomId> body_pos, std::vector<AtomId> body_neg = {}) {
    Rule r{RuleKind::Cardinality, {}, bound, std::move(body_pos), std::move(body_neg)};
    if (head) r.head.push_back(*head);
    return r;
  }
};

/// Sorted copy of a rule; two rules are the same rule iff their canonical
/// forms compare equal.
inline Rule canonical(Rule r) {
  std::sort(r.head.begin(), r.head.end());
  std::sort(r.body_pos.begin(), r.body_pos.end());
  std::sort(r.body_neg.begin(), r.body_neg.end());
  return r;
}

inline bool canonical_less(const Rule& a, const Rule& b) {
  return std::tie(a.kind, a.bound, a.head, a.body_pos, a.body_neg) <
         std::tie(b.kind, b.bound, b.head, b.body_pos, b.body_neg);
}

/// A ground program in the shape of the smodels intermediate format.
///
/// Atoms without an entry in `symbols` are hidden: auxiliary atoms introduced
/// by transformations never get names and are projected away when answer sets
/// are reported.
struct Program {
  std::vector<Rule> rules;
  std::map<AtomId, std::string> symbols;
  std::vector<AtomId> compute_true;
  std::vector<AtomId> compute_false;
  std::uint32_t models_requested = 1;
  AtomId atom_count = 0;
  /// Atom used as head for integrity constraints when it could not be
  /// dropped on reading (see smodels.hpp).
  std::optional<AtomId> falsity;

  friend bool operator==(const Program&, const Program&) = default;

  AtomId new_atom() { return ++atom_count; }

  AtomId add_atom(std::string name) {
    AtomId a = new_atom();
    symbols.emplace(a, std::move(name));
    return a;
  }

  bool is_hidden(AtomId a) const { return !symbols.contains(a); }

  std::string name(AtomId a) const {
    auto it = symbols.find(a);
    return it == symbols.end() ? "_" + std::to_string(a) : it->second;
  }

  std::optional<AtomId> find(const std::string& name) const {
    for (const auto& [id, n] : symbols)
      if (n == name) return id;
    return std::nullopt;
  }

  AtomId require(const std::string& atom_name) const {
    auto a = find(atom_name);
    if (!a) throw Error(ErrorKind::InvalidArgument, "unknown atom '" + atom_name + "'");
    return *a;
  }

  void add(Rule r) {
    auto bump = [this](const std::vector<AtomId>& v) {
      for (AtomId a : v) atom_count = std::max(atom_count, a);
    };
    bump(r.head);
    bump(r.body_pos);
    bump(r.body_neg);
    rules.push_back(std::move(r));
  }

  /// atom(P): atoms referenced by rules or compute statements.
  std::set<AtomId> atoms() const {
    std::set<AtomId> out;
    for (const Rule& r : rules) {
      out.insert(r.head.begin(), r.head.end());
      out.insert(r.body_pos.begin(), r.body_pos.end());
      out.insert(r.body_neg.begin(), r.body_neg.end());
    }
    out.insert(compute_true.begin(), compute_true.end());
    out.insert(compute_false.begin(), compute_false.end());
    return out;
  }

  bool has_extended_rules() const {
    return std::any_of(rules.begin(), rules.end(),
                       [](const Rule& r) { return r.kind != RuleKind::Disjunctive; });
  }

  /// Visible atoms in ascending id order.
  std::vector<AtomId> visible_atoms() const {
    std::vector<AtomId> out;
    for (const auto& [id, n] : symbols)
      if (id <= atom_count) out.push_back(id);
    return out;
  }
};

struct NormalizeOptions {
  bool remove_tautologies = false;
};

namespace detail {

template <class T>
void dedupe_keep_first(std::vector<T>& v) {
  std::vector<T> out;
  out.reserve(v.size());
  std::set<T> seen;
  for (const T& x : v)
    if (seen.insert(x).second) out.push_back(x);
  v = std::move(out);
}

inline bool intersects(const std::vector<AtomId>& a, const std::vector<AtomId>& b) {
  for (AtomId x : a)
    if (std::find(b.begin(), b.end(), x) != b.end()) return true;
  return false;
}

inline void require_expanded(const Program& p, const char* op) {
  if (p.has_extended_rules())
    throw Error(ErrorKind::UnexpandedRule,
                std::string(op) + " requires choice and cardinality rules to be expanded");
}

}  // namespace detail

/// Removes duplicate body literals, inapplicable rules (an atom both positive
/// and negative in the body), empty choice rules and duplicate rules. With
/// `remove_tautologies`, rules whose head meets their positive body go too.
inline Program normalize(const Program& p, NormalizeOptions opts = {}) {
  Program out = p;
  out.rules.clear();
  std::set<Rule, decltype(&canonical_less)> seen(&canonical_less);
  for (Rule r : p.rules) {
    if (r.kind == RuleKind::Cardinality) {
      auto sp = r.body_pos, sn = r.body_neg;
      std::sort(sp.begin(), sp.end());
      std::sort(sn.begin(), sn.end());
      if (std::adjacent_find(sp.begin(), sp.end()) != sp.end() ||
          std::adjacent_find(sn.begin(), sn.end()) != sn.end())
        throw Error(ErrorKind::CardinalityDuplicate,
                    "cardinality body repeats a literal (weights are not supported)");
    } else {
      detail::dedupe_keep_first(r.body_pos);
      detail::dedupe_keep_first(r.body_neg);
      if (detail::intersects(r.body_pos, r.body_neg)) continue;
    }
    detail::dedupe_keep_first(r.head);
    if (r.kind == RuleKind::Choice && r.head.empty()) continue;
    if (opts.remove_tautologies && r.kind == RuleKind::Disjunctive &&
        detail::intersects(r.head, r.body_pos))
      continue;
    if (!seen.insert(canonical(r)).second) continue;
    out.rules.push_back(std::move(r));
  }
  return out;
}

/// Shifting: a1;...;al <- B becomes l normal rules ai <- B, ~aj (j != i).
inline Program shift(const Program& p) {
  detail::require_expanded(p, "shift");
  Program out = p;
  out.rules.clear();
  for (const Rule& r : p.rules) {
    if (r.head.size() <= 1) {
      out.rules.push_back(r);
      continue;
    }
    for (std::size_t i = 0; i < r.head.size(); ++i) {
      Rule s = Rule::normal({r.head[i]}, r.body_pos, r.body_neg);
      for (std::size_t j = 0; j < r.head.size(); ++j)
        if (j != i) s.body_neg.push_back(r.head[j]);
      out.rules.push_back(std::move(s));
    }
  }
  return out;
}

enum class CardinalityMode { Binomial, Ladder };

namespace detail {

inline void for_each_subset(std::size_t n, std::size_t k,
                            const std::function<void(const std::vector<std::size_t>&)>& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    if (k == 0) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline void expand_binomial(const Rule& r, std::vector<Rule>& out) {
  const std::vector<Literal> lits = r.body();
  for_each_subset(lits.size(), r.bound, [&](const std::vector<std::size_t>& idx) {
    Rule s = Rule::normal(r.head);
    for (std::size_t i : idx) (lits[i].negated ? s.body_neg : s.body_pos).push_back(lits[i].atom);
    out.push_back(std::move(s));
  });
}

// Counter atoms l(i, j): "at least j of literals i..n hold".
inline void expand_ladder(const Rule& r, Program& out) {
  const std::vector<Literal> lits = r.body();
  const std::size_t n = lits.size();
  const std::size_t k = r.bound;
  if (k == 0) {
    out.rules.push_back(Rule::normal(r.head));
    return;
  }
  if (k > n) return;
  std::vector<std::vector<AtomId>> l(n + 1, std::vector<AtomId>(k + 1, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 1; j <= k; ++j) l[i][j] = out.new_atom();
  auto with_lit = [](Rule s, const Literal& lit) {
    (lit.negated ? s.body_neg : s.body_pos).push_back(lit.atom);
    return s;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 1; j <= k; ++j) {
      if (i + 1 < n) out.rules.push_back(Rule::normal({l[i][j]}, {l[i + 1][j]}));
      if (i + 1 < n && j < k)
        out.rules.push_back(with_lit(Rule::normal({l[i][j + 1]}, {l[i + 1][j]}), lits[i]));
    }
    out.rules.push_back(with_lit(Rule::normal({l[i][1]}), lits[i]));
  }
  out.rules.push_back(Rule::normal(r.head, {l[0][k]}));
}

}  // namespace detail

/// Replaces every cardinality rule. Binomial emits one rule per bound-sized
/// subset of the body; ladder introduces O(nk) hidden counter atoms.
inline Program expand_cardinality(const Program& p, CardinalityMode mode) {
  Program out = p;
  out.rules.clear();
  for (const Rule& r : p.rules) {
    if (r.kind != RuleKind::Cardinality) {
      out.rules.push_back(r);
      continue;
    }
    if (mode == CardinalityMode::Binomial)
      detail::expand_binomial(r, out.rules);
    else
      detail::expand_ladder(r, out);
  }
  return out;
}

/// {a1..al} <- B becomes ai <- B, ~ai' and ai' <- ~ai with hidden ai'.
inline Program expand_choice(const Program& p) {
  Program out = p;
  out.rules.clear();
  for (const Rule& r : p.rules) {
    if (r.kind != RuleKind::Choice) {
      out.rules.push_back(r);
      continue;
    }
    for (AtomId a : r.head) {
      AtomId mate = out.new_atom();
      Rule s = Rule::normal({a}, r.body_pos, r.body_neg);
      s.body_neg.push_back(mate);
      out.rules.push_back(std::move(s));
      out.rules.push_back(Rule::normal({mate}, {}, {a}));
    }
  }
  return out;
}

namespace detail {

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > (1ULL << 40)) return r;
  }
  return r;
}

}  // namespace detail

/// Expands choice and cardinality rules. Cardinality rules whose binomial
/// expansion stays under `binomial_limit` rules avoid auxiliary atoms.
inline Program expand(const Program& p, std::uint64_t binomial_limit = 256) {
  Program out = expand_choice(p);
  Program res = out;
  res.rules.clear();
  for (const Rule& r : out.rules) {
    if (r.kind != RuleKind::Cardinality) {
      res.rules.push_back(r);
    } else if (detail::binomial(r.body_size(), r.bound) <= binomial_limit) {
      detail::expand_binomial(r, res.rules);
    } else {
      detail::expand_ladder(r, res);
    }
  }
  return res;
}

/// Tight iff the positive dependency graph (head atom -> positive body atom)
/// has no cycle.
inline bool is_tight(const Program& p) {
  detail::require_expanded(p, "is_tight");
  std::vector<std::vector<AtomId>> succ(p.atom_count + 1);
  for (const Rule& r : p.rules)
    for (AtomId h : r.head)
      for (AtomId b : r.body_pos) succ[h].push_back(b);
  // 0 = unvisited, 1 = on stack, 2 = done
  std::vector<std::uint8_t> state(p.atom_count + 1, 0);
  std::vector<std::pair<AtomId, std::size_t>> stack;
  for (AtomId root = 1; root <= p.atom_count; ++root) {
    if (state[root]) continue;
    stack.push_back({root, 0});
    state[root] = 1;
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      if (i < succ[v].size()) {
        AtomId w = succ[v][i++];
        if (state[w] == 1) return false;
        if (state[w] == 0) {
          state[w] = 1;
          stack.push_back({w, 0});
        }
      } else {
        state[v] = 2;
        stack.pop_back();
      }
    }
  }
  return true;
}

}  // namespace symbreak

#endif
