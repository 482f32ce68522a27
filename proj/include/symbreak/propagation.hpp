#ifndef SYMBREAK_PROPAGATION_HPP
#define SYMBREAK_PROPAGATION_HPP

// Nogoods over atoms and rule bodies, unit propagation, and a chronological
// backtracking solver for tight programs.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "symbreak/error.hpp"
#include "symbreak/oracle.hpp"
#include "symbreak/program.hpp"

namespace symbreak {

/// A rule body as a set of literals; rules with equal bodies share a key.
struct BodyKey {
  std::vector<AtomId> body_pos;
  std::vector<AtomId> body_neg;

  static BodyKey of(const Rule& r) {
    BodyKey k{r.body_pos, r.body_neg};
    std::sort(k.body_pos.begin(), k.body_pos.end());
    std::sort(k.body_neg.begin(), k.body_neg.end());
    return k;
  }

  friend bool operator==(const BodyKey&, const BodyKey&) = default;
  friend auto operator<=>(const BodyKey&, const BodyKey&) = default;
};

/// Index into dom(A): atoms are 1..atom_count, bodies follow.
using Var = std::uint32_t;

struct SignedLiteral {
  Var var = 0;
  bool truth = true;

  SignedLiteral operator~() const { return {var, !truth}; }
  friend bool operator==(const SignedLiteral&, const SignedLiteral&) = default;
  friend auto operator<=>(const SignedLiteral&, const SignedLiteral&) = default;
};

inline SignedLiteral T(Var v) { return {v, true}; }
inline SignedLiteral F(Var v) { return {v, false}; }

/// Literals sorted, no complementary pair.
using Nogood = std::vector<SignedLiteral>;

struct NogoodSet {
  AtomId atom_count = 0;
  std::vector<BodyKey> bodies;
  std::vector<Nogood> nogoods;

  Var var_count() const { return atom_count + static_cast<Var>(bodies.size()); }
  bool is_atom(Var v) const { return v >= 1 && v <= atom_count; }

  std::optional<Var> body_var(const BodyKey& k) const {
    for (std::size_t i = 0; i < bodies.size(); ++i)
      if (bodies[i] == k) return atom_count + 1 + static_cast<Var>(i);
    return std::nullopt;
  }

  const BodyKey& body(Var v) const { return bodies.at(v - atom_count - 1); }

  std::string describe(SignedLiteral l, const Program& p) const {
    std::string s = l.truth ? "T" : "F";
    if (is_atom(l.var)) return s + p.name(l.var);
    const BodyKey& k = body(l.var);
    s += "{";
    bool first = true;
    for (AtomId a : k.body_pos) {
      s += (first ? "" : ",") + p.name(a);
      first = false;
    }
    for (AtomId a : k.body_neg) {
      s += (first ? "~" : ",~") + p.name(a);
      first = false;
    }
    return s + "}";
  }
};

/// Δ and Θ of the shifted program plus unit nogoods for compute statements.
inline NogoodSet build_nogoods(const Program& p) {
  detail::require_expanded(p, "build_nogoods");
  for (const Rule& r : p.rules)
    if (detail::intersects(r.head, r.body_pos))
      throw Error(ErrorKind::TautologyPresent,
                  "tautological rule present; normalize with tautology removal first");
  const Program s = shift(p);
  NogoodSet ns;
  ns.atom_count = s.atom_count;
  std::map<BodyKey, Var> index;
  std::vector<Var> rule_body(s.rules.size());
  for (std::size_t i = 0; i < s.rules.size(); ++i) {
    BodyKey k = BodyKey::of(s.rules[i]);
    auto it = index.find(k);
    if (it == index.end()) {
      Var v = ns.atom_count + 1 + static_cast<Var>(ns.bodies.size());
      it = index.emplace(k, v).first;
      ns.bodies.push_back(k);
    }
    rule_body[i] = it->second;
  }

  std::vector<Nogood> out;
  for (std::size_t b = 0; b < ns.bodies.size(); ++b) {
    const BodyKey& k = ns.bodies[b];
    Var beta = ns.atom_count + 1 + static_cast<Var>(b);
    Nogood all{F(beta)};
    for (AtomId a : k.body_pos) {
      all.push_back(T(a));
      out.push_back({T(beta), F(a)});
    }
    for (AtomId a : k.body_neg) {
      all.push_back(F(a));
      out.push_back({T(beta), T(a)});
    }
    out.push_back(std::move(all));
  }
  std::vector<std::vector<Var>> support(s.atom_count + 1);
  for (std::size_t i = 0; i < s.rules.size(); ++i) {
    Nogood head{T(rule_body[i])};
    for (AtomId a : s.rules[i].head) {
      head.push_back(F(a));
      support[a].push_back(rule_body[i]);
    }
    out.push_back(std::move(head));
  }
  for (AtomId a = 1; a <= s.atom_count; ++a) {
    Nogood sup{T(a)};
    for (Var beta : support[a]) sup.push_back(F(beta));
    out.push_back(std::move(sup));
  }
  for (AtomId a : s.compute_true) out.push_back({F(a)});
  for (AtomId a : s.compute_false) out.push_back({T(a)});

  std::set<Nogood> seen;
  for (Nogood& n : out) {
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
    if (seen.insert(n).second) ns.nogoods.push_back(n);
  }
  return ns;
}

/// A consistent set of signed literals, remembering insertion order.
class SignedAssignment {
public:
  SignedAssignment() = default;
  explicit SignedAssignment(Var var_count) : val_(var_count + 1, 0) {}

  std::int8_t value(Var v) const { return v < val_.size() ? val_[v] : 0; }
  bool contains(SignedLiteral l) const { return value(l.var) == (l.truth ? 1 : -1); }
  bool assigned(Var v) const { return value(v) != 0; }

  /// Adds `l`; false (and no change) if its complement is already present.
  bool assign(SignedLiteral l) {
    if (l.var >= val_.size()) val_.resize(l.var + 1, 0);
    std::int8_t want = l.truth ? 1 : -1;
    if (val_[l.var] == want) return true;
    if (val_[l.var] != 0) return false;
    val_[l.var] = want;
    trail_.push_back(l);
    return true;
  }

  const std::vector<SignedLiteral>& literals() const { return trail_; }
  std::size_t size() const { return trail_.size(); }

  std::vector<SignedLiteral> sorted() const {
    auto v = trail_;
    std::sort(v.begin(), v.end());
    return v;
  }

  AtomSet true_atoms(AtomId atom_count) const {
    AtomSet out;
    for (AtomId a = 1; a <= atom_count && a < val_.size(); ++a)
      if (val_[a] == 1) out.push_back(a);
    return out;
  }

private:
  std::vector<std::int8_t> val_;
  std::vector<SignedLiteral> trail_;
};

enum class PropStatus { Success, Violating };

struct PropResult {
  SignedAssignment assignment;
  PropStatus status;
};

/// Occurrence-list unit propagation used by the solver.
class Propagator {
public:
  explicit Propagator(const NogoodSet& ns) : ns_(ns), occ_(2 * (ns.var_count() + 1)) {
    for (std::size_t i = 0; i < ns.nogoods.size(); ++i)
      for (SignedLiteral l : ns.nogoods[i]) occ_[slot(l)].push_back(i);
  }

  /// Full propagation from scratch.
  bool propagate(SignedAssignment& a) const {
    for (std::size_t i = 0; i < ns_.nogoods.size(); ++i)
      if (!visit(i, a)) return false;
    return propagate_from(a, 0);
  }

  /// Propagates the consequences of trail entries from position `from` on,
  /// assuming everything before was already propagated.
  bool propagate_from(SignedAssignment& a, std::size_t from) const {
    for (std::size_t q = from; q < a.literals().size(); ++q) {
      SignedLiteral l = a.literals()[q];
      for (std::size_t i : occ_[slot(l)])
        if (!visit(i, a)) return false;
    }
    return true;
  }

private:
  static std::size_t slot(SignedLiteral l) { return 2 * std::size_t{l.var} + (l.truth ? 1 : 0); }

  bool visit(std::size_t i, SignedAssignment& a) const {
    const Nogood& d = ns_.nogoods[i];
    const SignedLiteral* open = nullptr;
    for (const SignedLiteral& l : d) {
      if (a.contains(l)) continue;
      if (a.contains(~l)) return true;
      if (open) return true;
      open = &l;
    }
    if (!open) return false;
    a.assign(~*open);
    return true;
  }

  const NogoodSet& ns_;
  std::vector<std::vector<std::size_t>> occ_;
};

inline PropResult unit_propagate(const NogoodSet& ns, SignedAssignment a) {
  Propagator prop(ns);
  bool ok = prop.propagate(a);
  return {std::move(a), ok ? PropStatus::Success : PropStatus::Violating};
}

/// Unit propagation exactly as the textbook loop states it: look for a
/// violated nogood, else pick (uniformly at random) a nogood with a single
/// unassigned literal and add its complement. Quadratic; for tests.
inline PropResult unit_propagate_reference(const NogoodSet& ns, SignedAssignment a,
                                           std::mt19937_64& rng) {
  while (true) {
    std::vector<SignedLiteral> units;
    for (const Nogood& d : ns.nogoods) {
      std::size_t missing = 0;
      SignedLiteral sigma{};
      for (SignedLiteral l : d)
        if (!a.contains(l)) {
          ++missing;
          sigma = l;
        }
      if (missing == 0) return {std::move(a), PropStatus::Violating};
      if (missing == 1 && !a.contains(~sigma)) units.push_back(sigma);
    }
    if (units.empty()) return {std::move(a), PropStatus::Success};
    std::uniform_int_distribution<std::size_t> pick(0, units.size() - 1);
    a.assign(~units[pick(rng)]);
  }
}

struct SolveOptions {
  /// Stop after this many distinct answer sets; 0 means all.
  std::size_t limit = 0;
  /// Abort with SearchBudgetExceeded after this many decisions; 0 means none.
  std::uint64_t node_budget = 0;
};

struct SolveResult {
  std::vector<AtomSet> answer_sets;
  std::uint64_t decisions = 0;
};

namespace detail {

struct TightSolver {
  const Program& original;
  const Program& verify;
  const NogoodSet& ns;
  const Propagator& prop;
  const SolveOptions& opts;
  SolveResult result;
  std::vector<AtomSet> seen;
  bool done = false;

  void record(const SignedAssignment& a) {
    AtomSet m = a.true_atoms(ns.atom_count);
    if (!is_answer_set(verify, m))
      throw Error(ErrorKind::InvalidArgument, "solver produced a non-answer set (internal error)");
    AtomSet proj;
    for (AtomId x : m)
      if (x <= original.atom_count && !original.is_hidden(x)) proj.push_back(x);
    auto it = std::lower_bound(seen.begin(), seen.end(), proj);
    if (it != seen.end() && *it == proj) return;
    seen.insert(it, proj);
    result.answer_sets.push_back(std::move(proj));
    if (opts.limit && result.answer_sets.size() >= opts.limit) done = true;
  }

  void search(SignedAssignment a, Var next) {
    while (next <= ns.var_count() && a.assigned(next)) ++next;
    if (next > ns.var_count()) {
      record(a);
      return;
    }
    for (bool truth : {true, false}) {
      if (done) return;
      if (opts.node_budget && result.decisions >= opts.node_budget)
        throw Error(ErrorKind::SearchBudgetExceeded,
                    "decision budget of " + std::to_string(opts.node_budget) + " exhausted");
      ++result.decisions;
      SignedAssignment b = a;
      std::size_t from = b.size();
      b.assign({next, truth});
      if (prop.propagate_from(b, from)) search(std::move(b), next + 1);
    }
  }
};

}  // namespace detail

/// All answer sets of a tight program by propagation and chronological
/// backtracking, branching on the lowest unassigned atom (true first).
/// Every solution is re-checked with the oracle.
inline SolveResult solve_tight(const Program& p, SolveOptions opts = {}) {
  Program q = normalize(expand(normalize(p)), {.remove_tautologies = true});
  if (!is_tight(q)) throw Error(ErrorKind::NotTight, "program is not tight");
  // tight implies head-cycle-free, so the shifted program has the same
  // answer sets and keeps the oracle check on its cheap normal path
  Program verify = shift(q);
  NogoodSet ns = build_nogoods(q);
  Propagator prop(ns);
  detail::TightSolver solver{p, verify, ns, prop, opts, {}, {}, false};
  SignedAssignment root(ns.var_count());
  if (prop.propagate(root)) solver.search(std::move(root), 1);
  std::sort(solver.result.answer_sets.begin(), solver.result.answer_sets.end(), lex_less);
  return std::move(solver.result);
}

}  // namespace symbreak

#endif
