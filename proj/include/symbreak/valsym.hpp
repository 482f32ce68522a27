#ifndef SYMBREAK_VALSYM_HPP
#define SYMBREAK_VALSYM_HPP

// CSP-to-ASP encoders (direct, support, all-different), value precedence
// encoders, and a harness comparing unit propagation on an encoding with a
// consistency oracle.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "symbreak/csp.hpp"
#include "symbreak/error.hpp"
#include "symbreak/oracle.hpp"
#include "symbreak/program.hpp"
#include "symbreak/propagation.hpp"

namespace symbreak {

struct CspEncoding {
  Program program;
  /// e[v][i - 1] is the atom e(v, i).
  std::vector<std::vector<AtomId>> e;

  std::optional<AtomId> atom(std::size_t v, Value i) const {
    if (v >= e.size() || i < 1 || i > e[v].size()) return std::nullopt;
    return e[v][i - 1];
  }

  /// Value of each variable in an answer set; 0 where none or several hold.
  CspAssignment decode(const AtomSet& m) const {
    CspAssignment out(e.size(), 0);
    for (std::size_t v = 0; v < e.size(); ++v)
      for (Value i = 1; i <= e[v].size(); ++i)
        if (std::binary_search(m.begin(), m.end(), e[v][i - 1])) out[v] = out[v] ? 0 : i;
    return out;
  }

  AtomSet encode(const CspAssignment& a) const {
    AtomSet out;
    for (std::size_t v = 0; v < a.size(); ++v) out.push_back(e[v].at(a[v] - 1));
    std::sort(out.begin(), out.end());
    return out;
  }
};

enum class TableMode { Direct, Support };
enum class AllDiffMode { Binary, Cardinality };
enum class PrecedenceMode { Dfa, Allowed, Pairwise };

struct CspEncodeOptions {
  TableMode table = TableMode::Direct;
  AllDiffMode alldiff = AllDiffMode::Cardinality;
  PrecedenceMode precedence = PrecedenceMode::Allowed;
};

namespace detail {

// Rule under construction where atoms outside a domain count as false: a
// positive occurrence kills the rule, a negative one is dropped.
struct RuleBuilder {
  std::vector<AtomId> pos, neg;
  bool dead = false;

  RuleBuilder& p(std::optional<AtomId> a) {
    if (a)
      pos.push_back(*a);
    else
      dead = true;
    return *this;
  }
  RuleBuilder& n(std::optional<AtomId> a) {
    if (a) neg.push_back(*a);
    return *this;
  }
};

inline void emit_integrity(Program& prog, const RuleBuilder& b) {
  if (!b.dead) prog.add(Rule::integrity(b.pos, b.neg));
}

inline void emit_normal(Program& prog, AtomId head, const RuleBuilder& b) {
  if (!b.dead) prog.add(Rule::normal({head}, b.pos, b.neg));
}

}  // namespace detail

/// Atoms e(v, i) with the exactly-one rules: a choice over the values, an
/// integrity constraint requiring one, and a cardinality constraint
/// forbidding two.
inline CspEncoding encode_base(const CspSpec& spec) {
  spec.validate();
  CspEncoding enc;
  for (const CspVariable& var : spec.vars) {
    std::vector<AtomId> atoms;
    for (Value i = 1; i <= var.domain; ++i)
      atoms.push_back(enc.program.add_atom("e(" + var.name + "," + std::to_string(i) + ")"));
    enc.e.push_back(atoms);
  }
  for (const auto& atoms : enc.e) {
    enc.program.add(Rule::choice(atoms));
    enc.program.add(Rule::integrity({}, atoms));
    if (atoms.size() >= 2) enc.program.add(Rule::cardinality(std::nullopt, 2, atoms, {}));
  }
  return enc;
}

/// One integrity constraint per forbidden tuple.
inline void add_table_direct(CspEncoding& enc, const CspSpec& spec, const TableConstraint& t) {
  std::set<std::vector<Value>> allowed(t.allowed.begin(), t.allowed.end());
  std::vector<Value> tup(t.scope.size(), 1);
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == tup.size()) {
      if (allowed.contains(tup)) return;
      detail::RuleBuilder b;
      for (std::size_t i = 0; i < tup.size(); ++i) b.p(enc.atom(t.scope[i], tup[i]));
      detail::emit_integrity(enc.program, b);
      return;
    }
    for (Value x = 1; x <= spec.vars[t.scope[k]].domain; ++x) {
      tup[k] = x;
      self(self, k + 1);
    }
  };
  rec(rec, 0);
}

/// Support rules for a binary table, in both directions.
inline void add_table_support(CspEncoding& enc, const CspSpec& spec, const TableConstraint& t) {
  if (t.scope.size() != 2)
    throw Error(ErrorKind::NonBinaryConstraint,
                "support encoding needs binary tables, got arity " + std::to_string(t.scope.size()));
  for (std::size_t side = 0; side < 2; ++side) {
    std::size_t v = t.scope[side], w = t.scope[1 - side];
    for (Value i = 1; i <= spec.vars[v].domain; ++i) {
      detail::RuleBuilder b;
      b.p(enc.atom(v, i));
      for (Value j = 1; j <= spec.vars[w].domain; ++j) {
        std::vector<Value> tup = side == 0 ? std::vector<Value>{i, j} : std::vector<Value>{j, i};
        if (std::find(t.allowed.begin(), t.allowed.end(), tup) != t.allowed.end()) b.n(enc.atom(w, j));
      }
      detail::emit_integrity(enc.program, b);
    }
  }
}

inline void add_alldiff(CspEncoding& enc, const CspSpec& spec, const AllDifferent& c, AllDiffMode mode) {
  Value top = 0;
  for (std::size_t v : c.scope) top = std::max(top, spec.vars[v].domain);
  for (Value i = 1; i <= top; ++i) {
    std::vector<AtomId> holders;
    for (std::size_t v : c.scope)
      if (auto a = enc.atom(v, i)) holders.push_back(*a);
    if (holders.size() < 2) continue;
    if (mode == AllDiffMode::Cardinality) {
      enc.program.add(Rule::cardinality(std::nullopt, 2, holders, {}));
    } else {
      for (std::size_t x = 0; x < holders.size(); ++x)
        for (std::size_t y = x + 1; y < holders.size(); ++y)
          enc.program.add(Rule::integrity({holders[x], holders[y]}));
    }
  }
}

/// precedence([dj, dk], scope) with hidden atoms b_1..b_n, b_i true iff dj
/// occurs before position i.
inline void add_precedence_pair(CspEncoding& enc, Value dj, Value dk, const Scope& scope) {
  std::size_t n = scope.size();
  if (n == 0) return;
  Program& prog = enc.program;
  std::vector<AtomId> b;
  for (std::size_t i = 0; i < n; ++i) b.push_back(prog.new_atom());
  prog.add(Rule::choice(b));
  auto ej = [&](std::size_t i) { return enc.atom(scope[i], dj); };
  auto ek = [&](std::size_t i) { return enc.atom(scope[i], dk); };
  for (std::size_t i = 0; i + 1 < n; ++i) {
    detail::emit_integrity(prog, detail::RuleBuilder{}.p(ej(i)).n(b[i + 1]));
    {
      detail::RuleBuilder r;
      r.n(ej(i)).p(b[i]).n(b[i + 1]);
      detail::emit_integrity(prog, r);
    }
    {
      detail::RuleBuilder r;
      r.n(ej(i)).n(b[i]).p(b[i + 1]);
      detail::emit_integrity(prog, r);
    }
  }
  for (std::size_t i = 0; i < n; ++i) detail::emit_integrity(prog, detail::RuleBuilder{}.p(ek(i)).n(b[i]));
  prog.add(Rule::integrity({b[0]}));
}

/// Global precedence through the automaton whose state is the largest value
/// seen so far. state[i][j] holds when d_j is the largest before position i
/// (d_0 meaning none).
inline void add_precedence_dfa(CspEncoding& enc, const std::vector<Value>& values, const Scope& scope) {
  std::size_t n = scope.size(), m = values.size();
  if (n == 0 || m == 0) return;
  Program& prog = enc.program;
  std::vector<std::vector<AtomId>> state(n, std::vector<AtomId>(m + 1));
  for (auto& row : state)
    for (AtomId& a : row) a = prog.new_atom();
  auto e = [&](std::size_t i, std::size_t j) { return enc.atom(scope[i], values[j - 1]); };
  prog.add(Rule::normal({state[0][0]}));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = 0; j < m; ++j)
      detail::emit_normal(prog, state[i + 1][j + 1], detail::RuleBuilder{}.p(state[i][j]).p(e(i, j + 1)));
    for (std::size_t j = 0; j <= m; ++j) {
      detail::RuleBuilder r;
      r.p(state[i][j]);
      if (j < m) r.n(e(i, j + 1));
      detail::emit_normal(prog, state[i + 1][j], r);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= m; ++j)
      for (std::size_t k = j + 2; k <= m; ++k)
        detail::emit_integrity(prog, detail::RuleBuilder{}.p(state[i][j]).p(e(i, k)));
}

/// Global precedence through atoms allowed(v_i, d_j): d_j may be taken at
/// position i.
inline void add_precedence_allowed(CspEncoding& enc, const std::vector<Value>& values,
                                   const Scope& scope) {
  std::size_t n = scope.size(), m = values.size();
  if (n == 0 || m == 0) return;
  Program& prog = enc.program;
  std::vector<std::vector<AtomId>> allowed(n, std::vector<AtomId>(m + 1, 0));
  for (auto& row : allowed)
    for (std::size_t j = 1; j <= m; ++j) row[j] = prog.new_atom();
  auto e = [&](std::size_t i, std::size_t j) { return enc.atom(scope[i], values[j - 1]); };
  prog.add(Rule::normal({allowed[0][1]}));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = 1; j < m; ++j)
      detail::emit_normal(prog, allowed[i + 1][j + 1], detail::RuleBuilder{}.p(e(i, j)));
    for (std::size_t j = 1; j <= m; ++j) prog.add(Rule::normal({allowed[i + 1][j]}, {allowed[i][j]}));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      detail::emit_integrity(prog, detail::RuleBuilder{}.p(e(i, j)).n(allowed[i][j]));
}

/// Global precedence as one pair constraint per j < k.
inline void add_precedence_pairwise(CspEncoding& enc, const std::vector<Value>& values,
                                    const Scope& scope) {
  for (std::size_t j = 0; j < values.size(); ++j)
    for (std::size_t k = j + 1; k < values.size(); ++k)
      add_precedence_pair(enc, values[j], values[k], scope);
}

inline CspEncoding encode_csp(const CspSpec& spec, const CspEncodeOptions& opts = {}) {
  CspEncoding enc = encode_base(spec);
  for (const Constraint& c : spec.constraints) {
    if (auto t = std::get_if<TableConstraint>(&c)) {
      if (opts.table == TableMode::Support)
        add_table_support(enc, spec, *t);
      else
        add_table_direct(enc, spec, *t);
    } else if (auto a = std::get_if<AllDifferent>(&c)) {
      add_alldiff(enc, spec, *a, opts.alldiff);
    } else if (auto p = std::get_if<PrecedencePair>(&c)) {
      add_precedence_pair(enc, p->dj, p->dk, p->scope);
    } else {
      const auto& g = std::get<PrecedenceGlobal>(c);
      switch (opts.precedence) {
        case PrecedenceMode::Dfa: add_precedence_dfa(enc, g.values, g.scope); break;
        case PrecedenceMode::Allowed: add_precedence_allowed(enc, g.values, g.scope); break;
        case PrecedenceMode::Pairwise: add_precedence_pairwise(enc, g.values, g.scope); break;
      }
    }
  }
  return enc;
}

inline CspEncoding encode_direct(const CspSpec& spec) {
  return encode_csp(spec, {TableMode::Direct, AllDiffMode::Binary, PrecedenceMode::Allowed});
}

inline CspEncoding encode_support(const CspSpec& spec) {
  return encode_csp(spec, {TableMode::Support, AllDiffMode::Binary, PrecedenceMode::Allowed});
}

inline CspEncoding encode_alldiff(const CspSpec& spec) {
  return encode_csp(spec, {TableMode::Direct, AllDiffMode::Cardinality, PrecedenceMode::Allowed});
}

// ---------------------------------------------------------------------------
// Propagation strength

enum class CspEncoder { Direct, Support, AllDiff, Pair, Dfa, Allowed, Pairwise };

inline const char* to_string(CspEncoder e) {
  switch (e) {
    case CspEncoder::Direct: return "direct";
    case CspEncoder::Support: return "support";
    case CspEncoder::AllDiff: return "alldiff";
    case CspEncoder::Pair: return "pair";
    case CspEncoder::Dfa: return "dfa";
    case CspEncoder::Allowed: return "allowed";
    case CspEncoder::Pairwise: return "pairwise";
  }
  return "?";
}

inline std::optional<CspEncoder> parse_encoder(const std::string& s) {
  for (CspEncoder e : {CspEncoder::Direct, CspEncoder::Support, CspEncoder::AllDiff, CspEncoder::Pair,
                       CspEncoder::Dfa, CspEncoder::Allowed, CspEncoder::Pairwise})
    if (s == to_string(e)) return e;
  return std::nullopt;
}

inline CspEncodeOptions options_for(CspEncoder e) {
  CspEncodeOptions o;
  o.table = e == CspEncoder::Support ? TableMode::Support : TableMode::Direct;
  o.alldiff = e == CspEncoder::AllDiff ? AllDiffMode::Cardinality : AllDiffMode::Binary;
  o.precedence = e == CspEncoder::Dfa        ? PrecedenceMode::Dfa
                 : e == CspEncoder::Pairwise ? PrecedenceMode::Pairwise
                                             : PrecedenceMode::Allowed;
  return o;
}

/// The oracle each encoder is measured against.
inline Consistency reference_level(CspEncoder e) {
  switch (e) {
    case CspEncoder::Direct:
    case CspEncoder::Support:
    case CspEncoder::AllDiff: return Consistency::ArcBinary;
    default: return Consistency::Generalised;
  }
}

/// An encoding ready for repeated propagation from partial domain states.
class EncodedPropagator {
public:
  explicit EncodedPropagator(CspEncoding enc)
      : enc_(std::move(enc)),
        nogoods_(build_nogoods(normalize(expand(normalize(enc_.program)), {.remove_tautologies = true}))) {}

  const CspEncoding& encoding() const { return enc_; }
  const NogoodSet& nogoods() const { return nogoods_; }

  /// Unit propagation with F e(v, i) for every removed value; the values
  /// whose atom ends up unassigned or true remain.
  OracleResult propagate(const Domains& dom) const {
    SignedAssignment a(nogoods_.var_count());
    for (std::size_t v = 0; v < dom.size(); ++v)
      for (Value i = 1; i <= dom[v].size(); ++i)
        if (!dom[v][i - 1]) a.assign(F(enc_.e[v][i - 1]));
    PropResult r = unit_propagate(nogoods_, std::move(a));
    OracleResult out;
    out.failed = r.status == PropStatus::Violating;
    for (std::size_t v = 0; v < dom.size(); ++v) {
      out.domains.emplace_back(dom[v].size(), 0);
      for (Value i = 1; i <= dom[v].size(); ++i)
        out.domains[v][i - 1] = !r.assignment.contains(F(enc_.e[v][i - 1]));
    }
    return out;
  }

private:
  CspEncoding enc_;
  NogoodSet nogoods_;
};

enum class Verdict { Equal, UpWeaker, UpStronger };

/// Propagation against the oracle. A failed side counts as pruning every
/// value.
inline Verdict compare_outcomes(const OracleResult& up, const OracleResult& oracle) {
  auto kept = [](const OracleResult& r, std::size_t v, std::size_t i) {
    return !r.failed && r.domains[v][i];
  };
  bool up_extra = false, oracle_extra = false;
  for (std::size_t v = 0; v < oracle.domains.size(); ++v)
    for (std::size_t i = 0; i < oracle.domains[v].size(); ++i) {
      bool u = kept(up, v, i), o = kept(oracle, v, i);
      if (!u && o) up_extra = true;
      if (u && !o) oracle_extra = true;
    }
  if (up.failed && !oracle.failed) up_extra = true;
  if (oracle.failed && !up.failed) oracle_extra = true;
  if (up_extra) return Verdict::UpStronger;
  if (oracle_extra) return Verdict::UpWeaker;
  return Verdict::Equal;
}

struct StrengthWitness {
  CspSpec spec;
  Domains domains;
  Verdict verdict = Verdict::Equal;
};

struct StrengthReport {
  std::size_t equal = 0, up_weaker = 0, up_stronger = 0;
  std::optional<StrengthWitness> first_weaker, first_stronger;

  std::size_t trials() const { return equal + up_weaker + up_stronger; }

  void add(Verdict v, const CspSpec& spec, const Domains& dom) {
    switch (v) {
      case Verdict::Equal: ++equal; break;
      case Verdict::UpWeaker:
        ++up_weaker;
        if (!first_weaker) first_weaker = StrengthWitness{spec, dom, v};
        break;
      case Verdict::UpStronger:
        ++up_stronger;
        if (!first_stronger) first_stronger = StrengthWitness{spec, dom, v};
        break;
    }
  }
};

/// Compares the encoder's propagation with its reference oracle on one state.
inline Verdict compare_state(const CspSpec& spec, CspEncoder encoder, const Domains& dom) {
  EncodedPropagator up(encode_csp(spec, options_for(encoder)));
  return compare_outcomes(up.propagate(dom), consistency_oracle(spec, dom, reference_level(encoder)));
}

namespace detail {

inline Domains random_state(const CspSpec& spec, std::mt19937_64& rng) {
  std::bernoulli_distribution keep(0.7);
  Domains dom = spec.full_domains();
  for (auto& d : dom)
    for (auto& x : d) x = keep(rng);
  return dom;
}

inline std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

}  // namespace detail

/// Random states of a fixed spec.
inline StrengthReport strength_compare(CspEncoder encoder, const CspSpec& spec, std::size_t trials,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  EncodedPropagator up(encode_csp(spec, options_for(encoder)));
  StrengthReport rep;
  for (std::size_t t = 0; t < trials; ++t) {
    Domains dom = detail::random_state(spec, rng);
    rep.add(compare_outcomes(up.propagate(dom), consistency_oracle(spec, dom, reference_level(encoder))),
            spec, dom);
  }
  return rep;
}

/// A random instance suited to the encoder: binary tables over n = 3, d = 4
/// for direct and support; all-different over n <= 4, d <= 4; a pair or
/// global precedence over n <= 6, d <= 4 otherwise, the global values
/// covering the whole domain.
inline CspSpec random_strength_instance(CspEncoder encoder, std::mt19937_64& rng) {
  CspSpec spec;
  auto vars = [&](std::size_t n, Value d) {
    for (std::size_t i = 1; i <= n; ++i) spec.add_var("v" + std::to_string(i), d);
  };
  switch (encoder) {
    case CspEncoder::Direct:
    case CspEncoder::Support: {
      vars(3, 4);
      std::size_t count = detail::uniform(rng, 1, 3);
      std::bernoulli_distribution density(std::uniform_real_distribution<double>(0.2, 0.8)(rng));
      for (std::size_t c = 0; c < count; ++c) {
        std::size_t x = detail::uniform(rng, 0, 2), y = (x + detail::uniform(rng, 1, 2)) % 3;
        TableConstraint t{{x, y}, {}};
        for (Value i = 1; i <= 4; ++i)
          for (Value j = 1; j <= 4; ++j)
            if (density(rng)) t.allowed.push_back({i, j});
        spec.constraints.push_back(t);
      }
      break;
    }
    case CspEncoder::AllDiff: {
      std::size_t n = detail::uniform(rng, 2, 4);
      vars(n, static_cast<Value>(detail::uniform(rng, 1, 4)));
      AllDifferent a;
      for (std::size_t i = 0; i < n; ++i) a.scope.push_back(i);
      spec.constraints.push_back(a);
      break;
    }
    default: {
      std::size_t n = detail::uniform(rng, 1, 6);
      Value d = static_cast<Value>(detail::uniform(rng, 2, 4));
      vars(n, d);
      Scope scope(n);
      for (std::size_t i = 0; i < n; ++i) scope[i] = i;
      if (encoder == CspEncoder::Pair) {
        Value j = static_cast<Value>(detail::uniform(rng, 1, d));
        Value k = static_cast<Value>(detail::uniform(rng, 1, d - 1));
        if (k >= j) ++k;
        spec.constraints.push_back(PrecedencePair{j, k, scope});
      } else {
        std::vector<Value> values;
        for (Value x = 1; x <= d; ++x) values.push_back(x);
        spec.constraints.push_back(PrecedenceGlobal{values, scope});
      }
      break;
    }
  }
  return spec;
}

/// One random instance and one random state per trial.
inline StrengthReport strength_compare(CspEncoder encoder, std::size_t trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  StrengthReport rep;
  for (std::size_t t = 0; t < trials; ++t) {
    CspSpec spec = random_strength_instance(encoder, rng);
    Domains dom = detail::random_state(spec, rng);
    rep.add(compare_state(spec, encoder, dom), spec, dom);
  }
  return rep;
}

}  // namespace symbreak

#endif
