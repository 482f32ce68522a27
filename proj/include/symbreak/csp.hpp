#ifndef SYMBREAK_CSP_HPP
#define SYMBREAK_CSP_HPP

// Finite-domain CSPs with domains 1..d: the model, a small text format, a
// backtracking reference solver and brute-force consistency oracles.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "symbreak/error.hpp"

namespace symbreak {

using Value = std::uint32_t;
using Scope = std::vector<std::size_t>;

struct CspVariable {
  std::string name;
  Value domain = 1;  // values 1..domain

  friend bool operator==(const CspVariable&, const CspVariable&) = default;
};

struct TableConstraint {
  Scope scope;
  std::vector<std::vector<Value>> allowed;
  friend bool operator==(const TableConstraint&, const TableConstraint&) = default;
};

struct AllDifferent {
  Scope scope;
  friend bool operator==(const AllDifferent&, const AllDifferent&) = default;
};

/// precedence([dj, dk], scope)
struct PrecedencePair {
  Value dj = 1, dk = 2;
  Scope scope;
  friend bool operator==(const PrecedencePair&, const PrecedencePair&) = default;
};

/// precedence([d1, ..., dm], scope), values ascending.
struct PrecedenceGlobal {
  std::vector<Value> values;
  Scope scope;
  friend bool operator==(const PrecedenceGlobal&, const PrecedenceGlobal&) = default;
};

using Constraint = std::variant<TableConstraint, AllDifferent, PrecedencePair, PrecedenceGlobal>;

inline const Scope& scope_of(const Constraint& c) {
  return std::visit([](const auto& x) -> const Scope& { return x.scope; }, c);
}

/// One value per variable, 1-based values.
using CspAssignment = std::vector<Value>;

/// Current domains as membership flags: dom[v][i - 1].
using Domains = std::vector<std::vector<char>>;

struct CspSpec {
  std::vector<CspVariable> vars;
  std::vector<Constraint> constraints;

  friend bool operator==(const CspSpec&, const CspSpec&) = default;

  std::size_t add_var(std::string name, Value domain) {
    if (domain == 0) throw Error(ErrorKind::InvalidArgument, "empty domain for " + name);
    vars.push_back({std::move(name), domain});
    return vars.size() - 1;
  }

  std::optional<std::size_t> find(const std::string& name) const {
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i].name == name) return i;
    return std::nullopt;
  }

  Domains full_domains() const {
    Domains d;
    for (const auto& v : vars) d.emplace_back(v.domain, 1);
    return d;
  }

  /// Checks scopes and tuples; throws InvalidArgument.
  void validate() const {
    for (const Constraint& c : constraints) {
      const Scope& s = scope_of(c);
      std::set<std::size_t> seen;
      for (std::size_t v : s) {
        if (v >= vars.size()) throw Error(ErrorKind::InvalidArgument, "scope refers to unknown variable");
        if (!seen.insert(v).second)
          throw Error(ErrorKind::InvalidArgument, "variable repeated in scope");
      }
      if (auto t = std::get_if<TableConstraint>(&c)) {
        for (const auto& tup : t->allowed) {
          if (tup.size() != s.size())
            throw Error(ErrorKind::InvalidArgument, "tuple arity differs from scope");
          for (std::size_t i = 0; i < tup.size(); ++i)
            if (tup[i] < 1 || tup[i] > vars[s[i]].domain)
              throw Error(ErrorKind::InvalidArgument, "tuple value outside domain");
        }
      }
      if (auto p = std::get_if<PrecedencePair>(&c))
        if (p->dj == p->dk) throw Error(ErrorKind::InvalidArgument, "precedence values must differ");
      if (auto g = std::get_if<PrecedenceGlobal>(&c))
        if (!std::is_sorted(g->values.begin(), g->values.end()) ||
            std::adjacent_find(g->values.begin(), g->values.end()) != g->values.end())
          throw Error(ErrorKind::InvalidArgument, "precedence values must be strictly ascending");
    }
  }
};

namespace detail {

inline bool precedes(Value dj, Value dk, const std::vector<Value>& seq) {
  std::size_t n = seq.size();
  std::size_t first_j = n + 1, first_k = n + 2;
  for (std::size_t i = n; i-- > 0;) {
    if (seq[i] == dj) first_j = i + 1;
    if (seq[i] == dk) first_k = i + 1;
  }
  return first_j < first_k;
}

}  // namespace detail

/// Whether the values of the scope (in scope order) satisfy the constraint.
inline bool satisfies(const Constraint& c, const std::vector<Value>& tuple) {
  if (auto t = std::get_if<TableConstraint>(&c))
    return std::find(t->allowed.begin(), t->allowed.end(), tuple) != t->allowed.end();
  if (std::holds_alternative<AllDifferent>(c)) {
    std::vector<Value> s = tuple;
    std::sort(s.begin(), s.end());
    return std::adjacent_find(s.begin(), s.end()) == s.end();
  }
  if (auto p = std::get_if<PrecedencePair>(&c)) return detail::precedes(p->dj, p->dk, tuple);
  const auto& g = std::get<PrecedenceGlobal>(c);
  for (std::size_t j = 0; j < g.values.size(); ++j)
    for (std::size_t k = j + 1; k < g.values.size(); ++k)
      if (!detail::precedes(g.values[j], g.values[k], tuple)) return false;
  return true;
}

inline bool satisfies(const CspSpec& spec, const CspAssignment& a) {
  for (const Constraint& c : spec.constraints) {
    std::vector<Value> t;
    for (std::size_t v : scope_of(c)) t.push_back(a[v]);
    if (!satisfies(c, t)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Reference solver

namespace detail {

class CspSolver {
public:
  CspSolver(const CspSpec& spec, std::size_t limit) : spec_(spec), limit_(limit) {
    std::size_t n = spec.vars.size();
    // static order: repeatedly take the variable that completes the most
    // constraints, then the one sharing most constraints with placed ones
    std::vector<char> placed(n, 0);
    std::vector<std::size_t> missing;
    for (const Constraint& c : spec.constraints) missing.push_back(scope_of(c).size());
    pos_.assign(n, 0);
    for (std::size_t step = 0; step < n; ++step) {
      std::size_t best = n;
      std::pair<std::size_t, std::size_t> best_score{0, 0};
      for (std::size_t v = 0; v < n; ++v) {
        if (placed[v]) continue;
        std::pair<std::size_t, std::size_t> score{0, 0};
        for (std::size_t ci = 0; ci < spec.constraints.size(); ++ci) {
          const Scope& s = scope_of(spec.constraints[ci]);
          if (std::find(s.begin(), s.end(), v) == s.end()) continue;
          if (missing[ci] == 1) ++score.first;
          if (missing[ci] < s.size()) ++score.second;
        }
        if (best == n || score > best_score) {
          best = v;
          best_score = score;
        }
      }
      placed[best] = 1;
      pos_[best] = step;
      order_.push_back(best);
      for (std::size_t ci = 0; ci < spec.constraints.size(); ++ci) {
        const Scope& s = scope_of(spec.constraints[ci]);
        if (std::find(s.begin(), s.end(), best) != s.end()) --missing[ci];
      }
    }
    // constraints to check once the variable at each step is assigned
    check_at_.resize(n);
    for (std::size_t ci = 0; ci < spec.constraints.size(); ++ci) {
      const Constraint& c = spec.constraints[ci];
      const Scope& s = scope_of(c);
      if (s.empty()) continue;
      if (std::holds_alternative<AllDifferent>(c)) {
        for (std::size_t v : s) check_at_[pos_[v]].push_back(ci);
      } else {
        std::size_t last = 0;
        for (std::size_t v : s) last = std::max(last, pos_[v]);
        check_at_[last].push_back(ci);
      }
    }
    for (std::size_t ci = 0; ci < spec.constraints.size(); ++ci)
      if (auto t = std::get_if<TableConstraint>(&spec.constraints[ci])) {
        std::unordered_set<std::uint64_t> keys;
        for (const auto& tup : t->allowed) keys.insert(key(tup));
        tables_.emplace(ci, std::move(keys));
      }
    assigned_.assign(n, 0);
  }

  std::vector<CspAssignment> run() {
    for (const Constraint& c : spec_.constraints)
      if (scope_of(c).empty() && !satisfies(c, {})) return {};
    if (spec_.vars.empty()) return {{}};
    rec(0);
    std::sort(out_.begin(), out_.end());
    return out_;
  }

private:
  static std::uint64_t key(const std::vector<Value>& t) {
    std::uint64_t h = 0;
    for (Value x : t) h = h * 1000003ULL + x;
    return h;
  }

  bool ok(std::size_t ci) const {
    const Constraint& c = spec_.constraints[ci];
    const Scope& s = scope_of(c);
    if (std::holds_alternative<AllDifferent>(c)) {
      std::vector<Value> vals;
      for (std::size_t v : s)
        if (assigned_[v]) vals.push_back(a_[v]);
      std::sort(vals.begin(), vals.end());
      return std::adjacent_find(vals.begin(), vals.end()) == vals.end();
    }
    std::vector<Value> t;
    for (std::size_t v : s) t.push_back(a_[v]);
    auto it = tables_.find(ci);
    if (it != tables_.end())
      return it->second.contains(key(t)) && satisfies(c, t);
    return satisfies(c, t);
  }

  void rec(std::size_t step) {
    if (limit_ && out_.size() >= limit_) return;
    if (step == order_.size()) {
      out_.push_back(a_);
      return;
    }
    std::size_t v = order_[step];
    assigned_[v] = 1;
    for (Value x = 1; x <= spec_.vars[v].domain; ++x) {
      a_[v] = x;
      bool good = true;
      for (std::size_t ci : check_at_[step])
        if (!ok(ci)) {
          good = false;
          break;
        }
      if (good) rec(step + 1);
    }
    assigned_[v] = 0;
  }

  const CspSpec& spec_;
  std::size_t limit_;
  std::vector<std::size_t> order_, pos_;
  std::vector<std::vector<std::size_t>> check_at_;
  std::map<std::size_t, std::unordered_set<std::uint64_t>> tables_;
  std::vector<char> assigned_;
  CspAssignment a_ = CspAssignment(spec_.vars.size(), 0);
  std::vector<CspAssignment> out_;
};

}  // namespace detail

/// All solutions in lexicographic order (at most `limit` when non-zero).
inline std::vector<CspAssignment> solve_csp(const CspSpec& spec, std::size_t limit = 0) {
  spec.validate();
  return detail::CspSolver(spec, limit).run();
}

// ---------------------------------------------------------------------------
// Consistency oracles

enum class Consistency {
  /// Arc consistency on the binary decomposition: all-different becomes
  /// pairwise disequality; other constraints are binary or treated as GAC.
  ArcBinary,
  /// Generalised arc (domain) consistency on each constraint.
  Generalised,
};

struct OracleResult {
  Domains domains;
  /// Some domain became empty.
  bool failed = false;
};

namespace detail {

inline constexpr std::size_t kOracleTupleLimit = 2000000;

// Removes unsupported values of the scope; true if anything changed.
inline bool gac_pass(const Constraint& c, Domains& dom) {
  const Scope& s = scope_of(c);
  std::size_t space = 1;
  for (std::size_t v : s) {
    space *= std::max<std::size_t>(1, std::count(dom[v].begin(), dom[v].end(), 1));
    if (space > kOracleTupleLimit)
      throw Error(ErrorKind::TooLarge, "consistency oracle: search space too large");
  }
  std::vector<std::vector<char>> supported;
  for (std::size_t v : s) supported.emplace_back(dom[v].size(), 0);
  std::vector<Value> t(s.size());
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == s.size()) {
      if (satisfies(c, t))
        for (std::size_t k = 0; k < s.size(); ++k) supported[k][t[k] - 1] = 1;
      return;
    }
    for (Value x = 1; x <= dom[s[i]].size(); ++x) {
      if (!dom[s[i]][x - 1]) continue;
      t[i] = x;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  bool changed = false;
  for (std::size_t k = 0; k < s.size(); ++k)
    for (std::size_t x = 0; x < dom[s[k]].size(); ++x)
      if (dom[s[k]][x] && !supported[k][x]) {
        dom[s[k]][x] = 0;
        changed = true;
      }
  return changed;
}

inline bool disequality_pass(const Scope& s, Domains& dom) {
  bool changed = false;
  for (std::size_t v : s)
    for (std::size_t w : s) {
      if (v == w) continue;
      if (std::count(dom[w].begin(), dom[w].end(), 1) != 1) continue;
      std::size_t only = std::find(dom[w].begin(), dom[w].end(), 1) - dom[w].begin();
      if (only < dom[v].size() && dom[v][only]) {
        dom[v][only] = 0;
        changed = true;
      }
    }
  return changed;
}

}  // namespace detail

/// Fixpoint of the chosen consistency over all constraints of `spec`,
/// starting from `dom`.
/// Desk scale only: scopes of at most 7 variables with domains of at most 6
/// values, else TooLarge.
inline OracleResult consistency_oracle(const CspSpec& spec, Domains dom, Consistency level) {
  for (const Constraint& c : spec.constraints) {
    if (scope_of(c).size() > 7)
      throw Error(ErrorKind::TooLarge, "consistency oracle: scope of more than 7 variables");
    for (std::size_t v : scope_of(c))
      if (spec.vars[v].domain > 6)
        throw Error(ErrorKind::TooLarge, "consistency oracle: domain of more than 6 values");
  }
  OracleResult r;
  auto empty = [&] {
    return std::any_of(dom.begin(), dom.end(), [](const std::vector<char>& d) {
      return std::none_of(d.begin(), d.end(), [](char x) { return x; });
    });
  };
  bool changed = true;
  while (changed && !empty()) {
    changed = false;
    for (const Constraint& c : spec.constraints) {
      if (level == Consistency::ArcBinary && std::holds_alternative<AllDifferent>(c))
        changed |= detail::disequality_pass(scope_of(c), dom);
      else
        changed |= detail::gac_pass(c, dom);
      if (empty()) break;
    }
  }
  r.failed = empty();
  r.domains = std::move(dom);
  return r;
}

// ---------------------------------------------------------------------------
// Text format

namespace detail {

class CspParser {
public:
  explicit CspParser(std::string text) : s_(std::move(text)) {}

  CspSpec parse() {
    CspSpec spec;
    while (true) {
      skip();
      if (i_ >= s_.size()) break;
      std::string kw = word();
      if (kw == "var") {
        std::vector<std::string> names;
        while (true) {
          skip();
          if (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) break;
          names.push_back(word());
          if (names.back().empty()) fail("expected variable name");
        }
        Value lo = number();
        expect("..");
        Value hi = number();
        if (lo != 1) fail("domains must start at 1");
        if (hi < lo) fail("empty domain");
        for (auto& n : names) {
          if (spec.find(n)) fail("variable '" + n + "' declared twice");
          spec.add_var(n, hi);
        }
      } else if (kw == "alldiff") {
        AllDifferent c;
        while (skip(), i_ < s_.size() && s_[i_] != '.') c.scope.push_back(var(spec));
        spec.constraints.push_back(c);
      } else if (kw == "table") {
        TableConstraint c;
        c.scope = var_tuple(spec);
        expect("{");
        skip();
        if (!peek('}')) {
          do {
            c.allowed.push_back(value_tuple());
          } while (accept(','));
        }
        expect("}");
        spec.constraints.push_back(c);
      } else if (kw == "precedence") {
        expect("[");
        std::vector<Value> vals;
        Value first = number();
        if (accept("..")) {
          Value last = number();
          if (last < first) fail("empty value range");
          for (Value x = first; x <= last; ++x) vals.push_back(x);
        } else {
          vals.push_back(first);
          while (accept(',')) vals.push_back(number());
        }
        expect("]");
        Scope scope = var_tuple(spec);
        if (vals.size() == 2 && !range_) {
          spec.constraints.push_back(PrecedencePair{vals[0], vals[1], scope});
        } else {
          spec.constraints.push_back(PrecedenceGlobal{vals, scope});
        }
        range_ = false;
      } else {
        fail("unknown statement '" + kw + "'");
      }
      expect(".");
    }
    try {
      spec.validate();
    } catch (const Error& e) {
      fail(e.what());
    }
    return spec;
  }

private:
  [[noreturn]] void fail(const std::string& why) const {
    std::size_t line = 1 + std::count(s_.begin(), s_.begin() + std::min(i_, s_.size()), '\n');
    throw ParseError(line, why);
  }

  void skip() {
    while (i_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
        ++i_;
      } else if (s_[i_] == '%') {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
      } else {
        break;
      }
    }
  }

  bool peek(char c) {
    skip();
    return i_ < s_.size() && s_[i_] == c;
  }

  bool accept(char c) {
    if (!peek(c)) return false;
    ++i_;
    return true;
  }

  bool accept(const std::string& tok) {
    skip();
    if (s_.compare(i_, tok.size(), tok) != 0) return false;
    i_ += tok.size();
    if (tok == "..") range_ = true;
    return true;
  }

  void expect(const std::string& tok) {
    if (!accept(tok)) fail("expected '" + tok + "'");
  }

  std::string word() {
    skip();
    std::size_t st = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
      ++i_;
    return s_.substr(st, i_ - st);
  }

  Value number() {
    skip();
    std::size_t st = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (st == i_) fail("expected a number");
    return static_cast<Value>(std::stoul(s_.substr(st, i_ - st)));
  }

  std::size_t var(const CspSpec& spec) {
    std::string n = word();
    if (n.empty()) fail("expected variable name");
    auto v = spec.find(n);
    if (!v) fail("unknown variable '" + n + "'");
    return *v;
  }

  Scope var_tuple(const CspSpec& spec) {
    expect("(");
    Scope s;
    if (!peek(')')) {
      do {
        s.push_back(var(spec));
      } while (accept(','));
    }
    expect(")");
    return s;
  }

  std::vector<Value> value_tuple() {
    expect("(");
    std::vector<Value> t;
    do {
      t.push_back(number());
    } while (accept(','));
    expect(")");
    return t;
  }

  std::string s_;
  std::size_t i_ = 0;
  bool range_ = false;
};

}  // namespace detail

/// Statements end in '.', '%' starts a comment:
///   var v1 v2 1..4.   alldiff v1 v2.   table (v1,v2) {(1,2),(2,1)}.
///   precedence [1..3] (v1,v2,v3).   precedence [2,1] (v1,v2).
/// A range gives the global constraint; a list of exactly two values gives
/// the pair constraint.
inline CspSpec read_csp(const std::string& text) { return detail::CspParser(text).parse(); }

inline CspSpec read_csp(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return read_csp(ss.str());
}

inline void write_csp(const CspSpec& spec, std::ostream& os) {
  auto scope = [&](const Scope& s) {
    std::string out = "(";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + spec.vars[s[i]].name;
    return out + ")";
  };
  for (const auto& v : spec.vars) os << "var " << v.name << " 1.." << v.domain << ".\n";
  for (const Constraint& c : spec.constraints) {
    if (auto t = std::get_if<TableConstraint>(&c)) {
      os << "table " << scope(t->scope) << " {";
      for (std::size_t i = 0; i < t->allowed.size(); ++i) {
        os << (i ? "," : "") << "(";
        for (std::size_t k = 0; k < t->allowed[i].size(); ++k) os << (k ? "," : "") << t->allowed[i][k];
        os << ")";
      }
      os << "}.\n";
    } else if (auto a = std::get_if<AllDifferent>(&c)) {
      os << "alldiff";
      for (std::size_t v : a->scope) os << ' ' << spec.vars[v].name;
      os << ".\n";
    } else if (auto p = std::get_if<PrecedencePair>(&c)) {
      os << "precedence [" << p->dj << "," << p->dk << "] " << scope(p->scope) << ".\n";
    } else {
      const auto& g = std::get<PrecedenceGlobal>(c);
      bool contiguous = !g.values.empty() && g.values.back() - g.values.front() + 1 == g.values.size();
      os << "precedence [";
      if (contiguous) {
        os << g.values.front() << ".." << g.values.back();
      } else {
        for (std::size_t i = 0; i < g.values.size(); ++i) os << (i ? "," : "") << g.values[i];
      }
      os << "] " << scope(g.scope) << ".\n";
    }
  }
}

inline std::string to_csp_text(const CspSpec& spec) {
  std::ostringstream os;
  write_csp(spec, os);
  return os.str();
}

}  // namespace symbreak

#endif
