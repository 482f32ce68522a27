#ifndef SYMBREAK_BENCH_HPP
#define SYMBREAK_BENCH_HPP

// Deterministic generators for the benchmark families.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "symbreak/csp.hpp"
#include "symbreak/error.hpp"
#include "symbreak/permutation.hpp"
#include "symbreak/program.hpp"

namespace symbreak {

namespace detail {

inline std::string atom_name(const std::string& pred, std::size_t a, std::size_t b) {
  return pred + "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

inline void require_param(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, what);
}

// Calls f on every k-subset of 1..n, in lexicographic order.
template <class F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return;
  std::vector<std::size_t> s(k);
  std::iota(s.begin(), s.end(), 1);
  while (true) {
    f(s);
    std::size_t i = k;
    while (i > 0 && s[i - 1] == n - k + i) --i;
    if (i == 0) return;
    ++s[i - 1];
    for (std::size_t j = i; j < k; ++j) s[j] = s[j - 1] + 1;
  }
}

// Exactly-one rules over `atoms`: choice, at least one, at most two.
inline void exactly_one(Program& p, const std::vector<AtomId>& atoms) {
  p.add(Rule::choice(atoms));
  p.add(Rule::integrity({}, atoms));
  if (atoms.size() >= 2) p.add(Rule::cardinality(std::nullopt, 2, atoms, {}));
}

}  // namespace detail

enum class PigeonVariant { Disjunctive, Support };

/// n pigeons into `holes` holes (n - 1 when omitted); atoms p(i,j).
inline Program gen_pigeons(std::size_t n, PigeonVariant variant = PigeonVariant::Disjunctive, std::optional<std::size_t> holes = {}) {
  detail::require_param(n >= 1, "pigeons: n must be at least 1");
  std::size_t h = holes.value_or(n - 1);
  Program p;
  std::vector<std::vector<AtomId>> at(n + 1, std::vector<AtomId>(h + 1, 0));
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= h; ++j) at[i][j] = p.add_atom(detail::atom_name("p", i, j));
  for (std::size_t i = 1; i <= n; ++i) {
    std::vector<AtomId> row(at[i].begin() + 1, at[i].end());
    if (variant == PigeonVariant::Disjunctive)
      p.add(row.empty() ? Rule::integrity({}) : Rule::normal(row));
    else
      detail::exactly_one(p, row);
  }
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t k = i + 1; k <= n; ++k)
      for (std::size_t j = 1; j <= h; ++j) p.add(Rule::integrity({at[i][j], at[k][j]}));
  return p;
}

/// All-interval series of length n: v(i,j) for position i taking value j,
/// d(k,l) for difference l between positions k and k+1.
inline Program gen_allint(std::size_t n) {
  detail::require_param(n >= 3, "allint: n must be at least 3");
  Program p;
  std::vector<std::vector<AtomId>> v(n + 1, std::vector<AtomId>(n, 0));
  std::vector<std::vector<AtomId>> d(n, std::vector<AtomId>(n, 0));
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 0; j < n; ++j) v[i][j] = p.add_atom(detail::atom_name("v", i, j));
  for (std::size_t k = 1; k < n; ++k)
    for (std::size_t l = 1; l < n; ++l) d[k][l] = p.add_atom(detail::atom_name("d", k, l));
  for (std::size_t i = 1; i <= n; ++i) p.add(Rule::normal(std::vector<AtomId>(v[i].begin(), v[i].end())));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t k = i + 1; k <= n; ++k) p.add(Rule::integrity({v[i][j], v[k][j]}));
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (j != k) {
          std::size_t diff = j > k ? j - k : k - j;
          p.add(Rule::normal({d[i][diff]}, {v[i][j], v[i + 1][k]}));
        }
  for (std::size_t l = 1; l < n; ++l)
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t k = i + 1; k < n; ++k) p.add(Rule::integrity({d[i][l], d[k][l]}));
  return p;
}

/// Edge 2-colourings of K_n with no red k-clique and no blue m-clique.
inline Program gen_ramsey(std::size_t k, std::size_t m, std::size_t n) {
  detail::require_param(k >= 2 && m >= 2 && n >= 2, "ramsey: k, m and n must be at least 2");
  Program p;
  std::vector<std::vector<AtomId>> blue(n + 1, std::vector<AtomId>(n + 1, 0)), red = blue;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j) {
      blue[i][j] = p.add_atom(detail::atom_name("blue", i, j));
      red[i][j] = p.add_atom(detail::atom_name("red", i, j));
    }
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j) p.add(Rule::normal({blue[i][j], red[i][j]}));
  auto clique = [&](std::size_t size, const std::vector<std::vector<AtomId>>& colour) {
    detail::for_each_subset(n, size, [&](const std::vector<std::size_t>& s) {
      std::vector<AtomId> body;
      for (std::size_t b = 1; b < s.size(); ++b)
        for (std::size_t a = 0; a < b; ++a) body.push_back(colour[s[a]][s[b]]);
      p.add(Rule::integrity(body));
    });
  };
  clique(k, red);
  clique(m, blue);
  return p;
}

/// 1..n split into k sum-free classes; inpart(x,c) for x in class c.
inline Program gen_schur(std::size_t n, std::size_t k) {
  detail::require_param(n >= 1 && k >= 1, "schur: n and k must be at least 1");
  Program p;
  std::vector<std::vector<AtomId>> in(n + 1, std::vector<AtomId>(k + 1, 0));
  for (std::size_t x = 1; x <= n; ++x)
    for (std::size_t c = 1; c <= k; ++c) in[x][c] = p.add_atom(detail::atom_name("inpart", x, c));
  for (std::size_t x = 1; x <= n; ++x) detail::exactly_one(p, std::vector<AtomId>(in[x].begin() + 1, in[x].end()));
  for (std::size_t x = 1; x <= n; ++x)
    for (std::size_t y = x; x + y <= n; ++y)
      for (std::size_t c = 1; c <= k; ++c) {
        std::vector<AtomId> body{in[x][c]};
        if (y != x) body.push_back(in[y][c]);
        body.push_back(in[x + y][c]);
        p.add(Rule::integrity(body));
      }
  return p;
}

/// Simple undirected graph on vertices 1..n.
struct Graph {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

/// G(n, density): each pair i < j is an edge with the given probability.
inline Graph random_graph(std::size_t n, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution edge(density);
  Graph g{n, {}};
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j)
      if (edge(rng)) g.edges.emplace_back(i, j);
  return g;
}

/// k-colourings of g; colour(v,c).
inline Program gen_colouring(const Graph& g, std::size_t k) {
  detail::require_param(k >= 1, "colouring: k must be at least 1");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (auto [a, b] : g.edges) {
    detail::require_param(a >= 1 && b >= 1 && a <= g.n && b <= g.n && a != b,
                          "colouring: edges must join distinct vertices 1..n");
    detail::require_param(seen.insert(std::minmax(a, b)).second, "colouring: repeated edge");
  }
  Program p;
  std::vector<std::vector<AtomId>> col(g.n + 1, std::vector<AtomId>(k + 1, 0));
  for (std::size_t v = 1; v <= g.n; ++v)
    for (std::size_t c = 1; c <= k; ++c) col[v][c] = p.add_atom(detail::atom_name("colour", v, c));
  for (std::size_t v = 1; v <= g.n; ++v) detail::exactly_one(p, std::vector<AtomId>(col[v].begin() + 1, col[v].end()));
  for (auto [a, b] : g.edges)
    for (std::size_t c = 1; c <= k; ++c) p.add(Rule::integrity({col[a][c], col[b][c]}));
  return p;
}

/// Double wheel DW_n: hub 1, two n-cycles, every cycle vertex joined to the hub.
inline Graph double_wheel(std::size_t n) {
  detail::require_param(n >= 3, "double wheel: n must be at least 3");
  Graph g{2 * n + 1, {}};
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t a = 2 + c * n + i, b = 2 + c * n + (i + 1) % n;
      g.edges.emplace_back(std::min(a, b), std::max(a, b));
    }
  for (std::size_t v = 2; v <= 2 * n + 1; ++v) g.edges.emplace_back(1, v);
  return g;
}

/// K_n x P_m: m copies of K_n with copy-to-copy rungs between neighbours.
inline Graph clique_path(std::size_t n, std::size_t m) {
  detail::require_param(n >= 2 && m >= 2, "clique path: n and m must be at least 2");
  Graph g{n * m, {}};
  auto id = [&](std::size_t copy, std::size_t i) { return copy * n + i + 1; };
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) g.edges.emplace_back(id(c, i), id(c, j));
  for (std::size_t c = 0; c + 1 < m; ++c)
    for (std::size_t i = 0; i < n; ++i) g.edges.emplace_back(id(c, i), id(c + 1, i));
  return g;
}

/// Graceful labelling as a CSP: f<v> carries label value-1 in 0..|E|,
/// g<k> carries edge label 1..|E| defined by a table |f(a) - f(b)|; both
/// families all-different.
inline CspSpec gen_graceful(const Graph& g) {
  CspSpec s;
  Value e = static_cast<Value>(g.edges.size());
  detail::require_param(e >= 1, "graceful: graph has no edges");
  for (std::size_t v = 1; v <= g.n; ++v) s.add_var("f" + std::to_string(v), e + 1);
  for (std::size_t k = 1; k <= g.edges.size(); ++k) s.add_var("g" + std::to_string(k), e);
  TableConstraint proto;
  for (Value a = 1; a <= e + 1; ++a)
    for (Value b = 1; b <= e + 1; ++b)
      if (a != b) proto.allowed.push_back({a, b, a > b ? a - b : b - a});
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    TableConstraint t = proto;
    t.scope = {g.edges[k].first - 1, g.edges[k].second - 1, g.n + k};
    s.constraints.push_back(std::move(t));
  }
  AllDifferent fv, ge;
  for (std::size_t v = 0; v < g.n; ++v) fv.scope.push_back(v);
  for (std::size_t k = 0; k < g.edges.size(); ++k) ge.scope.push_back(g.n + k);
  s.constraints.push_back(fv);
  s.constraints.push_back(ge);
  return s;
}

/// The same program with atoms renumbered by a seeded random bijection.
inline Program shuffle_atoms(const Program& p, std::uint64_t seed) {
  std::vector<AtomId> img(p.atom_count + 1);
  std::iota(img.begin(), img.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(img.begin() + 1, img.end(), rng);
  Permutation pi = Permutation::from_images(img);
  Program out = p;
  out.rules.clear();
  for (const Rule& r : p.rules) out.rules.push_back(pi.apply(r));
  out.symbols.clear();
  for (const auto& [a, name] : p.symbols) out.symbols.emplace(pi(a), name);
  for (AtomId& a : out.compute_true) a = pi(a);
  for (AtomId& a : out.compute_false) a = pi(a);
  if (out.falsity) out.falsity = pi(*out.falsity);
  return out;
}

}  // namespace symbreak

#endif
