#ifndef SYMBREAK_AUTOMORPHISM_HPP
#define SYMBREAK_AUTOMORPHISM_HPP

// Generators of the automorphism group of a coloured digraph by
// individualisation-refinement, a brute-force oracle, and projection of
// graph automorphisms back onto program atoms.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <tuple>
#include <vector>

#include "symbreak/coloured_graph.hpp"
#include "symbreak/error.hpp"
#include "symbreak/perm_group.hpp"
#include "symbreak/permutation.hpp"

namespace symbreak {

/// images[v] is the image of vertex v (0-based).
using VertexPermutation = std::vector<Vertex>;

struct AutomorphismOptions {
  /// Search-tree nodes (refinements) before giving up; 0 means unlimited.
  std::size_t node_budget = 0;
};

struct AutomorphismStats {
  std::size_t nodes = 0;
  std::size_t leaves = 0;
  std::size_t first_path_depth = 0;
};

namespace detail {

/// Ordered partition: `elems` lists the vertices cell by cell, `start[v]` is
/// the first position of v's cell and `end[s]` closes the cell starting at s.
struct VertexPartition {
  std::vector<Vertex> elems;
  std::vector<std::uint32_t> pos, start, end;
  std::size_t cells = 0;

  bool discrete() const { return cells == elems.size(); }

  /// First smallest non-singleton cell, as its start position.
  std::optional<std::uint32_t> target() const {
    std::optional<std::uint32_t> best;
    std::uint32_t best_size = 0;
    for (std::uint32_t s = 0; s < elems.size(); s = end[s]) {
      std::uint32_t size = end[s] - s;
      if (size > 1 && (!best || size < best_size)) {
        best = s;
        best_size = size;
      }
    }
    return best;
  }

  std::vector<std::vector<Vertex>> cell_list() const {
    std::vector<std::vector<Vertex>> out;
    for (std::uint32_t s = 0; s < elems.size(); s = end[s])
      out.emplace_back(elems.begin() + s, elems.begin() + end[s]);
    return out;
  }
};

inline std::uint64_t mix(std::uint64_t h, std::uint64_t x) {
  h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h * 0xff51afd7ed558ccdULL;
}

class Refiner {
public:
  explicit Refiner(const ColouredGraph& g)
      : g_(g), n_(g.vertex_count()), cnt_out_(n_, 0), cnt_in_(n_, 0), queued_(n_, 0) {}

  VertexPartition initial(std::uint64_t& trace) {
    VertexPartition p;
    p.elems.resize(n_);
    std::iota(p.elems.begin(), p.elems.end(), 0);
    std::stable_sort(p.elems.begin(), p.elems.end(),
                     [&](Vertex a, Vertex b) { return g_.colour(a) < g_.colour(b); });
    p.pos.resize(n_);
    p.start.resize(n_);
    p.end.assign(n_ + 1, 0);
    std::vector<std::uint32_t> starts;
    for (std::uint32_t i = 0; i < n_; ++i) {
      p.pos[p.elems[i]] = i;
      bool fresh = i == 0 || g_.colour(p.elems[i]) != g_.colour(p.elems[i - 1]);
      if (fresh) starts.push_back(i);
      p.start[p.elems[i]] = starts.back();
    }
    for (std::size_t k = 0; k < starts.size(); ++k)
      p.end[starts[k]] = k + 1 < starts.size() ? starts[k + 1] : static_cast<std::uint32_t>(n_);
    p.cells = starts.size();
    trace = 0;
    for (std::uint32_t s : starts) trace = mix(trace, g_.colour(p.elems[s]));
    refine(p, starts, trace);
    return p;
  }

  /// Splits v off its cell as a singleton placed first, then refines.
  VertexPartition individualise(const VertexPartition& parent, Vertex v, std::uint64_t& trace) {
    VertexPartition p = parent;
    std::uint32_t s = p.start[v], e = p.end[s];
    std::uint32_t at = p.pos[v];
    std::swap(p.elems[at], p.elems[s]);
    p.pos[p.elems[at]] = at;
    p.pos[v] = s;
    p.end[s] = s + 1;
    p.end[s + 1] = e;
    for (std::uint32_t i = s + 1; i < e; ++i) p.start[p.elems[i]] = s + 1;
    ++p.cells;
    trace = mix(0, s);
    refine(p, {s}, trace);
    return p;
  }

private:
  void refine(VertexPartition& p, std::vector<std::uint32_t> queue, std::uint64_t& trace) {
    for (std::uint32_t s : queue) queued_[s] = 1;
    std::vector<Vertex> touched, members;
    std::vector<std::uint32_t> affected;
    std::size_t head = 0;
    while (head < queue.size()) {
      std::uint32_t w = queue[head++];
      queued_[w] = 0;
      members.assign(p.elems.begin() + w, p.elems.begin() + p.end[w]);
      trace = mix(trace, (std::uint64_t{w} << 32) | members.size());
      for (Vertex x : members) {
        for (Vertex u : g_.in(x)) {
          if (!cnt_out_[u] && !cnt_in_[u]) touched.push_back(u);
          ++cnt_out_[u];
        }
        for (Vertex u : g_.out(x)) {
          if (!cnt_out_[u] && !cnt_in_[u]) touched.push_back(u);
          ++cnt_in_[u];
        }
      }
      affected.clear();
      for (Vertex u : touched) affected.push_back(p.start[u]);
      std::sort(affected.begin(), affected.end());
      affected.erase(std::unique(affected.begin(), affected.end()), affected.end());
      for (std::uint32_t s : affected) split(p, s, queue, trace);
      for (Vertex u : touched) cnt_out_[u] = cnt_in_[u] = 0;
      touched.clear();
    }
  }

  void split(VertexPartition& p, std::uint32_t s, std::vector<std::uint32_t>& queue,
             std::uint64_t& trace) {
    std::uint32_t e = p.end[s];
    if (e - s == 1) return;
    auto key = [&](Vertex v) { return std::make_pair(cnt_out_[v], cnt_in_[v]); };
    std::sort(p.elems.begin() + s, p.elems.begin() + e, [&](Vertex a, Vertex b) {
      return std::make_tuple(key(a), a) < std::make_tuple(key(b), b);
    });
    std::vector<std::uint32_t> frags{s};
    for (std::uint32_t i = s + 1; i < e; ++i)
      if (key(p.elems[i]) != key(p.elems[i - 1])) frags.push_back(i);
    for (std::uint32_t i = s; i < e; ++i) p.pos[p.elems[i]] = i;
    if (frags.size() == 1) return;
    trace = mix(trace, (std::uint64_t{s} << 32) | frags.size());
    std::uint32_t largest = s, largest_size = 0;
    for (std::size_t k = 0; k < frags.size(); ++k) {
      std::uint32_t fs = frags[k], fe = k + 1 < frags.size() ? frags[k + 1] : e;
      auto [ko, ki] = key(p.elems[fs]);
      trace = mix(trace, (std::uint64_t{ko} << 40) ^ (std::uint64_t{ki} << 20) ^ (fe - fs));
      p.end[fs] = fe;
      for (std::uint32_t i = fs; i < fe; ++i) p.start[p.elems[i]] = fs;
      if (fe - fs > largest_size) {
        largest = fs;
        largest_size = fe - fs;
      }
    }
    p.cells += frags.size() - 1;
    bool was_queued = queued_[s];
    for (std::uint32_t fs : frags) {
      if (queued_[fs]) continue;
      if (was_queued || fs != largest) {
        queued_[fs] = 1;
        queue.push_back(fs);
      }
    }
  }

  const ColouredGraph& g_;
  std::size_t n_;
  std::vector<std::uint32_t> cnt_out_, cnt_in_;
  std::vector<char> queued_;
};

struct UnionFind {
  std::vector<Vertex> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  Vertex find(Vertex x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(Vertex a, Vertex b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace detail

/// Colour-preserving and edge-preserving in both directions.
inline bool is_automorphism(const ColouredGraph& g, const VertexPermutation& gamma) {
  if (gamma.size() != g.vertex_count()) return false;
  std::vector<char> hit(gamma.size(), 0);
  for (Vertex v = 0; v < gamma.size(); ++v) {
    if (gamma[v] >= gamma.size() || hit[gamma[v]]) return false;
    hit[gamma[v]] = 1;
    if (g.colour(gamma[v]) != g.colour(v)) return false;
  }
  // a bijection that maps edges to edges maps the finite edge set onto itself
  for (Vertex u = 0; u < g.vertex_count(); ++u)
    for (Vertex v : g.out(u))
      if (!g.has_edge(gamma[u], gamma[v])) return false;
  return true;
}

class AutomorphismSearch {
public:
  AutomorphismSearch(const ColouredGraph& g, AutomorphismOptions opts = {})
      : g_(g), opts_(opts), refiner_(g) {}

  std::vector<VertexPermutation> run() {
    gens_.clear();
    path_.clear();
    stats_ = {};
    std::size_t n = g_.vertex_count();
    if (n == 0) return {};
    std::uint64_t trace = 0;
    path_.push_back({refiner_.initial(trace), trace, 0});
    count_node();
    while (!path_.back().part.discrete()) {
      Node& cur = path_.back();
      cur.target = *cur.part.target();
      Vertex b = cur.part.elems[cur.target];
      Node child{refiner_.individualise(cur.part, b, trace), trace, 0};
      path_.push_back(std::move(child));
      count_node();
    }
    stats_.first_path_depth = path_.size() - 1;
    leaf_ = path_.back().part.elems;

    detail::UnionFind orbits(n);
    for (std::size_t level = path_.size() - 1; level-- > 0;) {
      const Node& node = path_[level];
      std::uint32_t s = node.target;
      Vertex b = node.part.elems[s];
      std::vector<Vertex> cell(node.part.elems.begin() + s,
                               node.part.elems.begin() + node.part.end[s]);
      std::vector<Vertex> failed;
      for (Vertex v : cell) {
        if (v == b || orbits.find(v) == orbits.find(b)) continue;
        bool known_bad = std::any_of(failed.begin(), failed.end(),
                                     [&](Vertex w) { return orbits.find(w) == orbits.find(v); });
        if (known_bad) continue;
        std::uint64_t t = 0;
        detail::VertexPartition child = refiner_.individualise(node.part, v, t);
        count_node();
        std::optional<VertexPermutation> gamma;
        if (matches(child, t, level + 1)) gamma = dive(child, level + 1);
        if (!gamma) {
          failed.push_back(v);
          continue;
        }
        for (Vertex x = 0; x < n; ++x) orbits.unite(x, (*gamma)[x]);
        gens_.push_back(std::move(*gamma));
      }
    }
    return gens_;
  }

  const AutomorphismStats& stats() const { return stats_; }

private:
  struct Node {
    detail::VertexPartition part;
    std::uint64_t trace;
    std::uint32_t target;
  };

  void count_node() {
    ++stats_.nodes;
    if (opts_.node_budget && stats_.nodes > opts_.node_budget)
      throw Error(ErrorKind::SearchBudgetExceeded,
                  "automorphism search exceeded " + std::to_string(opts_.node_budget) + " nodes");
  }

  bool matches(const detail::VertexPartition& p, std::uint64_t trace, std::size_t depth) const {
    return trace == path_[depth].trace && p.cells == path_[depth].part.cells;
  }

  // Depth-first search below a node equivalent to path_[depth] for a leaf
  // giving an automorphism relative to the first leaf.
  std::optional<VertexPermutation> dive(const detail::VertexPartition& p, std::size_t depth) {
    if (p.discrete()) {
      ++stats_.leaves;
      VertexPermutation gamma(leaf_.size());
      for (std::size_t i = 0; i < leaf_.size(); ++i) gamma[leaf_[i]] = p.elems[i];
      if (is_automorphism(g_, gamma)) return gamma;
      return std::nullopt;
    }
    std::uint32_t s = path_[depth].target;
    if (p.end[s] - s != path_[depth].part.end[s] - s) return std::nullopt;
    std::vector<Vertex> cell(p.elems.begin() + s, p.elems.begin() + p.end[s]);
    for (Vertex u : cell) {
      std::uint64_t t = 0;
      detail::VertexPartition child = refiner_.individualise(p, u, t);
      count_node();
      if (!matches(child, t, depth + 1)) continue;
      if (auto gamma = dive(child, depth + 1)) return gamma;
    }
    return std::nullopt;
  }

  const ColouredGraph& g_;
  AutomorphismOptions opts_;
  detail::Refiner refiner_;
  std::vector<Node> path_;
  std::vector<Vertex> leaf_;
  std::vector<VertexPermutation> gens_;
  AutomorphismStats stats_;
};

/// Generators of Aut(g), in the order the search finds them. Identity is
/// never included; the result is deterministic for a given graph.
inline std::vector<VertexPermutation> find_automorphisms(const ColouredGraph& g,
                                                         AutomorphismOptions opts = {}) {
  return AutomorphismSearch(g, opts).run();
}

/// Every automorphism of g by exhaustive backtracking with colour and
/// adjacency checks, in lexicographic order of image vectors. Throws
/// TooLarge once more than `limit` automorphisms are found.
inline std::vector<VertexPermutation> brute_force_automorphisms(const ColouredGraph& g,
                                                                std::size_t limit = 1000000) {
  std::size_t n = g.vertex_count();
  std::vector<VertexPermutation> out;
  VertexPermutation gamma(n);
  std::vector<char> used(n, 0);
  auto rec = [&](auto&& self, Vertex i) -> void {
    if (i == n) {
      if (out.size() == limit)
        throw Error(ErrorKind::TooLarge, "more than " + std::to_string(limit) + " automorphisms");
      out.push_back(gamma);
      return;
    }
    for (Vertex c = 0; c < n; ++c) {
      if (used[c] || g.colour(c) != g.colour(i)) continue;
      bool ok = true;
      for (Vertex u = 0; u < i && ok; ++u)
        ok = g.has_edge(u, i) == g.has_edge(gamma[u], c) &&
             g.has_edge(i, u) == g.has_edge(c, gamma[u]);
      if (!ok) continue;
      gamma[i] = c;
      used[c] = 1;
      self(self, i + 1);
      used[c] = 0;
    }
  };
  rec(rec, 0);
  return out;
}

/// Atom permutation induced by a graph automorphism of encode_graph(p);
/// nullopt when it fixes every atom.
inline std::optional<Permutation> project_to_atoms(const Program& p, const ColouredGraph& g,
                                                   const VertexPermutation& gamma) {
  AtomId top = g.atom_map.empty() ? 0 : g.atom_map.rbegin()->first;
  std::vector<AtomId> img(top + 1);
  std::iota(img.begin(), img.end(), 0);
  for (const auto& [a, verts] : g.atom_map) {
    auto lp = g.literal_of(gamma.at(verts.first));
    auto ln = g.literal_of(gamma.at(verts.second));
    if (!lp || !lp->second || !ln || ln->second || lp->first != ln->first)
      throw Error(ErrorKind::InconsistentProjection,
                  "literal vertices of atom " + std::to_string(a) + " are not mapped to a mated pair");
    img[a] = lp->first;
  }
  Permutation pi = Permutation::from_images(std::move(img));
  if (pi.is_identity()) return std::nullopt;
  if (!is_program_symmetry(p, pi))
    throw Error(ErrorKind::InconsistentProjection,
                "projected permutation " + to_cycle_string(pi, p) + " is not a program symmetry");
  return pi;
}

struct DetectOptions {
  EncodeOptions encode;
  AutomorphismOptions search;
  bool irredundant = false;
};

struct DetectResult {
  std::vector<Permutation> generators;
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t graph_generators = 0;
  AutomorphismStats search;
};

/// Normalises (keeping tautologies), encodes, searches and projects. Graph
/// generators that only move body vertices are dropped, as are repeats.
inline DetectResult detect_symmetries(const Program& p, DetectOptions opts = {}) {
  Program q = normalize(p);
  ColouredGraph g = encode_graph(q, opts.encode);
  AutomorphismSearch search(g, opts.search);
  auto gamma = search.run();
  DetectResult r;
  r.vertices = g.vertex_count();
  r.edges = g.edge_count();
  r.graph_generators = gamma.size();
  r.search = search.stats();
  for (const auto& x : gamma)
    if (auto pi = project_to_atoms(q, g, x))
      if (std::find(r.generators.begin(), r.generators.end(), *pi) == r.generators.end())
        r.generators.push_back(std::move(*pi));
  if (opts.irredundant) r.generators = irredundant_filter(r.generators);
  return r;
}

}  // namespace symbreak

#endif
