#ifndef SYMBREAK_COLOURED_GRAPH_HPP
#define SYMBREAK_COLOURED_GRAPH_HPP

// Reduction of program symmetry to coloured directed graph automorphism.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "symbreak/error.hpp"
#include "symbreak/program.hpp"

namespace symbreak {

using Vertex = std::uint32_t;
using ColourId = std::uint32_t;

enum class ColourKind { PosLit, NegLit, RuleBody, FactAtom, ChoiceBody, Bottom, CardBody };

/// Injective descriptor -> id map. Cardinality bodies get one colour per
/// bound, above all fixed colours.
inline ColourId colour_id(ColourKind kind, std::uint32_t bound = 0) {
  switch (kind) {
    case ColourKind::PosLit: return 1;
    case ColourKind::NegLit: return 2;
    case ColourKind::RuleBody: return 3;
    case ColourKind::FactAtom: return 4;
    case ColourKind::ChoiceBody: return 5;
    case ColourKind::Bottom: return 6;
    case ColourKind::CardBody: return 7 + bound;
  }
  return 0;
}

class ColouredGraph {
public:
  Vertex add_vertex(ColourId c) {
    colour_.push_back(c);
    out_.emplace_back();
    in_.emplace_back();
    return static_cast<Vertex>(colour_.size() - 1);
  }

  /// False if the edge already exists (the edge is then not added).
  bool add_edge(Vertex u, Vertex v) {
    if (u == v) throw Error(ErrorKind::InvalidArgument, "self-loops are not supported");
    auto& o = out_[u];
    if (std::find(o.begin(), o.end(), v) != o.end()) return false;
    o.push_back(v);
    in_[v].push_back(u);
    ++edges_;
    return true;
  }

  void set_colour(Vertex v, ColourId c) { colour_[v] = c; }

  std::size_t vertex_count() const { return colour_.size(); }
  std::size_t edge_count() const { return edges_; }
  ColourId colour(Vertex v) const { return colour_[v]; }
  const std::vector<ColourId>& colours() const { return colour_; }
  const std::vector<Vertex>& out(Vertex v) const { return out_[v]; }
  const std::vector<Vertex>& in(Vertex v) const { return in_[v]; }

  bool has_edge(Vertex u, Vertex v) const {
    const auto& o = out_[u];
    return std::find(o.begin(), o.end(), v) != o.end();
  }

  std::vector<std::pair<Vertex, Vertex>> edges() const {
    std::vector<std::pair<Vertex, Vertex>> e;
    e.reserve(edges_);
    for (Vertex u = 0; u < out_.size(); ++u)
      for (Vertex v : out_[u]) e.emplace_back(u, v);
    std::sort(e.begin(), e.end());
    return e;
  }

  /// Literal vertices of each encoded atom: (positive, negative).
  std::map<AtomId, std::pair<Vertex, Vertex>> atom_map;

  /// Atom whose literal vertex this is, if any, and its sign.
  std::optional<std::pair<AtomId, bool>> literal_of(Vertex v) const {
    if (v < vertex_atom_.size() && vertex_atom_[v].first)
      return vertex_atom_[v];
    return std::nullopt;
  }

  void mark_literal(Vertex v, AtomId a, bool positive) {
    if (vertex_atom_.size() <= v) vertex_atom_.resize(v + 1, {0, false});
    vertex_atom_[v] = {a, positive};
  }

  /// `p cgraph V E`, then `n v colour` per vertex and `e u v` per edge,
  /// vertices numbered from 1.
  void dump(std::ostream& os) const {
    os << "p cgraph " << vertex_count() << ' ' << edge_count() << '\n';
    for (Vertex v = 0; v < vertex_count(); ++v) os << "n " << v + 1 << ' ' << colour_[v] << '\n';
    for (auto [u, v] : edges()) os << "e " << u + 1 << ' ' << v + 1 << '\n';
  }

private:
  std::vector<ColourId> colour_;
  std::vector<std::vector<Vertex>> out_, in_;
  std::vector<std::pair<AtomId, bool>> vertex_atom_;
  std::size_t edges_ = 0;
};

struct EncodeOptions {
  /// Facts recolour their head instead of getting a body vertex.
  bool facts = true;
  /// Single-head rules with one body literal become a literal -> head edge.
  bool single_literal = true;
  /// Integrity constraints with one body literal become an edge to a shared
  /// bottom vertex.
  bool bottom = true;

  static EncodeOptions none() { return {false, false, false}; }
};

/// Encodes `p` (expected to be normalised). Compute statements are encoded
/// as the integrity constraints `:- not a` (B+) and `:- a` (B-).
inline ColouredGraph encode_graph(const Program& p, EncodeOptions opts = {}) {
  ColouredGraph g;
  std::vector<Rule> rules = p.rules;
  for (AtomId a : p.compute_true) rules.push_back(Rule::integrity({}, {a}));
  for (AtomId a : p.compute_false) rules.push_back(Rule::integrity({a}));

  for (AtomId a : p.atoms()) {
    Vertex pv = g.add_vertex(colour_id(ColourKind::PosLit));
    Vertex nv = g.add_vertex(colour_id(ColourKind::NegLit));
    g.mark_literal(pv, a, true);
    g.mark_literal(nv, a, false);
    g.atom_map.emplace(a, std::make_pair(pv, nv));
    g.add_edge(pv, nv);
  }
  auto lit = [&](AtomId a, bool negated) {
    auto [pv, nv] = g.atom_map.at(a);
    return negated ? nv : pv;
  };

  std::map<std::pair<Vertex, Vertex>, std::string> origin;
  auto describe = [&](std::size_t i) {
    return i < p.rules.size() ? "rule " + std::to_string(i + 1)
                              : "compute statement " + std::to_string(i + 1 - p.rules.size());
  };
  auto edge = [&](Vertex u, Vertex v, std::size_t rule) {
    if (!g.add_edge(u, v)) {
      auto it = origin.find({u, v});
      std::string first = it == origin.end() ? "an atom's literal pair" : it->second;
      throw Error(ErrorKind::DuplicateEdge, "duplicate edge between " + first + " and " +
                                                describe(rule) + "; normalize the program first");
    }
    origin.emplace(std::make_pair(u, v), describe(rule));
  };

  std::optional<Vertex> bottom;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const Rule& r = rules[i];
    std::vector<Literal> body = r.body();
    if (r.kind == RuleKind::Disjunctive) {
      if (opts.facts && r.is_fact()) {
        g.set_colour(lit(r.head.front(), false), colour_id(ColourKind::FactAtom));
        continue;
      }
      if (opts.single_literal && r.head.size() == 1 && body.size() == 1) {
        Vertex from = lit(body[0].atom, body[0].negated);
        Vertex to = lit(r.head.front(), false);
        if (from != to) {
          edge(from, to, i);
          continue;
        }
      }
      if (opts.bottom && r.head.empty() && body.size() == 1) {
        if (!bottom) bottom = g.add_vertex(colour_id(ColourKind::Bottom));
        edge(lit(body[0].atom, body[0].negated), *bottom, i);
        continue;
      }
    }
    ColourId c = r.kind == RuleKind::Choice        ? colour_id(ColourKind::ChoiceBody)
                 : r.kind == RuleKind::Cardinality ? colour_id(ColourKind::CardBody, r.bound)
                                                   : colour_id(ColourKind::RuleBody);
    Vertex b = g.add_vertex(c);
    for (const Literal& l : body) edge(lit(l.atom, l.negated), b, i);
    for (AtomId h : r.head) edge(b, lit(h, false), i);
  }
  return g;
}

}  // namespace symbreak

#endif
