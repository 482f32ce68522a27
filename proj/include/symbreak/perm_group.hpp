#ifndef SYMBREAK_PERM_GROUP_HPP
#define SYMBREAK_PERM_GROUP_HPP

// Permutation groups given by generators: orbits, a stabiliser chain built
// with the deterministic Schreier-Sims algorithm, order and membership, and
// the generator utilities built on top of them.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <vector>

#include "symbreak/error.hpp"
#include "symbreak/permutation.hpp"

namespace symbreak {

using BigInt = boost::multiprecision::cpp_int;

inline std::set<AtomId> orbit(AtomId x, const std::vector<Permutation>& gens) {
  std::set<AtomId> seen{x};
  std::deque<AtomId> todo{x};
  while (!todo.empty()) {
    AtomId y = todo.front();
    todo.pop_front();
    for (const Permutation& g : gens) {
      AtomId z = g(y);
      if (seen.insert(z).second) todo.push_back(z);
    }
  }
  return seen;
}

namespace detail {

struct ChainLevel {
  AtomId base = 0;
  std::vector<Permutation> gens;
  std::vector<AtomId> orbit;                // discovery order
  std::map<AtomId, Permutation> transversal;  // base^u = point
  // done[i][j]: Schreier generator for (orbit[i], gens[j]) already sifted
  std::vector<std::vector<char>> done;

  void extend_orbit() {
    if (orbit.empty()) {
      orbit.push_back(base);
      transversal.emplace(base, Permutation{});
    }
    for (std::size_t i = 0; i < orbit.size(); ++i) {
      for (const Permutation& g : gens) {
        AtomId y = g(orbit[i]);
        if (transversal.contains(y)) continue;
        transversal.emplace(y, transversal.at(orbit[i]) * g);
        orbit.push_back(y);
      }
    }
  }
};

struct StabilizerChain {
  std::vector<ChainLevel> levels;

  // Returns the residue and the level at which sifting stopped.
  std::pair<Permutation, std::size_t> strip(Permutation g) const {
    for (std::size_t i = 0; i < levels.size(); ++i) {
      AtomId b = g(levels[i].base);
      auto it = levels[i].transversal.find(b);
      if (it == levels[i].transversal.end()) return {g, i};
      g = g * it->second.inverse();
    }
    return {g, levels.size()};
  }

  void add_level(const Permutation& g) {
    ChainLevel l;
    l.base = g.support().front();
    levels.push_back(std::move(l));
  }

  static StabilizerChain build(const std::vector<Permutation>& gens) {
    StabilizerChain c;
    std::vector<Permutation> s;
    for (const Permutation& g : gens)
      if (!g.is_identity()) s.push_back(g);
    if (s.empty()) return c;
    // base: smallest moved points until every generator moves some base point
    for (const Permutation& g : s) {
      bool fixes_base = std::all_of(c.levels.begin(), c.levels.end(),
                                    [&](const ChainLevel& l) { return g(l.base) == l.base; });
      if (fixes_base) c.add_level(g);
    }
    for (std::size_t i = 0; i < c.levels.size(); ++i) {
      for (const Permutation& g : s) {
        bool fixes_prefix = true;
        for (std::size_t j = 0; j < i; ++j)
          if (g(c.levels[j].base) != c.levels[j].base) fixes_prefix = false;
        if (fixes_prefix) c.levels[i].gens.push_back(g);
      }
      c.levels[i].extend_orbit();
    }

    std::size_t i = c.levels.size();
    while (i > 0) {
      std::size_t lvl = i - 1;
      bool restarted = false;
      ChainLevel& L = c.levels[lvl];
      L.done.resize(L.orbit.size());
      for (std::size_t oi = 0; !restarted && oi < L.orbit.size(); ++oi) {
        L.done[oi].resize(L.gens.size(), 0);
        for (std::size_t gi = 0; gi < L.gens.size(); ++gi) {
          if (L.done[oi][gi]) continue;
          L.done[oi][gi] = 1;
          AtomId beta = L.orbit[oi];
          const Permutation& s_gen = L.gens[gi];
          Permutation h =
              L.transversal.at(beta) * s_gen * L.transversal.at(s_gen(beta)).inverse();
          auto [res, j] = c.strip(std::move(h));
          if (j == c.levels.size() && res.is_identity()) continue;
          if (j == c.levels.size()) c.add_level(res);
          for (std::size_t l = lvl + 1; l <= j; ++l) {
            c.levels[l].gens.push_back(res);
            c.levels[l].extend_orbit();
          }
          i = j + 1;
          restarted = true;
          break;
        }
      }
      if (!restarted) --i;
    }
    return c;
  }
};

}  // namespace detail

/// A group given by generators. The stabiliser chain is computed on first
/// use and shared between copies.
class PermGroup {
public:
  static constexpr AtomId kDefaultMaxDegree = 10000;

  explicit PermGroup(std::vector<Permutation> gens, AtomId max_degree = kDefaultMaxDegree)
      : gens_(std::move(gens)), state_(std::make_shared<State>()) {
    for (const Permutation& g : gens_)
      if (g.degree() > max_degree)
        throw Error(ErrorKind::SupportTooLarge, "generator moves atom " +
                                                    std::to_string(g.degree()) + " beyond limit " +
                                                    std::to_string(max_degree));
  }

  const std::vector<Permutation>& generators() const { return gens_; }

  std::set<AtomId> orbit(AtomId x) const { return symbreak::orbit(x, gens_); }

  BigInt order() const {
    BigInt n = 1;
    for (const auto& l : chain().levels) n *= l.orbit.size();
    return n;
  }

  bool contains(const Permutation& g) const {
    auto [res, j] = chain().strip(g);
    return j == chain().levels.size() && res.is_identity();
  }

  std::vector<AtomId> base() const {
    std::vector<AtomId> b;
    for (const auto& l : chain().levels) b.push_back(l.base);
    return b;
  }

private:
  struct State {
    std::once_flag once;
    detail::StabilizerChain chain;
  };

  const detail::StabilizerChain& chain() const {
    std::call_once(state_->once, [this] { state_->chain = detail::StabilizerChain::build(gens_); });
    return state_->chain;
  }

  std::vector<Permutation> gens_;
  std::shared_ptr<State> state_;
};

/// Drops identities and repeats, then greedily drops every generator that
/// the remaining ones already generate.
inline std::vector<Permutation> irredundant_filter(const std::vector<Permutation>& gens) {
  std::vector<Permutation> out;
  for (const Permutation& g : gens)
    if (!g.is_identity() && std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
  for (std::size_t i = 0; i < out.size();) {
    std::vector<Permutation> others;
    for (std::size_t j = 0; j < out.size(); ++j)
      if (j != i) others.push_back(out[j]);
    if (PermGroup(others).contains(out[i]))
      out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
    else
      ++i;
  }
  return out;
}

/// Every element of the generated group, sorted.
inline std::vector<Permutation> group_closure(const std::vector<Permutation>& gens,
                                              std::size_t limit = 1000000) {
  std::set<Permutation> seen{Permutation{}};
  std::deque<Permutation> todo{Permutation{}};
  while (!todo.empty()) {
    Permutation x = std::move(todo.front());
    todo.pop_front();
    for (const Permutation& g : gens) {
      Permutation y = x * g;
      if (seen.insert(y).second) {
        if (seen.size() > limit)
          throw Error(ErrorKind::ClosureTooLarge,
                      "group has more than " + std::to_string(limit) + " elements");
        todo.push_back(std::move(y));
      }
    }
  }
  return {seen.begin(), seen.end()};
}

}  // namespace symbreak

#endif
