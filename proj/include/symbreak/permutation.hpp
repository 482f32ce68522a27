#ifndef SYMBREAK_PERMUTATION_HPP
#define SYMBREAK_PERMUTATION_HPP

// Finite-support permutations of atom ids, cycle notation, and the program
// symmetry test.

#include <algorithm>
#include <cctype>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "symbreak/error.hpp"
#include "symbreak/oracle.hpp"
#include "symbreak/program.hpp"

namespace symbreak {

/// Bijection on positive integers that fixes everything past `degree()`.
/// Composition reads left to right: x^(p*q) = (x^p)^q.
class Permutation {
public:
  Permutation() = default;

  /// `images[x]` is the image of x; entry 0 is ignored.
  static Permutation from_images(std::vector<AtomId> images) {
    if (images.empty()) images.push_back(0);
    images[0] = 0;
    std::vector<char> hit(images.size(), 0);
    for (std::size_t x = 1; x < images.size(); ++x) {
      AtomId y = images[x];
      if (y == 0 || y >= images.size() || hit[y])
        throw Error(ErrorKind::InvalidArgument, "images do not form a permutation");
      hit[y] = 1;
    }
    Permutation p;
    p.img_ = std::move(images);
    p.trim();
    return p;
  }

  static Permutation from_cycles(const std::vector<std::vector<AtomId>>& cycles) {
    AtomId top = 0;
    for (const auto& c : cycles)
      for (AtomId x : c) {
        if (x == 0) throw Error(ErrorKind::MalformedCycle, "atom id 0 in cycle");
        top = std::max(top, x);
      }
    std::vector<AtomId> img(top + 1);
    for (AtomId x = 0; x <= top; ++x) img[x] = x;
    std::vector<char> seen(top + 1, 0);
    for (const auto& c : cycles) {
      for (AtomId x : c) {
        if (seen[x]) throw Error(ErrorKind::OverlappingCycles, "atom " + std::to_string(x) +
                                                                   " occurs in more than one cycle");
        seen[x] = 1;
      }
      for (std::size_t i = 0; i < c.size(); ++i) img[c[i]] = c[(i + 1) % c.size()];
    }
    Permutation p;
    p.img_ = std::move(img);
    p.trim();
    return p;
  }

  static Permutation transposition(AtomId a, AtomId b) { return from_cycles({{a, b}}); }

  AtomId operator()(AtomId x) const { return x < img_.size() ? img_[x] : x; }

  /// Largest moved point (0 for the identity).
  AtomId degree() const { return img_.empty() ? 0 : static_cast<AtomId>(img_.size() - 1); }
  bool is_identity() const { return img_.size() <= 1; }

  std::vector<AtomId> support() const {
    std::vector<AtomId> s;
    for (AtomId x = 1; x < img_.size(); ++x)
      if (img_[x] != x) s.push_back(x);
    return s;
  }

  Permutation operator*(const Permutation& q) const {
    AtomId top = std::max(degree(), q.degree());
    Permutation r;
    r.img_.resize(top + 1);
    for (AtomId x = 0; x <= top; ++x) r.img_[x] = q((*this)(x));
    r.trim();
    return r;
  }

  Permutation inverse() const {
    Permutation r;
    r.img_.resize(img_.size());
    for (AtomId x = 0; x < img_.size(); ++x) r.img_[img_[x]] = x;
    return r;
  }

  /// Disjoint cycles of length >= 2, each starting at its least element,
  /// ordered by least element.
  std::vector<std::vector<AtomId>> cycles() const {
    std::vector<std::vector<AtomId>> out;
    std::vector<char> seen(img_.size(), 0);
    for (AtomId x = 1; x < img_.size(); ++x) {
      if (seen[x] || img_[x] == x) continue;
      std::vector<AtomId> c;
      for (AtomId y = x; !seen[y]; y = img_[y]) {
        seen[y] = 1;
        c.push_back(y);
      }
      out.push_back(std::move(c));
    }
    return out;
  }

  const std::vector<AtomId>& images() const { return img_; }

  AtomSet apply(const AtomSet& s) const {
    AtomSet out;
    out.reserve(s.size());
    for (AtomId a : s) out.push_back((*this)(a));
    std::sort(out.begin(), out.end());
    return out;
  }

  Rule apply(const Rule& r) const {
    Rule out = r;
    for (AtomId& a : out.head) a = (*this)(a);
    for (AtomId& a : out.body_pos) a = (*this)(a);
    for (AtomId& a : out.body_neg) a = (*this)(a);
    return out;
  }

  friend bool operator==(const Permutation& a, const Permutation& b) { return a.img_ == b.img_; }
  friend bool operator<(const Permutation& a, const Permutation& b) { return a.img_ < b.img_; }

private:
  void trim() {
    while (img_.size() > 1 && img_.back() == img_.size() - 1) img_.pop_back();
    if (img_.size() == 1) img_.clear();
  }

  std::vector<AtomId> img_;
};

/// Cycle notation with atom names from `p` ("()" for the identity).
inline std::string to_cycle_string(const Permutation& pi, const Program& p) {
  auto cs = pi.cycles();
  if (cs.empty()) return "()";
  std::string out;
  for (const auto& c : cs) {
    out += '(';
    for (std::size_t i = 0; i < c.size(); ++i) out += (i ? " " : "") + p.name(c[i]);
    out += ')';
  }
  return out;
}

inline std::string to_cycle_string(const Permutation& pi) {
  return to_cycle_string(pi, Program{});
}

/// Parses "(a b)(c d e)". Names are resolved through the symbol table of
/// `p`; `_N` denotes atom N directly. Atom names may contain parentheses.
inline Permutation parse_cycles(const std::string& text, const Program& p) {
  std::vector<std::vector<AtomId>> cycles;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto resolve = [&](const std::string& name) -> AtomId {
    if (auto a = p.find(name)) return *a;
    if (name.size() > 1 && name[0] == '_' &&
        std::all_of(name.begin() + 1, name.end(), [](char c) { return std::isdigit(c); }))
      return static_cast<AtomId>(std::stoul(name.substr(1)));
    throw Error(ErrorKind::MalformedCycle, "unknown atom '" + name + "'");
  };
  skip();
  while (i < text.size()) {
    if (text[i] != '(') throw Error(ErrorKind::MalformedCycle, "expected '(' in cycle notation");
    ++i;
    std::vector<AtomId> cycle;
    while (true) {
      skip();
      if (i >= text.size()) throw Error(ErrorKind::MalformedCycle, "unterminated cycle");
      if (text[i] == ')') {
        ++i;
        break;
      }
      std::size_t start = i;
      int depth = 0;
      while (i < text.size()) {
        char c = text[i];
        if (c == '(') ++depth;
        if (c == ')') {
          if (depth == 0) break;
          --depth;
        }
        if (depth == 0 && std::isspace(static_cast<unsigned char>(c))) break;
        ++i;
      }
      cycle.push_back(resolve(text.substr(start, i - start)));
    }
    if (cycle.size() == 1)
      throw Error(ErrorKind::MalformedCycle, "cycle of length one");
    if (!cycle.empty()) cycles.push_back(std::move(cycle));
    skip();
  }
  return Permutation::from_cycles(cycles);
}

namespace detail {

inline std::vector<Rule> canonical_rules(const std::vector<Rule>& rules) {
  std::vector<Rule> out;
  out.reserve(rules.size());
  for (const Rule& r : rules) out.push_back(canonical(r));
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

}  // namespace detail

/// pi maps the (normalised) rule set of p onto itself and preserves both
/// compute statements. Permutations moving atoms outside atom(p) are not
/// symmetries.
inline bool is_program_symmetry(const Program& p, const Permutation& pi) {
  std::set<AtomId> used = p.atoms();
  for (AtomId a : pi.support())
    if (!used.contains(a)) return false;
  Program q = normalize(p);
  std::vector<Rule> mapped;
  mapped.reserve(q.rules.size());
  for (const Rule& r : q.rules) mapped.push_back(pi.apply(r));
  if (detail::canonical_rules(mapped) != detail::canonical_rules(q.rules)) return false;
  auto same_set = [&](const std::vector<AtomId>& v) {
    AtomSet s = make_atom_set(v);
    return pi.apply(s) == s;
  };
  return same_set(p.compute_true) && same_set(p.compute_false);
}

}  // namespace symbreak

#endif
