#include <catch_amalgamated.hpp>

#include <sstream>

#include "support.hpp"
#include "symbreak/automorphism.hpp"
#include "symbreak/bench.hpp"
#include "symbreak/perm_group.hpp"
#include "symbreak/propagation.hpp"
#include "symbreak/sbc.hpp"
#include "symbreak/smodels.hpp"
#include "symbreak/valsym.hpp"

using namespace symbreak;
using namespace testsupport;

namespace {

bool sat(const Program& p) { return !solve_tight(p, {.limit = 1}).answer_sets.empty(); }

BigInt group_order(const Program& p) { return PermGroup(detect_symmetries(p).generators).order(); }

std::string smodels_bytes(const Program& p) {
  std::ostringstream os;
  write_smodels(p, os);
  return os.str();
}

std::vector<Program> corpus() {
  std::vector<Program> out;
  for (std::size_t n : {2, 3, 4, 5})
    for (auto v : {PigeonVariant::Disjunctive, PigeonVariant::Support}) out.push_back(gen_pigeons(n, v));
  out.push_back(gen_allint(4));
  out.push_back(gen_allint(6));
  out.push_back(gen_ramsey(3, 3, 5));
  out.push_back(gen_ramsey(3, 4, 6));
  out.push_back(gen_schur(6, 3));
  out.push_back(gen_colouring(random_graph(7, 0.4, 11), 3));
  out.push_back(encode_csp(gen_graceful(clique_path(2, 2))).program);
  return out;
}

}  // namespace

TEST_CASE("pigeon holes") {
  Program p = gen_pigeons(3, PigeonVariant::Disjunctive);
  CHECK(p.atom_count == 6);
  CHECK(p.rules.size() == 3 + 6);
  CHECK(std::count_if(p.rules.begin(), p.rules.end(), [](const Rule& r) { return r.head.size() == 2; }) == 3);
  CHECK(p.name(1) == "p(1,1)");
  CHECK(enumerate_answer_sets(p).empty());
  CHECK(enumerate_answer_sets(gen_pigeons(3, PigeonVariant::Support)).empty());
  for (std::size_t n = 1; n <= 6; ++n) {
    INFO(n);
    for (auto v : {PigeonVariant::Disjunctive, PigeonVariant::Support}) {
      CHECK_FALSE(sat(gen_pigeons(n, v)));
      CHECK(sat(gen_pigeons(n, v, n)));
    }
  }
  CHECK(solve_tight(gen_pigeons(3, PigeonVariant::Support, 3)).answer_sets.size() == 6);
}

TEST_CASE("pigeon symmetry groups") {
  CHECK(group_order(gen_pigeons(3, PigeonVariant::Disjunctive)) == 12);
  CHECK(group_order(gen_pigeons(4, PigeonVariant::Disjunctive)) == 144);
  CHECK(group_order(gen_pigeons(5, PigeonVariant::Disjunctive)) == 2880);
  CHECK(group_order(gen_pigeons(4, PigeonVariant::Support)) == 144);

  // brute force at n = 3
  Program p = gen_pigeons(3, PigeonVariant::Disjunctive);
  std::vector<AtomId> a(6), b(6);
  std::iota(a.begin(), a.end(), 1);
  b = a;
  std::size_t count = 0;
  do {
    std::vector<AtomId> img(7);
    std::iota(img.begin(), img.end(), 0);
    for (std::size_t i = 0; i < 6; ++i) img[a[i]] = b[i];
    if (is_program_symmetry(p, Permutation::from_images(img))) ++count;
  } while (std::next_permutation(b.begin(), b.end()));
  CHECK(count == 12);

  // every row and column transposition is in the detected group
  Program q = gen_pigeons(4, PigeonVariant::Disjunctive);
  PermGroup g(detect_symmetries(q).generators);
  auto at = [&](std::size_t i, std::size_t j) { return q.require("p(" + std::to_string(i) + "," + std::to_string(j) + ")"); };
  for (std::size_t i = 1; i <= 4; ++i)
    for (std::size_t k = i + 1; k <= 4; ++k) {
      std::vector<std::vector<AtomId>> cyc;
      for (std::size_t j = 1; j <= 3; ++j) cyc.push_back({at(i, j), at(k, j)});
      CHECK(g.contains(Permutation::from_cycles(cyc)));
    }
  for (std::size_t j = 1; j <= 3; ++j)
    for (std::size_t l = j + 1; l <= 3; ++l) {
      std::vector<std::vector<AtomId>> cyc;
      for (std::size_t i = 1; i <= 4; ++i) cyc.push_back({at(i, j), at(i, l)});
      CHECK(g.contains(Permutation::from_cycles(cyc)));
    }
}

TEST_CASE("all-interval series") {
  Program p3 = gen_allint(3);
  auto sets = enumerate_answer_sets(p3);
  CHECK(sets.size() == 4);
  for (const AtomSet& s : sets) {
    std::vector<int> val(4, -1);
    for (AtomId a : s) {
      std::string n = p3.name(a);
      if (n[0] == 'v') val[n[2] - '0'] = n[4] - '0';
    }
    CHECK(std::set<int>{val[1], val[2], val[3]}.size() == 3);
    CHECK(std::abs(val[1] - val[2]) != std::abs(val[2] - val[3]));
  }
  CHECK(solve_tight(gen_allint(8)).answer_sets.size() == 40);

  Program p4 = gen_allint(4);
  PermGroup g(detect_symmetries(p4).generators);
  CHECK(g.order() >= 4);
  // reversal and reflection
  auto v = [&](std::size_t i, std::size_t j) { return p4.require(detail::atom_name("v", i, j)); };
  auto d = [&](std::size_t k, std::size_t l) { return p4.require(detail::atom_name("d", k, l)); };
  std::vector<std::vector<AtomId>> rev, refl;
  for (std::size_t j = 0; j < 4; ++j) {
    rev.push_back({v(1, j), v(4, j)});
    rev.push_back({v(2, j), v(3, j)});
  }
  for (std::size_t l = 1; l < 4; ++l) rev.push_back({d(1, l), d(3, l)});
  for (std::size_t i = 1; i <= 4; ++i) {
    refl.push_back({v(i, 0), v(i, 3)});
    refl.push_back({v(i, 1), v(i, 2)});
  }
  Permutation pi2 = Permutation::from_cycles(rev), pi3 = Permutation::from_cycles(refl);
  CHECK(is_program_symmetry(p4, pi2));
  CHECK(is_program_symmetry(p4, pi3));
  CHECK(g.contains(pi2));
  CHECK(g.contains(pi3));
}

TEST_CASE("ramsey") {
  Program r = gen_ramsey(3, 3, 5);
  CHECK(r.atom_count == 20);
  CHECK(r.rules.size() == 10 + 10 + 10);
  CHECK(sat(r));
  CHECK_FALSE(sat(gen_ramsey(3, 3, 6)));
  CHECK(sat(gen_ramsey(3, 4, 8)));
  CHECK(gen_ramsey(3, 5, 6).rules.size() == 15 + 20 + 6);
}

TEST_CASE("schur") {
  CHECK(sat(gen_schur(4, 2)));
  CHECK_FALSE(sat(gen_schur(5, 1)));
  CHECK(sat(gen_schur(1, 1)));
  CHECK_FALSE(sat(gen_schur(2, 1)));
  CHECK_FALSE(sat(gen_schur(5, 2)));
  CHECK(sat(gen_schur(13, 3)));
  // {1,4} {2,3}
  Program p = gen_schur(4, 2);
  AtomSet m = atoms(p, {"inpart(1,1)", "inpart(2,2)", "inpart(3,2)", "inpart(4,1)"});
  auto all = enumerate_answer_sets(p);
  CHECK(std::find(all.begin(), all.end(), m) != all.end());
  CHECK(group_order(gen_schur(6, 3)) >= 6);
}

TEST_CASE("graph colouring") {
  Graph tri{3, {{1, 2}, {2, 3}, {1, 3}}};
  CHECK(solve_tight(gen_colouring(tri, 3)).answer_sets.size() == 6);
  CHECK(solve_tight(gen_colouring(tri, 2)).answer_sets.empty());
  CHECK(group_order(gen_colouring(tri, 3)) >= 6);
  CHECK(group_order(gen_colouring(tri, 3)) == 36);
  Graph a = random_graph(10, 0.5, 42), b = random_graph(10, 0.5, 42), c = random_graph(10, 0.5, 43);
  CHECK(a.edges == b.edges);
  CHECK(a.edges != c.edges);
  CHECK_THROWS_AS(gen_colouring(Graph{2, {{1, 1}}}, 2), Error);
  CHECK_THROWS_AS(gen_colouring(Graph{2, {{1, 2}, {2, 1}}}, 2), Error);
}

TEST_CASE("graceful graphs") {
  Graph k3p2 = clique_path(3, 2);
  CHECK(k3p2.n == 6);
  CHECK(k3p2.edges.size() == 9);
  CspSpec s = gen_graceful(k3p2);
  CHECK(s.vars[0].domain == 10);
  Graph dw3 = double_wheel(3);
  CHECK(dw3.n == 7);
  CHECK(dw3.edges.size() == 12);
  CHECK(solve_csp(gen_graceful(dw3), 1).empty());
  auto ladder = solve_csp(gen_graceful(clique_path(2, 2)));
  REQUIRE_FALSE(ladder.empty());
  CHECK(satisfies(gen_graceful(clique_path(2, 2)), ladder.front()));
  CHECK(sat(encode_csp(gen_graceful(clique_path(2, 2))).program));
  auto k3 = solve_csp(gen_graceful(k3p2), 1);
  CHECK(k3.size() == 1);
}

TEST_CASE("generators are deterministic and already normal") {
  auto again = corpus();
  auto first = corpus();
  REQUIRE(first.size() == again.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(smodels_bytes(first[i]) == smodels_bytes(again[i]));
    CHECK(normalize(first[i]) == first[i]);
    std::istringstream in(smodels_bytes(first[i]));
    CHECK(read_smodels(in) == first[i]);
  }
}

TEST_CASE("shuffled instances") {
  Program p = gen_pigeons(4, PigeonVariant::Disjunctive);
  Program s = shuffle_atoms(p, 7);
  CHECK(s != p);
  CHECK(shuffle_atoms(p, 7) == s);
  CHECK(s.atom_count == p.atom_count);
  CHECK(group_order(s) == 144);
  Program c = gen_colouring(Graph{3, {{1, 2}, {2, 3}, {1, 3}}}, 3);
  Program cs = shuffle_atoms(c, 3);
  auto names = [](const Program& q) {
    std::set<std::set<std::string>> out;
    for (const AtomSet& m : enumerate_answer_sets(q)) {
      std::set<std::string> n;
      for (AtomId a : m) n.insert(q.name(a));
      out.insert(n);
    }
    return out;
  };
  CHECK(names(c) == names(cs));
}
