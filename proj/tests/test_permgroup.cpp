#include <catch_amalgamated.hpp>

#include <cmath>

#include "support.hpp"
#include "symbreak/perm_group.hpp"

using namespace symbreak;
using namespace testsupport;

namespace {

Program letters(std::initializer_list<const char*> names) {
  Program p;
  for (const char* n : names) p.add_atom(n);
  return p;
}

Permutation random_perm(std::mt19937_64& rng, AtomId n) {
  std::vector<AtomId> img(n + 1);
  for (AtomId x = 0; x <= n; ++x) img[x] = x;
  std::shuffle(img.begin() + 1, img.end(), rng);
  return Permutation::from_images(img);
}

}  // namespace

TEST_CASE("cycle notation round-trips") {
  Program p = letters({"a", "b", "c", "d"});
  Permutation s = parse_cycles("(a b)", p);
  CHECK(s(1) == 2);
  CHECK(s(2) == 1);
  CHECK(s(3) == 3);
  CHECK(to_cycle_string(s, p) == "(a b)");
  CHECK(to_cycle_string(parse_cycles("(d c)( b  a )", p), p) == "(a b)(c d)");
  CHECK(to_cycle_string(Permutation{}, p) == "()");
  CHECK(parse_cycles("()", p).is_identity());

  Program q = letters({"a1", "a2", "a3", "a4"});
  Permutation rot = parse_cycles("(a1 a2 a3 a4)", q);
  CHECK(rot.cycles() == std::vector<std::vector<AtomId>>{{1, 2, 3, 4}});
  CHECK(to_cycle_string(rot, q) == "(a1 a2 a3 a4)");
}

TEST_CASE("cycle notation with compound atom names") {
  Program p = letters({"p(1,1)", "p(2,1)", "p(1,2)"});
  Permutation s = parse_cycles("(p(1,1) p(2,1))", p);
  CHECK(s(1) == 2);
  CHECK(to_cycle_string(s, p) == "(p(1,1) p(2,1))");
}

TEST_CASE("cycle notation errors") {
  Program p = letters({"a", "b", "c"});
  auto kind = [&](const std::string& text) {
    try {
      parse_cycles(text, p);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidArgument;
  };
  CHECK(kind("(a b)(b c)") == ErrorKind::OverlappingCycles);
  CHECK(kind("(a b") == ErrorKind::MalformedCycle);
  CHECK(kind("a b") == ErrorKind::MalformedCycle);
  CHECK(kind("(a)") == ErrorKind::MalformedCycle);
  CHECK(kind("(a z)") == ErrorKind::MalformedCycle);
}

TEST_CASE("permutation algebra") {
  Program p = letters({"a", "b", "c"});
  Permutation ab = parse_cycles("(a b)", p);
  CHECK((ab * ab).is_identity());
  Permutation abc = parse_cycles("(a b c)", p);
  CHECK(abc.inverse() == parse_cycles("(a c b)", p));
  // left-to-right composition: a -> b -> c under (a b)(b c)
  CHECK((ab * parse_cycles("(b c)", p))(1) == 3);

  Program q = p1();
  Permutation sw = parse_cycles("(a b)", q);
  Rule r = q.rules[0];
  Rule img = sw.apply(r);
  CHECK(img == q.rules[1]);
}

TEST_CASE("group laws on random permutations") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    Permutation x = random_perm(rng, 7), y = random_perm(rng, 7), z = random_perm(rng, 7);
    CHECK((x * y) * z == x * (y * z));
    CHECK((x * x.inverse()).is_identity());
    CHECK((Permutation{} * x) == x);
    for (AtomId a = 1; a <= 7; ++a) CHECK((x * y)(a) == y(x(a)));
  }
}

TEST_CASE("program symmetries") {
  Program p = p1();
  CHECK(is_program_symmetry(p, parse_cycles("(a b)", p)));
  CHECK(is_program_symmetry(p, Permutation{}));
  Program q = read_text("a :- not b.\nb :- not a.\nc.\n");
  CHECK_FALSE(is_program_symmetry(q, parse_cycles("(a c)", q)));
  // moving an atom outside atom(P) is never a symmetry
  CHECK_FALSE(is_program_symmetry(p, Permutation::transposition(3, 4)));
  // compute statements must be preserved
  Program r = read_text("a :- not b.\nb :- not a.\n#compute a.\n");
  CHECK_FALSE(is_program_symmetry(r, parse_cycles("(a b)", r)));
}

TEST_CASE("program symmetries are closed under composition") {
  std::mt19937_64 rng(8);
  Program p = read_text("{a1,a2,a3,a4}.\n:- a1,a2,a3,a4.\n");
  std::vector<Permutation> syms;
  for (int i = 0; i < 30; ++i) {
    Permutation x = random_perm(rng, 4);
    REQUIRE(is_program_symmetry(p, x));
    syms.push_back(x);
  }
  for (std::size_t i = 0; i + 1 < syms.size(); ++i)
    CHECK(is_program_symmetry(p, syms[i] * syms[i + 1]));
}

TEST_CASE("orbits") {
  Program p = letters({"a", "b", "c"});
  CHECK(orbit(1, {parse_cycles("(a b)", p)}) == std::set<AtomId>{1, 2});
  CHECK(orbit(3, {parse_cycles("(a b)", p)}) == std::set<AtomId>{3});
  Program q = letters({"a1", "a2", "a3", "a4"});
  CHECK(orbit(1, {parse_cycles("(a1 a2)", q), parse_cycles("(a1 a2 a3 a4)", q)}) ==
        std::set<AtomId>{1, 2, 3, 4});
}

TEST_CASE("group order and membership") {
  Program p = letters({"a", "b", "c", "d"});
  PermGroup s4({parse_cycles("(a b)", p), parse_cycles("(a b c d)", p)});
  CHECK(s4.order() == 24);
  CHECK(PermGroup({parse_cycles("(a b)", p)}).order() == 2);
  PermGroup adj({parse_cycles("(a b)", p), parse_cycles("(b c)", p), parse_cycles("(c d)", p)});
  CHECK(adj.contains(parse_cycles("(a d)", p)));
  CHECK(adj.order() == 24);
  PermGroup a4({parse_cycles("(a b c)", p), parse_cycles("(b c d)", p)});
  CHECK(a4.order() == 12);
  CHECK_FALSE(a4.contains(parse_cycles("(a b)", p)));
  CHECK(PermGroup({}).order() == 1);
}

TEST_CASE("orders of large groups") {
  // S11 x S10 acting on an 11 x 10 grid
  std::vector<Permutation> gens;
  auto id = [](AtomId r, AtomId c) { return r * 10 + c + 1; };
  for (AtomId r = 0; r + 1 < 11; ++r) {
    std::vector<std::vector<AtomId>> cycles;
    for (AtomId c = 0; c < 10; ++c) cycles.push_back({id(r, c), id(r + 1, c)});
    gens.push_back(Permutation::from_cycles(cycles));
  }
  for (AtomId c = 0; c + 1 < 10; ++c) {
    std::vector<std::vector<AtomId>> cycles;
    for (AtomId r = 0; r < 11; ++r) cycles.push_back({id(r, c), id(r, c + 1)});
    gens.push_back(Permutation::from_cycles(cycles));
  }
  BigInt expect = 1;
  for (int i = 2; i <= 11; ++i) expect *= i;
  for (int i = 2; i <= 10; ++i) expect *= i;
  CHECK(PermGroup(gens).order() == expect);

  // 21! no longer fits in 64 bits
  std::vector<AtomId> cycle;
  for (AtomId x = 1; x <= 21; ++x) cycle.push_back(x);
  PermGroup s21({Permutation::transposition(1, 2), Permutation::from_cycles({cycle})});
  BigInt f21 = 1;
  for (int i = 2; i <= 21; ++i) f21 *= i;
  CHECK(s21.order() == f21);
  CHECK(f21 > BigInt(std::numeric_limits<std::uint64_t>::max()));
}

TEST_CASE("support limit") {
  CHECK_THROWS_AS(PermGroup({Permutation::transposition(1, 20000)}), Error);
}

TEST_CASE("random groups: order and membership agree with closure") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 150; ++t) {
    AtomId n = std::uniform_int_distribution<AtomId>(2, 8)(rng);
    std::size_t k = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    std::vector<Permutation> gens;
    for (std::size_t i = 0; i < k; ++i) {
      // sparse generators keep many groups small
      std::vector<std::vector<AtomId>> cyc;
      std::vector<AtomId> pts;
      for (AtomId x = 1; x <= n; ++x)
        if (rng() % 2) pts.push_back(x);
      std::shuffle(pts.begin(), pts.end(), rng);
      if (pts.size() >= 2) cyc.push_back(pts);
      gens.push_back(Permutation::from_cycles(cyc));
    }
    PermGroup g(gens);
    auto all = group_closure(gens);
    CHECK(g.order() == all.size());
    std::set<Permutation> in(all.begin(), all.end());
    for (int i = 0; i < 20; ++i) {
      Permutation x = random_perm(rng, n);
      CHECK(g.contains(x) == in.contains(x));
    }
    for (const Permutation& x : all) CHECK(g.contains(x));
  }
}

TEST_CASE("irredundant filter") {
  Program p = letters({"a", "b", "c", "d"});
  auto f = irredundant_filter(
      {parse_cycles("(a b)", p), parse_cycles("(a b)", p), parse_cycles("(c d)", p)});
  CHECK(f == std::vector<Permutation>{parse_cycles("(a b)", p), parse_cycles("(c d)", p)});
  std::vector<Permutation> g{parse_cycles("(a b)", p), parse_cycles("(b c)", p),
                             parse_cycles("(a b c)", p)};
  auto h = irredundant_filter(g);
  CHECK(h.size() == 2);
  CHECK(PermGroup(h).order() == 6);
  CHECK(irredundant_filter({parse_cycles("(a b)", p)}).size() == 1);
}

TEST_CASE("random groups: irredundant filter keeps the group and obeys the log bound") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    std::vector<Permutation> gens;
    std::size_t k = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
    for (std::size_t i = 0; i < k; ++i) gens.push_back(random_perm(rng, 6));
    auto f = irredundant_filter(gens);
    PermGroup a(gens), b(f);
    CHECK(a.order() == b.order());
    for (const Permutation& g : gens) CHECK(b.contains(g));
    double bound = std::log2(a.order().convert_to<double>());
    CHECK(static_cast<double>(f.size()) <= bound + 1e-9);
  }
}

TEST_CASE("closure limits and small closures") {
  Program p = letters({"a", "b", "c", "d"});
  CHECK(group_closure({parse_cycles("(a b)", p)}).size() == 2);
  CHECK(group_closure({parse_cycles("(a b)", p), parse_cycles("(a b c d)", p)}).size() == 24);
  CHECK_THROWS_AS(group_closure({parse_cycles("(a b)", p), parse_cycles("(a b c d)", p)}, 10),
                  Error);
}
