#include <doctest.h>

#include "nilcert/certificate.hpp"
#include "support.hpp"

using namespace nilcert;
using testing_support::uniform;

namespace {

SemidirectElement el(long v1, long v2, long t) { return {IntVector{v1, v2}, t}; }

SemidirectElement random_element(std::size_t n, long t_bound = 3) {
  IntVector v(n);
  for (auto& x : v) x = uniform(-20, 20);
  return {v, uniform(-t_bound, t_bound)};
}

SemidirectLattice lattice(const SemidirectGroup& g, const IntMatrix& basis, long m = 1) {
  return SemidirectLattice(g, Lattice(basis), m);
}

// Elements (v, t) of `g` with small t, v over a box of fiber coordinates.
std::vector<SemidirectElement> sample_elements(const SemidirectLattice& g, long box, long tmax) {
  std::vector<SemidirectElement> out;
  const IntMatrix& b = g.fiber().basis();
  for (long x = -box; x <= box; ++x)
    for (long y = -box; y <= box; ++y)
      for (long s = -tmax; s <= tmax; ++s) {
        IntVector v = add(scale(x, b.row_vector(0)), scale(y, b.row_vector(1)));
        out.push_back({v, Integer(s) * g.translation()});
      }
  return out;
}

// g normalizes s: both g s g^-1 and g^-1 s g stay inside s, on generators.
bool brute_normalizes(const SemidirectLattice& s, const SemidirectElement& g) {
  const SemidirectGroup& grp = s.group();
  const SemidirectElement gi = inv(grp, g);
  for (const auto& h : s.generators()) {
    if (!contains(s, mul(grp, mul(grp, g, h), gi))) return false;
    if (!contains(s, mul(grp, mul(grp, gi, h), g))) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("element arithmetic examples") {
  const SemidirectGroup g = sol3_group();
  CHECK(mul(g, el(0, 0, 1), el(1, 0, 0)) == el(5, 2, 1));
  const SemidirectElement x = el(3, -1, 2);
  CHECK(mul(g, x, SemidirectElement::identity(2)) == x);
  CHECK(mul(g, el(1, 0, 0), el(0, 1, 0)) == el(1, 1, 0));

  CHECK(inv(g, SemidirectElement::identity(2)) == SemidirectElement::identity(2));
  CHECK(inv(g, el(1, 0, 1)) == el(-1, 2, -1));
  CHECK(inv(g, el(4, 7, 0)) == el(-4, -7, 0));

  CHECK(conj(g, el(1, 0, 0), el(0, 0, 1)) == el(-4, -2, 1));
  const SemidirectGroup z3(IntMatrix::identity(2));
  CHECK(conj(z3, el(3, 1, 4), el(2, 2, 1)) == el(2, 2, 1));
  CHECK(conj(g, SemidirectElement::identity(2), x) == x);
}

TEST_CASE("group axioms on random triples") {
  const std::vector<SemidirectGroup> groups{sol3_group(), SemidirectGroup(IntMatrix{{-1, 0}, {0, 1}}),
                                            SemidirectGroup(IntMatrix{{0, -1}, {1, -1}}),
                                            SemidirectGroup(IntMatrix{{1, 1, 0}, {0, 1, 1}, {0, 0, 1}})};
  for (const auto& g : groups) {
    const std::size_t n = g.n();
    for (int trial = 0; trial < 10000; ++trial) {
      const auto a = random_element(n), b = random_element(n), c = random_element(n);
      REQUIRE(mul(g, mul(g, a, b), c) == mul(g, a, mul(g, b, c)));
      REQUIRE(mul(g, a, inv(g, a)) == SemidirectElement::identity(n));
      REQUIRE(mul(g, inv(g, a), a) == SemidirectElement::identity(n));
      REQUIRE(conj(g, a, b) == mul(g, mul(g, a, b), inv(g, a)));
    }
  }
  CHECK_THROWS_AS(SemidirectGroup(IntMatrix{{2, 0}, {0, 1}}), Error);
}

TEST_CASE("membership examples") {
  const SemidirectGroup g = sol3_group();
  CHECK(contains(sol3_gamma(1), el(2, 0, 5)));
  CHECK_FALSE(contains(sol3_gamma(1), el(1, 0, 0)));
  CHECK(contains(sol3_gamma(2, 1, 1), el(2, 2, 0)));
  CHECK_FALSE(contains(sol3_gamma(2, 1, 1), el(2, 0, 0)));
  CHECK(sol3_gamma(2, 1, 1) == lattice(g, IntMatrix{{2, 2}, {0, 4}}));
  CHECK(sol3_gamma(3, 1, 0) == lattice(g, IntMatrix{{8, 0}, {0, 4}}));
  CHECK(sol3_gamma(3, 0, 0) == sol3_gamma(2));
  CHECK_THROWS_AS(lattice(g, IntMatrix{{3, 0}, {0, 1}}), Error);  // not A-invariant
  CHECK_THROWS_AS(lattice(g, IntMatrix{{1, 0}}), Error);          // not full rank
}

TEST_CASE("normalizers in the Sol^3 lattice") {
  const SemidirectLattice gamma = sol3_gamma(0);
  for (unsigned k = 1; k <= 8; ++k) {
    const SemidirectLattice n = normalizer(gamma, sol3_gamma(k));
    CHECK(n == sol3_gamma(k - 1));
    CHECK(quotient(n, sol3_gamma(k)).torsion == std::vector<Integer>{2, 2});
  }
  CHECK(normalizer(gamma, gamma) == gamma);
  // The (1,0) and (0,1) labels trade places one level up; (1,1) is stable.
  for (unsigned k = 2; k <= 5; ++k) {
    CHECK(normalizer(gamma, sol3_gamma(k, 1, 0)) == sol3_gamma(k - 1, 0, 1));
    CHECK(normalizer(gamma, sol3_gamma(k, 0, 1)) == sol3_gamma(k - 1, 1, 0));
    CHECK(normalizer(gamma, sol3_gamma(k, 1, 1)) == sol3_gamma(k - 1, 1, 1));
  }
}

TEST_CASE("normalizer agrees with brute-force conjugation") {
  const SemidirectLattice gamma = sol3_gamma(0);
  const SemidirectGroup klein(IntMatrix{{-1, 0}, {0, 1}});
  const SemidirectLattice kz3(klein, Lattice::full(2), 1);
  const std::vector<std::pair<SemidirectLattice, SemidirectLattice>> cases{
      {gamma, sol3_gamma(2)},
      {gamma, sol3_gamma(3, 1, 1)},
      {gamma, sol3_gamma(3, 1, 0)},
      {gamma, lattice(sol3_group(), IntMatrix{{1, 1}, {0, 4}})},
      {gamma, lattice(sol3_group(), IntMatrix{{2, 0}, {0, 2}}, 3)},
      {kz3, SemidirectLattice(klein, Lattice(IntMatrix{{2, 0}, {0, 3}}), 2)},
      {kz3, SemidirectLattice(klein, Lattice(IntMatrix{{1, 0}, {0, 2}}), 1)},
  };
  for (const auto& [g, s] : cases) {
    const SemidirectLattice n = normalizer(g, s);
    CHECK(is_subgroup(n, s));
    CHECK(is_subgroup(g, n));
    CHECK(is_normal_in(n, s));
    for (const auto& x : sample_elements(g, 4, 2)) {
      CHECK(contains(n, x) == brute_normalizes(s, x));
    }
  }
}

TEST_CASE("quotients") {
  const SemidirectGroup g = sol3_group();
  for (unsigned k = 1; k <= 4; ++k) {
    CHECK(quotient(sol3_gamma(k - 1), sol3_gamma(k)).torsion == std::vector<Integer>{2, 2});
  }
  CHECK(quotient(sol3_gamma(2), sol3_gamma(2)).is_trivial());
  const AbelianStructure q3 = quotient(sol3_gamma(0), lattice(g, IntMatrix::identity(2), 3));
  CHECK(q3.free_rank == 0);
  CHECK(q3.torsion == std::vector<Integer>{3});
  CHECK_THROWS_AS(quotient(sol3_gamma(0), sol3_gamma(2)), Error);            // not normal
  CHECK_THROWS_AS(quotient(sol3_gamma(0), sol3_gamma(2, 1, 0)), Error);
}

TEST_CASE("intermediates between consecutive towers") {
  for (unsigned k = 1; k <= 5; ++k) {
    const auto mids = intermediates(sol3_gamma(k - 1), sol3_gamma(k));
    REQUIRE(mids.size() == 3);
    const std::vector<SemidirectLattice> expected{sol3_gamma(k, 1, 0), sol3_gamma(k, 0, 1),
                                                  sol3_gamma(k, 1, 1)};
    for (const auto& e : expected) {
      CHECK(std::count(mids.begin(), mids.end(), e) == 1);
    }
  }
}

TEST_CASE("intermediates match subgroup counts of abelian quotients") {
  const SemidirectGroup z3(IntMatrix::identity(2));
  const SemidirectLattice top(z3, Lattice::full(2), 1);
  // (Z/2)^2 has three proper nontrivial subgroups, Z/6 two, Z/4 one, Z/5 none.
  CHECK(intermediates(top, SemidirectLattice(z3, Lattice::scaled(2, 2), 1)).size() == 3);
  CHECK(intermediates(top, SemidirectLattice(z3, Lattice::full(2), 6)).size() == 2);
  CHECK(intermediates(top, SemidirectLattice(z3, Lattice::full(2), 4)).size() == 1);
  CHECK(intermediates(top, SemidirectLattice(z3, Lattice::full(2), 5)).empty());
  CHECK(intermediates(top, SemidirectLattice(z3, Lattice(IntMatrix{{1, 0}, {0, 4}}), 1)).size() == 1);
  // Z/3 x Z/3 (one fiber and one translation factor) has diagonal subgroups
  // of order 3 that are not of the form L x| mZ.
  CHECK_THROWS_AS(intermediates(top, SemidirectLattice(z3, Lattice(IntMatrix{{1, 0}, {0, 3}}), 3)), Error);
}

TEST_CASE("intermediates are distinct and strictly between") {
  const SemidirectGroup z3(IntMatrix::identity(2));
  const SemidirectLattice top(z3, Lattice::full(2), 1);
  const SemidirectLattice sub(z3, Lattice::scaled(2, 4), 1);
  // (Z/4)^2 has 15 subgroups.
  const auto mids = intermediates(top, sub, 10000);
  CHECK(mids.size() == 13);
  for (std::size_t i = 0; i < mids.size(); ++i) {
    CHECK(is_subgroup(top, mids[i]));
    CHECK(is_subgroup(mids[i], sub));
    CHECK_FALSE(mids[i] == top);
    CHECK_FALSE(mids[i] == sub);
    for (std::size_t j = i + 1; j < mids.size(); ++j) CHECK_FALSE(mids[i] == mids[j]);
    if (i > 0) CHECK(index_in(mids[i - 1], sub) <= index_in(mids[i], sub));
  }
  CHECK_THROWS_AS(intermediates(sol3_gamma(0), sol3_gamma(2)), Error);  // not normal
}

TEST_CASE("centers") {
  const SemidirectCenter sol = center_rank(sol3_gamma(0));
  CHECK(sol.rank == 0);
  CHECK(sol.structure.is_trivial());
  CHECK(center_rank(SemidirectLattice(SemidirectGroup(IntMatrix::identity(2)), Lattice::full(2))).rank == 3);
  const SemidirectGroup klein(IntMatrix{{-1, 0}, {0, 1}});
  const SemidirectLattice k(klein, Lattice::full(2), 1);
  const SemidirectCenter kc = center_rank(k);
  CHECK(kc.rank == 2);
  CHECK(kc.central_translation == 2);
  CHECK(kc.fixed_fiber == Lattice(IntMatrix{{0, 1}}));

  // Brute force: the claimed central elements commute with all generators, and
  // nothing outside the claimed center in a sample box does.
  const SemidirectElement z1{kc.fixed_fiber.basis().row_vector(0), 0};
  const SemidirectElement z2{IntVector{0, 0}, kc.central_translation};
  for (const auto& g : k.generators()) {
    CHECK(conj(klein, g, z1) == z1);
    CHECK(conj(klein, g, z2) == z2);
  }
  for (const auto& x : sample_elements(k, 3, 3)) {
    bool central = true;
    for (const auto& g : k.generators()) central = central && conj(klein, g, x) == x;
    const bool claimed = x.v[0] == 0 && x.t % 2 == 0;
    CHECK(central == claimed);
  }
}

TEST_CASE("sol3 tower certificates") {
  const SeriesCertificate c0 = sol3_tower(0);
  CHECK(c0.total_index == 1);
  CHECK(c0.min_length == 0);
  CHECK(c0.chain.empty());

  const SeriesCertificate c1 = sol3_tower(1);
  CHECK(c1.total_index == 4);
  CHECK(c1.min_length >= 1);
  REQUIRE(c1.chain.size() == 1);
  CHECK(c1.chain[0].quotient.torsion == std::vector<Integer>{2, 2});

  for (unsigned k = 2; k <= 6; ++k) {
    const SeriesCertificate c = sol3_tower(k);
    Integer expected;
    mpz_ui_pow_ui(expected.get_mpz_t(), 4, k);
    CHECK(c.total_index == expected);
    CHECK(c.min_length == k);
    CHECK(c.closure_verified);
    CHECK(c.max_quotient_order == 4);
    CHECK(c.closure_size == 6 * k - 1);
    REQUIRE(c.levels.size() == k);
    for (const auto& level : c.levels) CHECK(level.normalizer_verified);
  }
}

TEST_CASE("closure reaches lattices outside the named family") {
  const ClosureReport r = subnormal_closure(sol3_gamma(0), sol3_gamma(2));
  CHECK(r.complete);
  CHECK(r.layer_bound == 4);
  const SemidirectLattice odd = lattice(sol3_group(), IntMatrix{{1, 1}, {0, 4}});
  CHECK(std::count(r.reached.begin(), r.reached.end(), odd) == 1);
  // Any chain of layers of order <= 4 from Gamma_k to Gamma needs k layers.
  CHECK(length_lower_bound(16, r.layer_bound) == 2);
}

TEST_CASE("scaling isomorphisms") {
  CHECK(scaling_iso_check(0));
  CHECK(scaling_iso_check(1));
  CHECK(scaling_iso_check(4));
  CHECK_FALSE(scaling_map_check(sol3_gamma(0), 3, sol3_gamma(1)));
  CHECK(scaling_map_check(sol3_gamma(0), 2, sol3_gamma(1)));
}

TEST_CASE("central layers") {
  const SemidirectGroup z3(IntMatrix::identity(2));
  const SemidirectLattice top(z3, Lattice::full(2), 1);
  const SemidirectLattice lo(z3, Lattice::scaled(2, 2), 2);
  CHECK(is_central_layer(top, lo, top));
  CHECK_FALSE(is_central_layer(sol3_gamma(0), sol3_gamma(1), sol3_gamma(0)));
}
