#include <doctest.h>

#include <algorithm>
#include <map>

#include "nilcert/cohomology.hpp"
#include "support.hpp"

using namespace nilcert;
using testing_support::uniform;

namespace {

struct Presentation {
  const char* name;
  std::size_t generators;
  std::vector<std::string> relators;
  std::size_t order;
};

const std::vector<Presentation>& small_groups() {
  static const std::vector<Presentation> groups{
      {"Z/2", 1, {"aa"}, 2},
      {"Z/3", 1, {"aaa"}, 3},
      {"Z/4", 1, {"aaaa"}, 4},
      {"(Z/2)^2", 2, {"aa", "bb", "abAB"}, 4},
      {"S3", 2, {"aaa", "bb", "abab"}, 6},
  };
  return groups;
}

const std::vector<std::vector<Integer>> kModules{
    {2}, {3}, {4}, {5}, {6}, {7}, {8}, {9}, {16}, {2, 2}, {2, 4}, {3, 3}, {2, 6},
    {4, 4}, {2, 8}, {2, 2, 2}, {2, 2, 4}, {2, 2, 2, 2}};

ModuleAction make_action(const Presentation& q, std::size_t free, std::vector<Integer> torsion) {
  ModuleAction a;
  a.generators = q.generators;
  a.relators = q.relators;
  a.free = free;
  a.torsion = std::move(torsion);
  a.action.assign(q.generators, IntMatrix::identity(a.dim()));
  return a;
}

bool valid(const ModuleAction& a) {
  try {
    validate_action(a);
    return true;
  } catch (const Error&) {
    return false;
  }
}

// Random well-defined action by rejection sampling; trivial if nothing is found.
ModuleAction random_action(const Presentation& q, const std::vector<Integer>& torsion) {
  ModuleAction a = make_action(q, 0, torsion);
  const std::size_t d = a.dim();
  for (int attempt = 0; attempt < 400; ++attempt) {
    ModuleAction trial = a;
    for (auto& m : trial.action) {
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
          const long mod = torsion[i].get_si();
          m(i, j) = uniform(0, mod - 1);
        }
    }
    if (valid(trial)) return trial;
  }
  return a;
}

// Cocycles by direct enumeration on a Cayley table, for the fixed-point oracle.
std::size_t fixed_points(const ModuleAction& a) {
  const std::size_t d = a.dim();
  const Lattice r = a.relations();
  std::size_t count = 0;
  std::vector<long> digits(d, 0);
  for (;;) {
    IntVector m(d);
    for (std::size_t i = 0; i < d; ++i) m[i] = digits[i];
    bool fixed = true;
    for (const auto& g : a.action) fixed = fixed && r.contains(sub(g * m, m));
    if (fixed) ++count;
    std::size_t i = 0;
    while (i < d && ++digits[i] == a.torsion[i]) digits[i++] = 0;
    if (i == d) break;
  }
  return count;
}

Integer module_order(const ModuleAction& a) {
  Integer out = 1;
  for (const auto& t : a.torsion) out *= t;
  return out;
}

ModuleAction doubled(const ModuleAction& a) {
  ModuleAction out = a;
  // Keep free coordinates first: Z^f + Z^f + T + T.
  out.free = 2 * a.free;
  out.torsion.clear();
  for (int copy = 0; copy < 2; ++copy)
    out.torsion.insert(out.torsion.end(), a.torsion.begin(), a.torsion.end());
  const std::size_t d = a.dim();
  const std::size_t f = a.free;
  auto place = [&](std::size_t coord, int copy) {
    return coord < f ? coord + copy * f : 2 * f + copy * (d - f) + (coord - f);
  };
  for (std::size_t g = 0; g < a.action.size(); ++g) {
    IntMatrix m(2 * d, 2 * d);
    for (int copy = 0; copy < 2; ++copy)
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m(place(i, copy), place(j, copy)) = a.action[g](i, j);
    out.action[g] = m;
  }
  return out;
}

}  // namespace

TEST_CASE("word parsing") {
  const auto w = parse_word("abA1B", 2);
  REQUIRE(w.size() == 4);
  CHECK(w[0] == std::pair<std::size_t, int>{0, 1});
  CHECK(w[2] == std::pair<std::size_t, int>{0, -1});
  CHECK(w[3] == std::pair<std::size_t, int>{1, -1});
  CHECK_THROWS_AS(parse_word("ac", 2), Error);
  CHECK_THROWS_AS(parse_word("a-b", 2), Error);
}

TEST_CASE("coset enumeration") {
  CHECK(enumerate_group(1, {"aaaaa"}).order == 5);
  CHECK(enumerate_group(2, {"aaa", "bb", "abab"}).order == 6);
  CHECK(enumerate_group(2, {"aaaa", "aaBB", "baBa"}).order == 8);  // quaternion
  CHECK(enumerate_group(2, {"aaaa", "bb", "abAB"}).order == 8);
  CHECK(enumerate_group(2, {"aa", "bb", "ababab"}).order == 6);
  CHECK(enumerate_group(0, {}).order == 1);
  CHECK_THROWS_AS(enumerate_group(2, {"abAB"}, 1000), Error);  // Z^2 is infinite
}

TEST_CASE("fixed cohomology examples") {
  ModuleAction triv_z = make_action(small_groups()[0], 1, {});
  CHECK(z1(triv_z).structure.is_trivial());

  ModuleAction sign = make_action(small_groups()[0], 1, {});
  sign.action[0] = IntMatrix{{-1}};
  const CocycleSpace z = z1(sign);
  CHECK(z.structure.free_rank == 1);
  CHECK(z.structure.torsion.empty());
  const CocycleSpace b = b1(sign);
  CHECK(b.lifted == Lattice::scaled(1, 2));
  CHECK(z.lifted.contains(b.lifted));
  CHECK(h1(sign).torsion == std::vector<Integer>{2});
  CHECK_THROWS_AS(h1_brute(sign), Error);  // infinite module

  ModuleAction trunc = make_action(small_groups()[0], 0, {4});
  trunc.action[0] = IntMatrix{{3}};
  CHECK(h1(trunc).torsion == std::vector<Integer>{2});
  CHECK(h1_brute(trunc).torsion == std::vector<Integer>{2});

  ModuleAction v4 = make_action(small_groups()[3], 0, {2});
  CHECK(z1(v4).structure.torsion == std::vector<Integer>{2, 2});

  ModuleAction triv2 = make_action(small_groups()[0], 0, {2});
  CHECK(h1(triv2).torsion == std::vector<Integer>{2});
  CHECK(h1_brute(triv2).torsion == std::vector<Integer>{2});
  CHECK(b1(triv2).structure.is_trivial());

  for (std::size_t n : {2, 3, 5}) {
    ModuleAction t = make_action({"cyclic", 1, {std::string(n, 'a')}, n}, 3, {});
    CHECK(h1(t).is_trivial());
  }

  // Z/3 rotating Z^2: the norm vanishes and det(g - 1) = 3, so H^1 = Z/3.
  ModuleAction rot = make_action(small_groups()[1], 2, {});
  rot.action[0] = IntMatrix{{0, -1}, {1, -1}};
  CHECK(h1(rot).torsion == std::vector<Integer>{3});

  ModuleAction trivial_group;
  trivial_group.torsion = {3};
  trivial_group.action = {};
  CHECK(h1(trivial_group).is_trivial());
  CHECK(h1_brute(trivial_group).is_trivial());

  ModuleAction bad = make_action(small_groups()[0], 0, {3});
  bad.action[0] = IntMatrix{{2}};  // order 2 on Z/3, fine
  validate_action(bad);
  bad.relators = {"aaa"};
  CHECK_THROWS_AS(validate_action(bad), Error);
}

TEST_CASE("h1 agrees with brute force on random finite instances") {
  std::map<std::string, int> per_group;
  int instances = 0;
  int nontrivial_actions = 0;
  for (int round = 0; round < 3; ++round) {
    for (const auto& q : small_groups()) {
      for (const auto& mod : kModules) {
        const ModuleAction act = random_action(q, mod);
        for (const auto& m : act.action) nontrivial_actions += m.is_identity() ? 0 : 1;
        const AbelianStructure fast = h1(act);
        const AbelianStructure brute = h1_brute(act);
        CHECK_MESSAGE(fast == brute, q.name << " on " << act.relations().basis().to_string());

        const CocycleSpace z = z1(act);
        const CocycleSpace b = b1(act);
        CHECK(z.lifted.contains(b.lifted));
        for (const auto& values : z.basis)
          for (const auto& rel : act.relators)
            CHECK(act.relations().contains(evaluate_cocycle(act, values, rel)));
        // |B^1| = |M| / |M^Q|.
        CHECK(*b.structure.order() * fixed_points(act) == module_order(act));
        ++instances;
        ++per_group[q.name];
      }
    }
  }
  CHECK(instances >= 200);
  CHECK(nontrivial_actions > 100);
}

TEST_CASE("doubling the module doubles H^1") {
  for (const auto& q : small_groups()) {
    for (const auto& mod : {std::vector<Integer>{2}, std::vector<Integer>{4}, std::vector<Integer>{3},
                            std::vector<Integer>{2, 2}}) {
      const ModuleAction act = random_action(q, mod);
      const AbelianStructure single = h1(act);
      const AbelianStructure twice = h1(doubled(act));
      std::vector<Integer> expected;
      for (const auto& t : single.torsion) expected.insert(expected.end(), 2, t);
      std::sort(expected.begin(), expected.end());
      CHECK(twice.torsion == expected);
      CHECK(twice.free_rank == 2 * single.free_rank);
    }
  }
  ModuleAction sign = make_action(small_groups()[0], 1, {});
  sign.action[0] = IntMatrix{{-1}};
  CHECK(h1(doubled(sign)).torsion == std::vector<Integer>{2, 2});
}

TEST_CASE("brute-force guards") {
  ModuleAction big = make_action(small_groups()[0], 0, {4096, 2});
  CHECK_THROWS_AS(h1_brute(big), Error);
}
