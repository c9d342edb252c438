#include <doctest.h>

#include <numeric>

#include "nilcert/lattice.hpp"
#include "support.hpp"

using namespace nilcert;
using testing_support::naive_det;
using testing_support::random_matrix;
using testing_support::random_unimodular;
using testing_support::uniform;

namespace {

bool is_unimodular(const IntMatrix& m) {
  const Integer d = naive_det(m);
  return d == 1 || d == -1;
}

// gcd of all k x k minors; d_1 ... d_k of the Smith form must equal it.
Integer minor_gcd(const IntMatrix& a, std::size_t k) {
  std::vector<std::size_t> rows(k), cols(k);
  Integer g = 0;
  std::vector<bool> rsel(a.rows(), false), csel(a.cols(), false);
  std::fill(rsel.begin(), rsel.begin() + static_cast<long>(k), true);
  do {
    std::fill(csel.begin(), csel.end(), false);
    std::fill(csel.begin(), csel.begin() + static_cast<long>(k), true);
    do {
      IntMatrix m(k, k);
      for (std::size_t i = 0, r = 0; i < a.rows(); ++i) {
        if (!rsel[i]) continue;
        for (std::size_t j = 0, c = 0; j < a.cols(); ++j)
          if (csel[j]) m(r, c++) = a(i, j);
        ++r;
      }
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), Integer(naive_det(m)).get_mpz_t());
    } while (std::prev_permutation(csel.begin(), csel.end()));
  } while (std::prev_permutation(rsel.begin(), rsel.end()));
  return g;
}

void check_smith(const IntMatrix& a, const SmithForm& f) {
  REQUIRE(f.U * a * f.V == f.S);
  CHECK(is_unimodular(f.U));
  CHECK(is_unimodular(f.V));
  for (std::size_t i = 0; i < f.S.rows(); ++i)
    for (std::size_t j = 0; j < f.S.cols(); ++j)
      if (i != j) CHECK(f.S(i, j) == 0);
  for (std::size_t i = 0; i < f.factors.size(); ++i) {
    CHECK(f.factors[i] > 0);
    CHECK(f.S(i, i) == f.factors[i]);
    if (i + 1 < f.factors.size()) CHECK(mpz_divisible_p(f.factors[i + 1].get_mpz_t(), f.factors[i].get_mpz_t()));
  }
}

bool hnf_is_canonical(const HermiteForm& h) {
  for (std::size_t i = 0; i < h.rank; ++i) {
    const std::size_t p = h.pivot_cols[i];
    if (h.H(i, p) <= 0) return false;
    for (std::size_t j = 0; j < p; ++j)
      if (h.H(i, j) != 0) return false;
    for (std::size_t r = 0; r < i; ++r)
      if (h.H(r, p) < 0 || h.H(r, p) >= h.H(i, p)) return false;
    if (i > 0 && p <= h.pivot_cols[i - 1]) return false;
  }
  for (std::size_t i = h.rank; i < h.H.rows(); ++i)
    for (std::size_t j = 0; j < h.H.cols(); ++j)
      if (h.H(i, j) != 0) return false;
  return true;
}

}  // namespace

TEST_CASE("hnf fixed examples") {
  const HermiteForm id = hnf(IntMatrix::identity(2));
  CHECK(id.H == IntMatrix::identity(2));
  CHECK(id.U == IntMatrix::identity(2));

  const IntMatrix a{{2, 4}, {0, 2}};
  const HermiteForm h = hnf(a);
  CHECK(h.H == IntMatrix{{2, 0}, {0, 2}});
  CHECK(h.U == IntMatrix{{1, -2}, {0, 1}});
  CHECK(h.U * a == h.H);

  const HermiteForm z = hnf(IntMatrix::zero(3, 2));
  CHECK(z.H.is_zero());
  CHECK(z.rank == 0);
}

TEST_CASE("snf fixed examples") {
  CHECK(snf(IntMatrix{{2, 0}, {0, 2}}).factors == std::vector<Integer>{2, 2});
  const IntMatrix b{{4, 2}, {2, 0}};
  const SmithForm fb = snf(b);
  CHECK(fb.factors == std::vector<Integer>{2, 2});
  check_smith(b, fb);
  const SmithForm p = snf(IntMatrix{{1, 0}, {0, 0}});
  CHECK(p.factors == std::vector<Integer>{1});
  CHECK(p.S.row_vector(1) == IntVector{0, 0});
  const SmithForm empty = snf(IntMatrix(0, 0));
  CHECK(empty.factors.empty());
}

TEST_CASE("quotient_structure examples") {
  const AbelianStructure q = quotient_structure(Lattice::full(2), Lattice::scaled(2, 2));
  CHECK(q.free_rank == 0);
  CHECK(q.torsion == std::vector<Integer>{2, 2});
  CHECK(quotient_structure(Lattice::full(2), Lattice::full(2)).is_trivial());
  const AbelianStructure r = quotient_structure(Lattice::full(2), Lattice(IntMatrix{{2, 0}}));
  CHECK(r.free_rank == 1);
  CHECK(r.torsion == std::vector<Integer>{2});
  CHECK_THROWS_AS(quotient_structure(Lattice::scaled(2, 2), Lattice::full(2)), Error);
}

TEST_CASE("preimage examples") {
  const IntMatrix b{{4, 2}, {2, 0}};
  CHECK(preimage_lattice(b, Lattice::scaled(2, 4)) == Lattice::scaled(2, 2));
  const Lattice l(IntMatrix{{3, 1}, {0, 5}});
  CHECK(preimage_lattice(IntMatrix::identity(2), l) == l);
  CHECK(preimage_lattice(IntMatrix::zero(2, 2), l) == Lattice::full(2));
}

TEST_CASE("saturate examples") {
  CHECK(saturate(Lattice(IntMatrix{{2, 0}})) == Lattice(IntMatrix{{1, 0}}));
  CHECK(saturate(Lattice::scaled(2, 2)) == Lattice::full(2));
  CHECK(saturate(Lattice(IntMatrix{{2, 4}})) == Lattice(IntMatrix{{1, 2}}));
}

TEST_CASE("snf agrees with determinantal divisors") {
  for (int trial = 0; trial < 1500; ++trial) {
    const auto r = static_cast<std::size_t>(uniform(1, 5));
    const auto c = static_cast<std::size_t>(uniform(1, 5));
    const IntMatrix a = random_matrix(r, c, uniform(0, 2) == 0 ? 2 : 9);
    const SmithForm f = snf(a);
    Integer prod = 1;
    for (std::size_t k = 1; k <= std::min(r, c); ++k) {
      const Integer g = minor_gcd(a, k);
      if (k <= f.factors.size()) {
        prod *= f.factors[k - 1];
        CHECK(g == prod);
      } else {
        CHECK(g == 0);
      }
    }
  }
}

TEST_CASE("snf and hnf random properties") {
  for (int trial = 0; trial < 3000; ++trial) {
    const auto r = static_cast<std::size_t>(uniform(0, 6));
    const auto c = static_cast<std::size_t>(uniform(0, 6));
    const IntMatrix a = random_matrix(r, c);
    const SmithForm f = snf(a);
    check_smith(a, f);
    const IntMatrix w = random_unimodular(r);
    const IntMatrix v = random_unimodular(c);
    CHECK(snf(w * a * v).factors == f.factors);

    const HermiteForm h = hnf(a);
    CHECK(h.U * a == h.H);
    CHECK(is_unimodular(h.U));
    CHECK(hnf_is_canonical(h));
    CHECK(hnf(w * a).H == h.H);
  }
}

TEST_CASE("lattice properties") {
  for (int trial = 0; trial < 500; ++trial) {
    const auto n = static_cast<std::size_t>(uniform(1, 4));
    IntMatrix gens = random_matrix(n, n, 6);
    if (naive_det(gens) == 0) continue;
    const Lattice sub(gens);
    const AbelianStructure q = quotient_structure(Lattice::full(n), sub);
    CHECK(q.free_rank == 0);
    CHECK(*q.order() == abs(naive_det(gens)));

    const Lattice partial(random_matrix(static_cast<std::size_t>(uniform(0, static_cast<long>(n))), n, 6));
    const Lattice s = saturate(partial);
    CHECK(saturate(s) == s);
    CHECK(quotient_structure(s, partial).free_rank == 0);
    CHECK(quotient_structure(Lattice::full(n), s).torsion.empty());

    const Lattice other(random_matrix(n, n, 4));
    const Lattice sum = lattice_sum(sub, other);
    const Lattice cap = lattice_intersection(sub, other);
    CHECK(sum.contains(sub));
    CHECK(sum.contains(other));
    CHECK(sub.contains(cap));
    CHECK(other.contains(cap));
  }
}

TEST_CASE("integer kernel and solve") {
  for (int trial = 0; trial < 500; ++trial) {
    const IntMatrix a = random_matrix(static_cast<std::size_t>(uniform(1, 4)),
                                      static_cast<std::size_t>(uniform(1, 5)), 5);
    const IntMatrix k = integer_kernel(a);
    for (std::size_t i = 0; i < k.rows(); ++i) CHECK(is_zero(a * k.row_vector(i)));
    IntVector x(a.cols());
    for (auto& e : x) e = uniform(-4, 4);
    const IntVector b = a * x;
    const auto y = solve_integer(a, b);
    REQUIRE(y.has_value());
    CHECK(a * *y == b);
  }
  CHECK_FALSE(solve_integer(IntMatrix{{2, 0}, {0, 2}}, IntVector{1, 0}).has_value());
}

TEST_CASE("intermediate lattices of a cyclic quotient") {
  // Z / 12Z has six subgroups.
  CHECK(intermediate_lattices(Lattice::full(1), Lattice::scaled(1, 12), 100).size() == 6);
  // (Z/2)^2 has five.
  CHECK(intermediate_lattices(Lattice::full(2), Lattice::scaled(2, 2), 100).size() == 5);
  CHECK_THROWS_AS(intermediate_lattices(Lattice::full(2), Lattice::scaled(2, 64), 10), Error);
}

TEST_CASE("finite order in GL(n, Z)") {
  CHECK(finite_order(IntMatrix::identity(3)) == 1);
  CHECK(finite_order(IntMatrix{{0, -1}, {1, -1}}) == 3);
  CHECK(finite_order(IntMatrix{{0, -1}, {1, 1}}) == 6);
  CHECK(finite_order(IntMatrix{{0, -1}, {1, 0}}) == 4);
  CHECK(finite_order(IntMatrix{{1, 1}, {0, 1}}) == 0);
  CHECK(finite_order(IntMatrix{{5, 2}, {2, 1}}) == 0);
  // Orders realizable in GL(2, Z) are 1, 2, 3, 4, 6.
  CHECK(finite_order_lcm(2) == 12);
}
