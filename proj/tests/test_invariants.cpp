#include <doctest.h>

#include "nilcert/invariants.hpp"
#include "support.hpp"

using namespace nilcert;
using testing_support::uniform;

namespace {

// Legendre-style exponent sum, written out term by term.
Integer minkowski_oracle(unsigned long n) {
  Integer out = 1;
  for (unsigned long p = 2; p <= n + 1; ++p) {
    bool prime = p > 1;
    for (unsigned long d = 2; d < p; ++d)
      if (p % d == 0) prime = false;
    if (!prime) continue;
    unsigned long e = 0;
    for (unsigned long pi = 1;; pi *= p) {
      const unsigned long denom = pi * (p - 1);
      if (denom > n) break;
      e += n / denom;
    }
    for (unsigned long i = 0; i < e; ++i) out *= p;
  }
  return out;
}

Integer signed_permutations(unsigned long n) {
  Integer out = 1;
  for (unsigned long i = 1; i <= n; ++i) out *= 2 * i;
  return out;
}

SemidirectLattice klein_s1() {
  return SemidirectLattice(SemidirectGroup(IntMatrix{{-1, 0}, {0, 1}}), Lattice::full(2), 1);
}

}  // namespace

TEST_CASE("minkowski bounds") {
  CHECK(minkowski_bound(1) == 2);
  CHECK(minkowski_bound(2) == 24);
  CHECK(minkowski_bound(3) == 48);
  CHECK(minkowski_bound(4) == 5760);
  for (unsigned long n = 1; n <= 12; ++n) {
    CHECK(minkowski_bound(n) == minkowski_oracle(n));
    if (n <= 4) CHECK(mpz_divisible_p(minkowski_bound(n).get_mpz_t(), signed_permutations(n).get_mpz_t()));
  }
  // The hexagonal subgroup of GL(2, Z) has order 12.
  CHECK(minkowski_bound(2) % 12 == 0);
  CHECK_THROWS_AS(minkowski_bound(0), Error);
}

TEST_CASE("euler length bound") {
  CHECK(euler_length_bound(8) == 3);
  CHECK(euler_length_bound(1) == 0);
  CHECK(euler_length_bound(-12) == 3);
  for (long chi = 1; chi <= 1024; ++chi) {
    for (long sign : {1, -1}) {
      const std::size_t r = euler_length_bound(sign * chi);
      CHECK((1L << r) <= chi);
      CHECK(chi < (1L << (r + 1)));
    }
  }
  CHECK_THROWS_AS(euler_length_bound(0), Error);
}

TEST_CASE("disc-sym2 upper bounds") {
  for (long k = 1; k <= 10; ++k) {
    const DiscSym2Bound d = discsym2_upper(TwoStepLattice::heisenberg(k));
    CHECK(d.f == 1);
    CHECK(d.b == 2);
  }
  CHECK(discsym2_upper(TwoStepLattice::abelian(0, 3)) == DiscSym2Bound{3, 0});
  CHECK(discsym2_upper(SemidirectLattice(SemidirectGroup(IntMatrix::identity(2)), Lattice::full(2))) ==
        DiscSym2Bound{3, 0});
  CHECK(discsym2_upper(sol3_gamma(0)) == DiscSym2Bound{0, 0});
  CHECK(discsym2_upper(klein_s1()) == DiscSym2Bound{2, 0});
}

TEST_CASE("lexicographic order") {
  for (int trial = 0; trial < 1000; ++trial) {
    const DiscSym2Bound x{static_cast<std::size_t>(uniform(0, 4)), static_cast<std::size_t>(uniform(0, 4))};
    const DiscSym2Bound y{static_cast<std::size_t>(uniform(0, 4)), static_cast<std::size_t>(uniform(0, 4))};
    const bool geq = x.f > y.f || (x.f == y.f && x.b >= y.b);
    CHECK((x >= y) == geq);
    CHECK(((x < y) || (x == y) || (x > y)));
    CHECK((x <= y || y <= x));
  }
}

TEST_CASE("verify round trip over generated certificates") {
  for (unsigned k = 0; k <= 5; ++k) CHECK(verify_certificate(sol3_tower(k)));
  for (long k : {1, 2, 3})
    for (long p : {2, 3, 5})
      for (unsigned a : {2u, 3u}) CHECK(verify_certificate(heisenberg_witness(k, p, a)));
  const TwoStepLattice h = TwoStepLattice::heisenberg(2);
  const NilSublattice gamma(h, Lattice(IntMatrix{{3, 1}, {0, 2}}), Lattice(IntMatrix{{6}}));
  CHECK(verify_certificate(subnormal_series(h, gamma)));
}

TEST_CASE("tampered certificates are rejected") {
  const SeriesCertificate good = sol3_tower(3);
  REQUIRE(verify_certificate(good));

  SeriesCertificate c = good;
  c.chain[1].quotient.torsion = {2, 4};
  CHECK_FALSE(verify_certificate(c));

  c = good;
  c.total_index = 65;
  CHECK_FALSE(verify_certificate(c));

  c = good;
  c.min_length = 2;
  CHECK_FALSE(verify_certificate(c));

  c = good;
  c.chain[0].normality_verified = false;
  CHECK_FALSE(verify_certificate(c));

  c = good;
  c.chain[1].subgroup = sol3_gamma(1, 1, 1);
  CHECK_FALSE(verify_certificate(c));

  c = good;
  c.closure_size += 1;
  CHECK_FALSE(verify_certificate(c));

  SeriesCertificate w = heisenberg_witness(1, 3, 2);
  w.profile = std::pair<std::size_t, std::size_t>{2, 1};
  CHECK_FALSE(verify_certificate(w));

  SeriesCertificate mixed = good;
  mixed.base = NilSublattice::whole(TwoStepLattice::heisenberg(1));
  CHECK_THROWS_AS(verify_certificate(mixed), Error);
}
