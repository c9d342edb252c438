#pragma once

#include <compare>

#include "nilcert/certificate.hpp"

namespace nilcert {

/// M(n) = prod_p p^{e_p}, e_p = sum_{i >= 0} floor(n / (p^i (p - 1))); the order
/// of every finite subgroup of GL(n, Z) divides it.
Integer minkowski_bound(std::size_t n);

/// floor(log2 |chi|); throws ZeroEuler for chi = 0.
std::size_t euler_length_bound(const Integer& chi);

/// (f, b) pairs ordered lexicographically.
struct DiscSym2Bound {
  std::size_t f = 0;
  std::size_t b = 0;

  friend auto operator<=>(const DiscSym2Bound&, const DiscSym2Bound&) = default;
};

/// (rank Z(G), rank Z(G / Z(G))).
DiscSym2Bound discsym2_upper(const GroupRef& g);

/// Re-derives every claim of the certificate. Throws UnresolvableReference when
/// the referenced objects do not have the shape its kind requires.
bool verify_certificate(const SeriesCertificate& c);

}  // namespace nilcert
