#pragma once

#include <optional>
#include <vector>

#include "nilcert/lattice.hpp"

namespace nilcert {

struct SeriesCertificate;

/// Z^n x|_A Z with holonomy A in GL(n, Z).
class SemidirectGroup {
 public:
  SemidirectGroup() = default;
  /// Throws NotAnAutomorphism unless |det A| = 1.
  explicit SemidirectGroup(IntMatrix holonomy);

  [[nodiscard]] std::size_t n() const noexcept { return holonomy_.rows(); }
  [[nodiscard]] const IntMatrix& holonomy() const noexcept { return holonomy_; }
  [[nodiscard]] const IntMatrix& holonomy_inverse() const noexcept { return inverse_; }
  /// A^t for any integer t (negative t uses the exact inverse).
  [[nodiscard]] IntMatrix holonomy_power(const Integer& t) const;
  /// tr(A) > 2, the condition for Z^2 x|_A Z to be a lattice of Sol^3.
  [[nodiscard]] bool is_sol3_type() const;

  friend bool operator==(const SemidirectGroup& a, const SemidirectGroup& b) {
    return a.holonomy_ == b.holonomy_;
  }

 private:
  IntMatrix holonomy_;
  IntMatrix inverse_;
};

struct SemidirectElement {
  IntVector v;
  Integer t;

  static SemidirectElement identity(std::size_t n) { return {IntVector(n), 0}; }
  friend bool operator==(const SemidirectElement&, const SemidirectElement&) = default;
};

/// (v,t)(w,s) = (v + A^t w, t + s)
SemidirectElement mul(const SemidirectGroup& g, const SemidirectElement& a,
                      const SemidirectElement& b);
/// (v,t)^{-1} = (-A^{-t} v, -t)
SemidirectElement inv(const SemidirectGroup& g, const SemidirectElement& a);
/// a b a^{-1} by the closed formula ((Id - A^s) v + A^t w, s), cross-checked
/// against the triple product.
SemidirectElement conj(const SemidirectGroup& g, const SemidirectElement& a,
                       const SemidirectElement& b);
SemidirectElement commutator(const SemidirectGroup& g, const SemidirectElement& a,
                             const SemidirectElement& b);

/// Subgroup L x| mZ with L full rank and A^m-invariant.
class SemidirectLattice {
 public:
  SemidirectLattice() = default;
  /// Validates A^m L = L, full rank, and m >= 1.
  SemidirectLattice(SemidirectGroup group, Lattice fiber, Integer m = 1);

  [[nodiscard]] const SemidirectGroup& group() const noexcept { return group_; }
  [[nodiscard]] const Lattice& fiber() const noexcept { return fiber_; }
  [[nodiscard]] const Integer& translation() const noexcept { return m_; }
  [[nodiscard]] std::vector<SemidirectElement> generators() const;
  /// The subgroup as a lattice in Z^{n+1} (coordinates (v, t)).
  [[nodiscard]] Lattice as_product_lattice() const;

  friend bool operator==(const SemidirectLattice& a, const SemidirectLattice& b) {
    return a.group_ == b.group_ && a.fiber_ == b.fiber_ && a.m_ == b.m_;
  }

 private:
  SemidirectGroup group_;
  Lattice fiber_;
  Integer m_ = 1;
};

bool contains(const SemidirectLattice& s, const SemidirectElement& g);
/// s is a subgroup of g (same parent group).
bool is_subgroup(const SemidirectLattice& g, const SemidirectLattice& s);
/// s is normalized by g: generator conjugation test in both directions.
bool is_normal_in(const SemidirectLattice& g, const SemidirectLattice& s);

/// { (v,t) in G : (Id - A^{m_S}) v in S.L }.
SemidirectLattice normalizer(const SemidirectLattice& g, const SemidirectLattice& s);
/// Invariant factors of G/S; throws NotNormal or NotAbelianQuotient.
AbelianStructure quotient(const SemidirectLattice& g, const SemidirectLattice& s);
/// All subgroups strictly between S and G, sorted by (index over S, HNF).
std::vector<SemidirectLattice> intermediates(const SemidirectLattice& g,
                                             const SemidirectLattice& s,
                                             const Integer& max_quotient = 10000);

struct SemidirectCenter {
  std::size_t rank = 0;
  AbelianStructure structure;
  /// Fixed fiber part L cap ker(A^m - Id).
  Lattice fixed_fiber;
  /// Smallest positive central translation, 0 when none.
  Integer central_translation;
};

SemidirectCenter center_rank(const SemidirectLattice& g);
/// Rank of the center of G / Z(G).
std::size_t inner_center_rank(const SemidirectLattice& g);

// Lattices of the worked Sol^3 example, A = [[5,2],[2,1]].
SemidirectGroup sol3_group();
/// Gamma_k = 2^k Z^2 x| Z.
SemidirectLattice sol3_gamma(unsigned k);
/// Gamma_k^{(i,j)}: (1,0) -> 2^k Z x 2^{k-1} Z, (0,1) -> 2^{k-1} Z x 2^k Z,
/// (1,1) -> { v in 2^{k-1} Z^2 : v1 + v2 in 2^k Z }, (0,0) -> Gamma_{k-1}.
SemidirectLattice sol3_gamma(unsigned k, int i, int j);

/// [g : s] for s <= g.
Integer index_in(const SemidirectLattice& g, const SemidirectLattice& s);
/// s / prev lies in the image of Z(top).
bool is_central_layer(const SemidirectLattice& top, const SemidirectLattice& prev,
                      const SemidirectLattice& next);

struct ClosureReport {
  bool complete = false;
  std::size_t size = 0;
  /// max [N(X) : X] over the reached X.
  Integer layer_bound = 1;
  std::vector<SemidirectLattice> reached;
};

/// Breadth-first search from `start` over X -> N_top(X) and the subgroups
/// strictly between X and N_top(X). Stops (complete = false) past max_size.
ClosureReport subnormal_closure(const SemidirectLattice& top, const SemidirectLattice& start,
                                std::size_t max_size = 4096);

/// Tower Gamma_k <= ... <= Gamma_0 with normalizer and closure verification.
SeriesCertificate sol3_tower(unsigned k);

/// Checks on generators that (v,t) -> (factor v, t) is an isomorphism from
/// `source` onto `target`.
bool scaling_map_check(const SemidirectLattice& source, const Integer& factor,
                       const SemidirectLattice& target);
/// f_k : Gamma -> Gamma_k, (v,t) -> (2^k v, t).
bool scaling_iso_check(unsigned k);

}  // namespace nilcert
