#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nilcert/matrix.hpp"
#include "nilcert/normal_forms.hpp"

namespace nilcert {

/// Finitely generated abelian group Z^free_rank + Z/d_1 + ... with d_i | d_{i+1}
/// and every d_i > 1.
struct AbelianStructure {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;

  /// From Smith factors of a relation matrix on `generators` generators.
  static AbelianStructure from_factors(const std::vector<Integer>& factors,
                                       std::size_t generators);
  /// Cokernel of the row span of `relations` (rows live in Z^cols).
  static AbelianStructure cokernel(const IntMatrix& relations);

  [[nodiscard]] bool is_trivial() const { return free_rank == 0 && torsion.empty(); }
  [[nodiscard]] bool is_finite() const { return free_rank == 0; }
  /// Order when finite.
  [[nodiscard]] std::optional<Integer> order() const;
  /// Minimal number of generators.
  [[nodiscard]] std::size_t rank() const { return free_rank + torsion.size(); }
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const AbelianStructure&, const AbelianStructure&) = default;
};

/// Sublattice of Z^n stored by its canonical row HNF basis.
class Lattice {
 public:
  Lattice() = default;
  /// Row span of `generators`.
  explicit Lattice(const IntMatrix& generators);
  Lattice(std::size_t ambient_dim, const std::vector<IntVector>& generators);

  static Lattice full(std::size_t n);
  static Lattice zero(std::size_t n);
  static Lattice scaled(std::size_t n, const Integer& s);
  static Lattice diagonal(const std::vector<Integer>& d);

  [[nodiscard]] std::size_t ambient_dim() const noexcept { return basis_.cols(); }
  [[nodiscard]] std::size_t rank() const noexcept { return basis_.rows(); }
  [[nodiscard]] bool is_full_rank() const noexcept { return rank() == ambient_dim(); }
  [[nodiscard]] const IntMatrix& basis() const noexcept { return basis_; }
  [[nodiscard]] std::vector<IntVector> generators() const { return basis_.row_list(); }

  /// Coordinates of v in the stored basis, or nullopt when v is not in the lattice.
  [[nodiscard]] std::optional<IntVector> coordinates(const IntVector& v) const;
  [[nodiscard]] bool contains(const IntVector& v) const { return coordinates(v).has_value(); }
  [[nodiscard]] bool contains(const Lattice& sub) const;

  /// |Z^n / L| for a full-rank lattice.
  [[nodiscard]] Integer covolume() const;

  friend bool operator==(const Lattice&, const Lattice&) = default;

 private:
  IntMatrix basis_;
  std::vector<std::size_t> pivots_;
};

Lattice lattice_sum(const Lattice& a, const Lattice& b);
Lattice lattice_intersection(const Lattice& a, const Lattice& b);
/// { m * v : v in L } for m with m.cols() == L.ambient_dim().
Lattice lattice_image(const IntMatrix& m, const Lattice& l);

/// Invariant factors of sup/sub; throws NotASublattice when sub is not contained.
AbelianStructure quotient_structure(const Lattice& sup, const Lattice& sub);

/// { v in Z^n : m * v in L } for square m.
Lattice preimage_lattice(const IntMatrix& m, const Lattice& l);
/// Rectangular variant: m is k x n, L lives in Z^k, result lives in Z^n.
Lattice preimage_general(const IntMatrix& m, const Lattice& l);

/// Every lattice M with sub <= M <= sup, including both ends; sub must have
/// finite index in sup. Throws TooLarge once more than `limit` are found.
std::vector<Lattice> intermediate_lattices(const Lattice& sup, const Lattice& sub,
                                           std::size_t limit);

/// Smallest lattice of the same rank containing L with torsion-free cokernel.
Lattice saturate(const Lattice& l);

}  // namespace nilcert
