#pragma once

#include <string>
#include <vector>

#include "nilcert/lattice.hpp"

namespace nilcert {

/// Q = <a, b, ... | relators> acting on M = Z^free + sum Z/torsion_i.
///
/// Relator words use 'a'.. for the generators and 'A'.. for their inverses.
/// action[i] is the matrix of psi(g_i) on the ambient coordinates of M (free
/// coordinates first); it acts on the left, so cocycles satisfy
/// c(pq) = c(p) + psi(p) c(q).
struct ModuleAction {
  std::size_t generators = 0;
  std::vector<std::string> relators;
  std::size_t free = 0;
  std::vector<Integer> torsion;
  std::vector<IntMatrix> action;

  [[nodiscard]] std::size_t dim() const { return free + torsion.size(); }
  /// Relation lattice R with M = Z^dim / R.
  [[nodiscard]] Lattice relations() const;
};

/// Throws IllDefinedAction unless every psi(g_i) is an automorphism of M and
/// every relator acts trivially.
void validate_action(const ModuleAction& act);

/// Parsed relator: letters as (generator, +1 / -1).
std::vector<std::pair<std::size_t, int>> parse_word(const std::string& word,
                                                    std::size_t generators);

struct CocycleSpace {
  /// Generators of the group, each one M-element per generator of Q, reduced
  /// into the torsion ranges. Orders match structure (free ones last).
  std::vector<std::vector<IntVector>> basis;
  AbelianStructure structure;
  /// The space lifted to Z^{r * dim}, containing R^r.
  Lattice lifted;
};

CocycleSpace z1(const ModuleAction& act);
CocycleSpace b1(const ModuleAction& act);
AbelianStructure h1(const ModuleAction& act);

/// c(w) for the word w, given values on the generators (reduced mod R).
IntVector evaluate_cocycle(const ModuleAction& act, const std::vector<IntVector>& values,
                           const std::string& word);

/// Right-regular Cayley table of a finite group: right[q][i] = q * g_i.
/// Element 0 is the identity; elements are numbered in breadth-first order.
struct CayleyTable {
  std::size_t order = 0;
  std::vector<std::vector<std::size_t>> right;
};

/// Coset enumeration over the trivial subgroup; throws EnumerationFailed once
/// more than max_cosets cosets are live at the same time.
CayleyTable enumerate_group(std::size_t generators, const std::vector<std::string>& relators,
                            std::size_t max_cosets = 200000);

/// Enumerates every crossed homomorphism Q -> M directly. Needs |Q| <= max_group
/// and |M| <= max_module, else TooLarge.
AbelianStructure h1_brute(const ModuleAction& act, std::size_t max_group = 512,
                          std::size_t max_module = 4096);

}  // namespace nilcert
