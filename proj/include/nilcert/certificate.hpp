#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nilcert/nilpotent2.hpp"
#include "nilcert/semidirect.hpp"

namespace nilcert {

/// The two lattice shapes the library models.
using GroupRef = std::variant<SemidirectLattice, TwoStepLattice>;
using SubgroupRef = std::variant<SemidirectLattice, NilSublattice>;

struct ChainLink {
  SubgroupRef subgroup;
  /// subgroup / previous term.
  AbelianStructure quotient;
  bool normality_verified = false;
  bool central = false;
};

/// One step Gamma_j <= Gamma_{j-1} of the Sol^3 tower.
struct TowerLevel {
  unsigned level = 0;
  /// [Gamma : Gamma_level]
  Integer index;
  AbelianStructure quotient;
  bool normalizer_verified = false;
};

/// A verified chain base = L_0 <| L_1 <| ... <| L_m = top of group_ref.
struct SeriesCertificate {
  std::string kind;
  GroupRef group_ref;
  SubgroupRef base;
  std::vector<ChainLink> chain;
  Integer total_index = 1;
  /// Certified lower bound on the number of layers of any equivalent tower.
  std::size_t min_length = 0;
  Integer max_quotient_order = 1;
  /// Every subgroup reachable from base by a subnormal step has been enumerated
  /// and each step has order <= max_quotient_order.
  bool closure_verified = false;
  std::size_t closure_size = 0;
  std::vector<TowerLevel> levels;
  /// (central rank, remaining rank) of a two-layer abelian witness.
  std::optional<std::pair<std::size_t, std::size_t>> profile;
  std::optional<TwoStepLattice> source;
  std::optional<RationalScale> scale;
};

/// Smallest m with bound^m >= total (0 when total == 1).
std::size_t length_lower_bound(const Integer& total, const Integer& layer_bound);

}  // namespace nilcert
