#pragma once

#include <optional>
#include <vector>

#include "nilcert/matrix.hpp"

namespace nilcert {

/// Row Hermite normal form: U * A = H, U unimodular. Nonzero rows of H come
/// first, pivots are positive, and entries above each pivot lie in [0, pivot).
struct HermiteForm {
  IntMatrix H;
  IntMatrix U;
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;
};

/// U * A * V = S with S diagonal and d_1 | d_2 | ... on the nonzero diagonal.
struct SmithForm {
  IntMatrix S;
  IntMatrix U;
  IntMatrix V;
  /// Nonzero diagonal entries, all positive; length equals the rank.
  std::vector<Integer> factors;
};

HermiteForm hnf(const IntMatrix& a);
SmithForm snf(const IntMatrix& a);

/// Basis (rows, canonical HNF) of {y : a * y = 0}.
IntMatrix integer_kernel(const IntMatrix& a);

/// Some integer x with a * x = b, if one exists.
std::optional<IntVector> solve_integer(const IntMatrix& a, const IntVector& b);

}  // namespace nilcert
