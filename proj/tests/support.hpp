#pragma once

#include <random>

#include "nilcert/matrix.hpp"

namespace testing_support {

using nilcert::IntMatrix;
using nilcert::Integer;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20261014);
  return gen;
}

inline long uniform(long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng());
}

inline IntMatrix random_matrix(std::size_t rows, std::size_t cols, long bound = 9) {
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = uniform(-bound, bound);
  return m;
}

// Product of random elementary operations; determinant +-1 by construction.
inline IntMatrix random_unimodular(std::size_t n, int steps = 12) {
  IntMatrix u = IntMatrix::identity(n);
  if (n == 0) return u;
  for (int s = 0; s < steps; ++s) {
    const auto i = static_cast<std::size_t>(uniform(0, static_cast<long>(n) - 1));
    const auto j = static_cast<std::size_t>(uniform(0, static_cast<long>(n) - 1));
    switch (uniform(0, 2)) {
      case 0:
        if (i != j) u.add_row_multiple(i, j, uniform(-3, 3));
        break;
      case 1:
        u.swap_rows(i, j);
        break;
      default:
        u.negate_row(i);
    }
  }
  return u;
}

// Cofactor expansion, deliberately independent of the library determinant.
inline Integer naive_det(const IntMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  if (n == 1) return m(0, 0);
  Integer out = 0;
  for (std::size_t j = 0; j < n; ++j) {
    IntMatrix minor(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t c = 0, cc = 0; c < n; ++c)
        if (c != j) minor(r - 1, cc++) = m(r, c);
    const Integer term = m(0, j) * naive_det(minor);
    out += (j % 2 == 0) ? term : Integer(-term);
  }
  return out;
}

}  // namespace testing_support
