#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "nilcert/error.hpp"

namespace nilcert {

using Integer = mpz_class;
using IntVector = std::vector<Integer>;

/// Euclidean remainder in [0, |m|).
Integer floor_mod(const Integer& a, const Integer& m);
/// Floor division consistent with floor_mod.
Integer floor_div(const Integer& a, const Integer& m);
std::string to_decimal(const Integer& a);
Integer parse_integer(const std::string& text);

/// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix zero(std::size_t rows, std::size_t cols) {
    return IntMatrix(rows, cols);
  }
  static IntMatrix diagonal(std::span<const Integer> d);
  /// Rows given as vectors; all must share one length (cols is used when
  /// the list is empty).
  static IntMatrix from_rows(const std::vector<IntVector>& rows,
                             std::size_t cols);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] bool empty() const noexcept { return data_.empty(); }
  [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }

  Integer& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const Integer& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  [[nodiscard]] std::span<Integer> row(std::size_t i) {
    return {data_.data() + i * cols_, cols_};
  }
  [[nodiscard]] std::span<const Integer> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  [[nodiscard]] IntVector row_vector(std::size_t i) const;
  [[nodiscard]] IntVector col_vector(std::size_t j) const;
  [[nodiscard]] std::vector<IntVector> row_list() const;

  [[nodiscard]] IntMatrix transpose() const;
  [[nodiscard]] bool is_zero() const;
  [[nodiscard]] bool is_identity() const;
  [[nodiscard]] Integer determinant() const;

  /// Keep rows [first, first+count).
  [[nodiscard]] IntMatrix row_block(std::size_t first, std::size_t count) const;
  [[nodiscard]] IntMatrix col_block(std::size_t first, std::size_t count) const;
  /// Horizontal concatenation [*this | other].
  [[nodiscard]] IntMatrix hconcat(const IntMatrix& other) const;
  /// Vertical concatenation.
  [[nodiscard]] IntMatrix vconcat(const IntMatrix& other) const;

  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);
  /// row[dst] += factor * row[src]
  void add_row_multiple(std::size_t dst, std::size_t src, const Integer& factor);
  void add_col_multiple(std::size_t dst, std::size_t src, const Integer& factor);
  void negate_row(std::size_t i);
  void negate_col(std::size_t j);

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  [[nodiscard]] std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator*(const Integer& s, const IntMatrix& a);
IntVector operator*(const IntMatrix& a, const IntVector& v);

IntVector add(const IntVector& a, const IntVector& b);
IntVector sub(const IntVector& a, const IntVector& b);
IntVector neg(const IntVector& a);
IntVector scale(const Integer& s, const IntVector& a);
bool is_zero(const IntVector& v);

/// Integer power; negative exponents need a unimodular base.
IntMatrix power(const IntMatrix& a, long exponent);
/// Exact inverse of a unimodular matrix; throws NotAnAutomorphism otherwise.
IntMatrix unimodular_inverse(const IntMatrix& a);

/// lcm of every order a finite-order element of GL(n, Z) can have.
Integer finite_order_lcm(std::size_t n);
/// Order of A in GL(n, Z), or 0 when A has infinite order.
long finite_order(const IntMatrix& a);

}  // namespace nilcert
