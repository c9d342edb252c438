#include "nilcert/matrix.hpp"

#include <map>
#include <mutex>
#include <sstream>
#include <utility>

namespace nilcert {

Integer floor_mod(const Integer& a, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  if (r < 0) r += abs(m);
  return r;
}

Integer floor_div(const Integer& a, const Integer& m) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return q;
}

std::string to_decimal(const Integer& a) { return a.get_str(10); }

Integer parse_integer(const std::string& text) {
  Integer out;
  std::string body = text;
  if (!body.empty() && body.front() == '+') body.erase(body.begin());
  if (body.empty() || out.set_str(body, 10) != 0) {
    throw Error(ErrorCode::ParseError, "not a decimal integer: '" + text + "'");
  }
  return out;
}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw Error(ErrorCode::DimensionMismatch, "ragged matrix literal");
    }
    for (long x : r) data_.emplace_back(x);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1;
  return out;
}

IntMatrix IntMatrix::diagonal(std::span<const Integer> d) {
  IntMatrix out(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out(i, i) = d[i];
  return out;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVector>& rows,
                               std::size_t cols) {
  if (!rows.empty()) cols = rows.front().size();
  IntMatrix out(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw Error(ErrorCode::DimensionMismatch, "ragged row list");
    }
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = rows[i][j];
  }
  return out;
}

IntVector IntMatrix::row_vector(std::size_t i) const {
  auto r = row(i);
  return {r.begin(), r.end()};
}

IntVector IntMatrix::col_vector(std::size_t j) const {
  IntVector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

std::vector<IntVector> IntMatrix::row_list() const {
  std::vector<IntVector> out;
  out.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out.push_back(row_vector(i));
  return out;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

bool IntMatrix::is_zero() const {
  for (const auto& x : data_)
    if (x != 0) return false;
  return true;
}

bool IntMatrix::is_identity() const {
  if (!is_square()) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

Integer IntMatrix::determinant() const {
  if (!is_square()) {
    throw Error(ErrorCode::DimensionMismatch, "determinant of non-square matrix");
  }
  // Bareiss fraction-free elimination.
  IntMatrix m = *this;
  const std::size_t n = rows_;
  if (n == 0) return 1;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer num = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(m(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

IntMatrix IntMatrix::row_block(std::size_t first, std::size_t count) const {
  IntMatrix out(count, cols_);
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(first + i, j);
  return out;
}

IntMatrix IntMatrix::col_block(std::size_t first, std::size_t count) const {
  IntMatrix out(rows_, count);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < count; ++j) out(i, j) = (*this)(i, first + j);
  return out;
}

IntMatrix IntMatrix::hconcat(const IntMatrix& other) const {
  if (rows_ != other.rows_) {
    throw Error(ErrorCode::DimensionMismatch, "hconcat row mismatch");
  }
  IntMatrix out(rows_, cols_ + other.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j);
    for (std::size_t j = 0; j < other.cols_; ++j)
      out(i, cols_ + j) = other(i, j);
  }
  return out;
}

IntMatrix IntMatrix::vconcat(const IntMatrix& other) const {
  if (rows_ == 0) return other;
  if (other.rows_ == 0) return *this;
  if (cols_ != other.cols_) {
    throw Error(ErrorCode::DimensionMismatch, "vconcat column mismatch");
  }
  IntMatrix out(rows_ + other.rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j);
  for (std::size_t i = 0; i < other.rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(rows_ + i, j) = other(i, j);
  return out;
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
}

void IntMatrix::swap_cols(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
}

void IntMatrix::add_row_multiple(std::size_t dst, std::size_t src,
                                 const Integer& factor) {
  if (factor == 0) return;
  for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += factor * (*this)(src, j);
}

void IntMatrix::add_col_multiple(std::size_t dst, std::size_t src,
                                 const Integer& factor) {
  if (factor == 0) return;
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += factor * (*this)(i, src);
}

void IntMatrix::negate_row(std::size_t i) {
  for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
}

void IntMatrix::negate_col(std::size_t j) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = -(*this)(i, j);
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j);
    os << ']';
  }
  os << ']';
  return os.str();
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix product shape mismatch");
  }
  IntMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Integer& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix sum shape mismatch");
  }
  IntMatrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) += b(i, j);
  return out;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix difference shape mismatch");
  }
  IntMatrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) -= b(i, j);
  return out;
}

IntMatrix operator*(const Integer& s, const IntMatrix& a) {
  IntMatrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) *= s;
  return out;
}

IntVector operator*(const IntMatrix& a, const IntVector& v) {
  if (a.cols() != v.size()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix-vector shape mismatch");
  }
  IntVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * v[j];
  return out;
}

IntVector add(const IntVector& a, const IntVector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vector sum");
  IntVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

IntVector sub(const IntVector& a, const IntVector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vector difference");
  IntVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

IntVector neg(const IntVector& a) {
  IntVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
  return out;
}

IntVector scale(const Integer& s, const IntVector& a) {
  IntVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
  return out;
}

bool is_zero(const IntVector& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

IntMatrix power(const IntMatrix& a, long exponent) {
  if (!a.is_square()) {
    throw Error(ErrorCode::DimensionMismatch, "power of non-square matrix");
  }
  IntMatrix base = exponent < 0 ? unimodular_inverse(a) : a;
  unsigned long e = exponent < 0 ? static_cast<unsigned long>(-(exponent + 1)) + 1
                                 : static_cast<unsigned long>(exponent);
  IntMatrix result = IntMatrix::identity(a.rows());
  while (e > 0) {
    if (e & 1UL) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

IntMatrix unimodular_inverse(const IntMatrix& a) {
  if (!a.is_square()) {
    throw Error(ErrorCode::DimensionMismatch, "inverse of non-square matrix");
  }
  const std::size_t n = a.rows();
  // Gauss-Jordan over Z; succeeds exactly when det = +-1.
  IntMatrix m = a.hconcat(IntMatrix::identity(n));
  for (std::size_t c = 0; c < n; ++c) {
    for (;;) {
      std::size_t best = n;
      for (std::size_t r = c; r < n; ++r) {
        if (m(r, c) != 0 && (best == n || abs(m(r, c)) < abs(m(best, c)))) best = r;
      }
      if (best == n) throw Error(ErrorCode::NotAnAutomorphism, "matrix is singular");
      m.swap_rows(c, best);
      bool clean = true;
      for (std::size_t r = c + 1; r < n; ++r) {
        if (m(r, c) == 0) continue;
        m.add_row_multiple(r, c, -floor_div(m(r, c), m(c, c)));
        if (m(r, c) != 0) clean = false;
      }
      if (clean) break;
    }
    if (abs(m(c, c)) != 1) {
      throw Error(ErrorCode::NotAnAutomorphism, "matrix is not unimodular");
    }
    if (m(c, c) < 0) m.negate_row(c);
  }
  for (std::size_t c = n; c-- > 0;) {
    for (std::size_t r = 0; r < c; ++r) m.add_row_multiple(r, c, -m(r, c));
  }
  return m.col_block(n, n);
}

namespace {

// Smallest n such that GL(n, Z) has an element of order o: the sum of
// phi(p^k) over the prime-power parts of o, less one when o = 2 mod 4.
long order_dimension(long o) {
  long cost = 0;
  long rest = o;
  for (long p = 2; rest > 1; ++p) {
    if (p * p > rest) p = rest;
    if (rest % p != 0) continue;
    long pk = 1;
    while (rest % p == 0) {
      rest /= p;
      pk *= p;
    }
    cost += pk / p * (p - 1);
  }
  if (o % 4 == 2) cost -= 1;
  return cost;
}

}  // namespace

Integer finite_order_lcm(std::size_t n) {
  static std::map<std::size_t, Integer> cache;
  static std::mutex guard;
  std::lock_guard lock(guard);
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  // Every prime-power part p^k of a valid order has phi(p^k) <= n + 1, and
  // the parts multiply to far less than this window for the sizes we meet.
  Integer l = 1;
  const long limit = 200000;
  for (long o = 1; o <= limit; ++o) {
    if (order_dimension(o) <= static_cast<long>(n)) {
      Integer oo = o;
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), oo.get_mpz_t());
    }
  }
  cache.emplace(n, l);
  return l;
}

long finite_order(const IntMatrix& a) {
  if (!a.is_square()) {
    throw Error(ErrorCode::DimensionMismatch, "order of non-square matrix");
  }
  const Integer l = finite_order_lcm(a.rows());
  if (!l.fits_slong_p() || !power(a, l.get_si()).is_identity()) return 0;
  const long big = l.get_si();
  for (long o = 1; o <= big; ++o) {
    if (big % o == 0 && power(a, o).is_identity()) return o;
  }
  return big;
}

}  // namespace nilcert
