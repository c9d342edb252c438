#include "nilcert/normal_forms.hpp"

namespace nilcert {

namespace {

Integer trunc_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Quotient rounded to the nearest integer, so the remainder is at most |b| / 2.
Integer nearest_div(const Integer& a, const Integer& b) {
  Integer twice = 2 * a + abs(b);
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), twice.get_mpz_t(), Integer(2 * abs(b)).get_mpz_t());
  return b < 0 ? Integer(-q) : q;
}

}  // namespace

HermiteForm hnf(const IntMatrix& a) {
  HermiteForm out{a, IntMatrix::identity(a.rows()), 0, {}};
  IntMatrix& h = out.H;
  IntMatrix& u = out.U;
  const std::size_t m = h.rows();
  std::size_t r = 0;
  for (std::size_t c = 0; c < h.cols() && r < m; ++c) {
    for (;;) {
      std::size_t best = m;
      for (std::size_t i = r; i < m; ++i) {
        if (h(i, c) != 0 && (best == m || abs(h(i, c)) < abs(h(best, c)))) best = i;
      }
      if (best == m) break;
      h.swap_rows(r, best);
      u.swap_rows(r, best);
      bool clean = true;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (h(i, c) == 0) continue;
        Integer q = trunc_div(h(i, c), h(r, c));
        h.add_row_multiple(i, r, -q);
        u.add_row_multiple(i, r, -q);
        if (h(i, c) != 0) clean = false;
      }
      if (clean) break;
    }
    if (r >= m || h(r, c) == 0) continue;
    if (h(r, c) < 0) {
      h.negate_row(r);
      u.negate_row(r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      Integer q = floor_div(h(i, c), h(r, c));
      h.add_row_multiple(i, r, -q);
      u.add_row_multiple(i, r, -q);
    }
    out.pivot_cols.push_back(c);
    ++r;
  }
  out.rank = r;
  return out;
}

SmithForm snf(const IntMatrix& a) {
  SmithForm out{a, IntMatrix::identity(a.rows()), IntMatrix::identity(a.cols()), {}};
  IntMatrix& s = out.S;
  IntMatrix& u = out.U;
  IntMatrix& v = out.V;
  const std::size_t m = s.rows();
  const std::size_t n = s.cols();
  for (std::size_t t = 0; t < m && t < n; ++t) {
    for (;;) {
      // Minimal-absolute-value pivot over the trailing block, re-chosen after
      // every pass so intermediate entries stay small.
      std::size_t pi = m, pj = n;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (s(i, j) != 0 && (pi == m || abs(s(i, j)) < abs(s(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi == m) break;
      s.swap_rows(t, pi);
      u.swap_rows(t, pi);
      s.swap_cols(t, pj);
      v.swap_cols(t, pj);

      bool clear = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (s(i, t) == 0) continue;
        const Integer q = nearest_div(s(i, t), s(t, t));
        s.add_row_multiple(i, t, -q);
        u.add_row_multiple(i, t, -q);
        clear = clear && s(i, t) == 0;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (s(t, j) == 0) continue;
        const Integer q = nearest_div(s(t, j), s(t, t));
        s.add_col_multiple(j, t, -q);
        v.add_col_multiple(j, t, -q);
        clear = clear && s(t, j) == 0;
      }
      if (!clear) continue;
      // Row and column are clear; enforce divisibility of the trailing block.
      std::size_t bad = m;
      for (std::size_t i = t + 1; i < m && bad == m; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!mpz_divisible_p(s(i, j).get_mpz_t(), s(t, t).get_mpz_t())) {
            bad = i;
            break;
          }
      if (bad == m) break;
      s.add_row_multiple(t, bad, 1);
      u.add_row_multiple(t, bad, 1);
    }
    if (s(t, t) == 0) break;
    if (s(t, t) < 0) {
      s.negate_row(t);
      u.negate_row(t);
    }
    out.factors.push_back(s(t, t));
  }
  return out;
}

IntMatrix integer_kernel(const IntMatrix& a) {
  HermiteForm form = hnf(a.transpose());
  const std::size_t q = a.cols();
  IntMatrix basis = form.U.row_block(form.rank, q - form.rank);
  return hnf(basis).H;
}

std::optional<IntVector> solve_integer(const IntMatrix& a, const IntVector& b) {
  if (b.size() != a.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "solve: right-hand side length");
  }
  HermiteForm form = hnf(a.transpose());
  IntVector residual = b;
  IntVector z(a.cols());
  for (std::size_t i = 0; i < form.rank; ++i) {
    const std::size_t c = form.pivot_cols[i];
    const Integer& piv = form.H(i, c);
    if (residual[c] % piv != 0) return std::nullopt;
    z[i] = residual[c] / piv;
    for (std::size_t j = 0; j < residual.size(); ++j) residual[j] -= z[i] * form.H(i, j);
  }
  if (!is_zero(residual)) return std::nullopt;
  IntVector x(a.cols());
  for (std::size_t i = 0; i < form.rank; ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) x[j] += z[i] * form.U(i, j);
  return x;
}

}  // namespace nilcert
