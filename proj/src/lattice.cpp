#include "nilcert/lattice.hpp"

#include <algorithm>
#include <sstream>

namespace nilcert {

AbelianStructure AbelianStructure::from_factors(const std::vector<Integer>& factors,
                                                std::size_t generators) {
  AbelianStructure out;
  out.free_rank = generators - factors.size();
  for (const auto& d : factors)
    if (d > 1) out.torsion.push_back(d);
  return out;
}

AbelianStructure AbelianStructure::cokernel(const IntMatrix& relations) {
  return from_factors(snf(relations).factors, relations.cols());
}

std::optional<Integer> AbelianStructure::order() const {
  if (free_rank != 0) return std::nullopt;
  Integer n = 1;
  for (const auto& d : torsion) n *= d;
  return n;
}

std::string AbelianStructure::to_string() const {
  if (is_trivial()) return "0";
  std::ostringstream os;
  bool first = true;
  if (free_rank > 0) {
    os << "Z";
    if (free_rank > 1) os << "^" << free_rank;
    first = false;
  }
  for (const auto& d : torsion) {
    os << (first ? "" : " + ") << "Z/" << d;
    first = false;
  }
  return os.str();
}

Lattice::Lattice(const IntMatrix& generators) {
  HermiteForm form = hnf(generators);
  basis_ = form.H.row_block(0, form.rank);
  pivots_ = std::move(form.pivot_cols);
}

Lattice::Lattice(std::size_t ambient_dim, const std::vector<IntVector>& generators)
    : Lattice(IntMatrix::from_rows(generators, ambient_dim)) {}

Lattice Lattice::full(std::size_t n) { return Lattice(IntMatrix::identity(n)); }

Lattice Lattice::zero(std::size_t n) { return Lattice(IntMatrix(0, n)); }

Lattice Lattice::scaled(std::size_t n, const Integer& s) {
  return Lattice(s * IntMatrix::identity(n));
}

Lattice Lattice::diagonal(const std::vector<Integer>& d) {
  return Lattice(IntMatrix::diagonal(d));
}

std::optional<IntVector> Lattice::coordinates(const IntVector& v) const {
  if (v.size() != ambient_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "vector length differs from lattice dimension");
  }
  IntVector residual = v;
  IntVector coords(rank());
  for (std::size_t i = 0; i < rank(); ++i) {
    const std::size_t c = pivots_[i];
    const Integer& piv = basis_(i, c);
    if (residual[c] % piv != 0) return std::nullopt;
    coords[i] = residual[c] / piv;
    if (coords[i] == 0) continue;
    for (std::size_t j = c; j < residual.size(); ++j) residual[j] -= coords[i] * basis_(i, j);
  }
  if (!is_zero(residual)) return std::nullopt;
  return coords;
}

bool Lattice::contains(const Lattice& sub) const {
  if (sub.ambient_dim() != ambient_dim()) return false;
  for (std::size_t i = 0; i < sub.rank(); ++i)
    if (!contains(sub.basis_.row_vector(i))) return false;
  return true;
}

Integer Lattice::covolume() const {
  if (!is_full_rank()) {
    throw Error(ErrorCode::NotFiniteIndex, "lattice is not of full rank");
  }
  Integer d = 1;
  for (std::size_t i = 0; i < rank(); ++i) d *= basis_(i, i);
  return d;
}

Lattice lattice_sum(const Lattice& a, const Lattice& b) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "lattice sum dimension");
  }
  return Lattice(a.basis().vconcat(b.basis()));
}

Lattice lattice_intersection(const Lattice& a, const Lattice& b) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "lattice intersection dimension");
  }
  const std::size_t n = a.ambient_dim();
  if (a.rank() == 0 || b.rank() == 0) return Lattice::zero(n);
  // x * Ba = y * Bb  <=>  (x, y) in ker [Ba^T | -Bb^T].
  IntMatrix system = a.basis().transpose().hconcat((Integer(-1) * b.basis()).transpose());
  IntMatrix kernel = integer_kernel(system);
  IntMatrix xs = kernel.col_block(0, a.rank());
  return Lattice(xs * a.basis());
}

Lattice lattice_image(const IntMatrix& m, const Lattice& l) {
  if (m.cols() != l.ambient_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "lattice image dimension");
  }
  if (l.rank() == 0) return Lattice::zero(m.rows());
  return Lattice(l.basis() * m.transpose());
}

AbelianStructure quotient_structure(const Lattice& sup, const Lattice& sub) {
  if (sup.ambient_dim() != sub.ambient_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "quotient of lattices in different dimensions");
  }
  IntMatrix coords(sub.rank(), sup.rank());
  for (std::size_t i = 0; i < sub.rank(); ++i) {
    auto c = sup.coordinates(sub.basis().row_vector(i));
    if (!c) throw Error(ErrorCode::NotASublattice, "sub is not contained in sup");
    for (std::size_t j = 0; j < sup.rank(); ++j) coords(i, j) = (*c)[j];
  }
  return AbelianStructure::from_factors(snf(coords).factors, sup.rank());
}

Lattice preimage_general(const IntMatrix& m, const Lattice& l) {
  if (m.rows() != l.ambient_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "preimage: matrix rows differ from lattice dimension");
  }
  const std::size_t n = m.cols();
  // m v = B^T x  <=>  (v, x) in ker [m | -B^T].
  IntMatrix system = m;
  if (l.rank() > 0) system = m.hconcat((Integer(-1) * l.basis()).transpose());
  IntMatrix kernel = integer_kernel(system);
  return Lattice(kernel.col_block(0, n));
}

Lattice preimage_lattice(const IntMatrix& m, const Lattice& l) {
  if (!m.is_square() || m.rows() != l.ambient_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "preimage needs a square matrix of the lattice dimension");
  }
  return preimage_general(m, l);
}

namespace {

std::vector<Integer> divisors(const Integer& n) {
  std::vector<Integer> out;
  for (Integer d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    if (d * d != n) out.push_back(n / d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Enumerates upper-triangular HNF matrices H (pivot h_i | d_i, entries above
// pivot j in [0, h_j)) whose row lattice contains diag(d), bottom row first.
// Rows i.. are fixed once row i passes the membership test of d_i e_i, so
// every surviving partial choice extends to at least one solution.
class SubgroupEnumerator {
 public:
  SubgroupEnumerator(std::vector<Integer> d, std::size_t limit)
      : d_(std::move(d)), r_(d_.size()), h_(r_, r_), limit_(limit) {}

  std::vector<IntMatrix> run() {
    if (r_ == 0) {
      found_.push_back(h_);
    } else {
      place_row(r_ - 1);
    }
    return std::move(found_);
  }

 private:
  // d_i e_i in span(rows i..r-1), given pivot h_i | d_i.
  bool contains_scaled_unit(std::size_t i) const {
    IntVector residual(r_);
    residual[i] = d_[i];
    for (std::size_t k = i; k < r_; ++k) {
      if (residual[k] % h_(k, k) != 0) return false;
      Integer q = residual[k] / h_(k, k);
      if (q == 0) continue;
      for (std::size_t j = k; j < r_; ++j) residual[j] -= q * h_(k, j);
    }
    return is_zero(residual);
  }

  void place_row(std::size_t i) {
    for (const auto& piv : divisors(d_[i])) {
      h_(i, i) = piv;
      fill_entries(i, i + 1);
    }
    h_(i, i) = 0;
  }

  void fill_entries(std::size_t i, std::size_t j) {
    if (j == r_) {
      if (!contains_scaled_unit(i)) return;
      if (i == 0) {
        if (found_.size() >= limit_) {
          throw Error(ErrorCode::TooLarge, "subgroup enumeration exceeds the limit");
        }
        found_.push_back(h_);
      } else {
        place_row(i - 1);
      }
      return;
    }
    for (Integer x = 0; x < h_(j, j); ++x) {
      h_(i, j) = x;
      fill_entries(i, j + 1);
    }
    h_(i, j) = 0;
  }

  std::vector<Integer> d_;
  std::size_t r_;
  IntMatrix h_;
  std::size_t limit_;
  std::vector<IntMatrix> found_;
};

}  // namespace

std::vector<Lattice> intermediate_lattices(const Lattice& sup, const Lattice& sub,
                                           std::size_t limit) {
  if (!sup.contains(sub)) {
    throw Error(ErrorCode::NotASublattice, "sub is not contained in sup");
  }
  if (sub.rank() != sup.rank()) {
    throw Error(ErrorCode::NotFiniteIndex, "sub has infinite index in sup");
  }
  const std::size_t r = sup.rank();
  IntMatrix coords(r, r);
  for (std::size_t i = 0; i < r; ++i) {
    auto c = *sup.coordinates(sub.basis().row_vector(i));
    for (std::size_t j = 0; j < r; ++j) coords(i, j) = c[j];
  }
  // U C V = D, so sub = span(d_i E_i) for the adapted basis E = V^{-1} B_sup.
  SmithForm form = snf(coords);
  IntMatrix adapted = unimodular_inverse(form.V) * sup.basis();
  std::vector<IntMatrix> local = SubgroupEnumerator(form.factors, limit).run();
  std::vector<Lattice> out;
  out.reserve(local.size());
  for (const auto& h : local) out.emplace_back(h * adapted);
  return out;
}

Lattice saturate(const Lattice& l) {
  const std::size_t n = l.ambient_dim();
  if (l.rank() == 0) return l;
  // Saturation = annihilator of the annihilator.
  IntMatrix annihilator = integer_kernel(l.basis());
  if (annihilator.rows() == 0) return Lattice::full(n);
  return Lattice(integer_kernel(annihilator));
}

}  // namespace nilcert
