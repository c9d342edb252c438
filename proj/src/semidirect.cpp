#include "nilcert/semidirect.hpp"

#include <algorithm>
#include <deque>

#include "nilcert/certificate.hpp"

namespace nilcert {

namespace {

long small_exponent(const Integer& t) {
  if (!t.fits_slong_p() || abs(t) > 1000000) {
    throw Error(ErrorCode::TooLarge, "holonomy exponent out of range: " + to_decimal(t));
  }
  return t.get_si();
}

bool lex_less(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows()) return a.rows() < b.rows();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j) != b(i, j)) return a(i, j) < b(i, j);
    }
  return false;
}

void require_same_group(const SemidirectLattice& g, const SemidirectLattice& s) {
  if (!(g.group() == s.group())) {
    throw Error(ErrorCode::DimensionMismatch, "subgroups of different semidirect products");
  }
}

Integer gcd(const Integer& a, const Integer& b) {
  Integer out;
  mpz_gcd(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

Integer lcm(const Integer& a, const Integer& b) {
  Integer out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

// L cap ker(A^m - Id).
Lattice fixed_fiber(const SemidirectLattice& g) {
  const std::size_t n = g.group().n();
  IntMatrix shift = g.group().holonomy_power(g.translation()) - IntMatrix::identity(n);
  IntMatrix kernel = integer_kernel(shift);
  if (kernel.rows() == 0) return Lattice::zero(n);
  return lattice_intersection(g.fiber(), Lattice(kernel));
}

}  // namespace

SemidirectGroup::SemidirectGroup(IntMatrix holonomy) : holonomy_(std::move(holonomy)) {
  if (!holonomy_.is_square()) {
    throw Error(ErrorCode::DimensionMismatch, "holonomy must be square");
  }
  inverse_ = unimodular_inverse(holonomy_);
}

IntMatrix SemidirectGroup::holonomy_power(const Integer& t) const {
  const long e = small_exponent(t);
  return e >= 0 ? power(holonomy_, e) : power(inverse_, -e);
}

bool SemidirectGroup::is_sol3_type() const {
  if (n() != 2 || holonomy_.determinant() != 1) return false;
  return abs(holonomy_(0, 0) + holonomy_(1, 1)) > 2;
}

SemidirectElement mul(const SemidirectGroup& g, const SemidirectElement& a,
                      const SemidirectElement& b) {
  return {add(a.v, g.holonomy_power(a.t) * b.v), a.t + b.t};
}

SemidirectElement inv(const SemidirectGroup& g, const SemidirectElement& a) {
  return {neg(g.holonomy_power(-a.t) * a.v), -a.t};
}

SemidirectElement conj(const SemidirectGroup& g, const SemidirectElement& a,
                       const SemidirectElement& b) {
  const std::size_t n = g.n();
  IntMatrix shift = IntMatrix::identity(n) - g.holonomy_power(b.t);
  SemidirectElement closed{add(shift * a.v, g.holonomy_power(a.t) * b.v), b.t};
  SemidirectElement direct = mul(g, mul(g, a, b), inv(g, a));
  if (!(closed == direct)) {
    throw std::logic_error("conjugation formula disagrees with the group law");
  }
  return closed;
}

SemidirectElement commutator(const SemidirectGroup& g, const SemidirectElement& a,
                             const SemidirectElement& b) {
  return mul(g, mul(g, a, b), mul(g, inv(g, a), inv(g, b)));
}

SemidirectLattice::SemidirectLattice(SemidirectGroup group, Lattice fiber, Integer m)
    : group_(std::move(group)), fiber_(std::move(fiber)), m_(std::move(m)) {
  if (fiber_.ambient_dim() != group_.n()) {
    throw Error(ErrorCode::DimensionMismatch, "fiber dimension differs from the holonomy");
  }
  if (!fiber_.is_full_rank()) {
    throw Error(ErrorCode::NotFiniteIndex, "fiber lattice must have full rank");
  }
  if (m_ < 1) {
    throw Error(ErrorCode::InvalidParameters, "translation generator must be positive");
  }
  const IntMatrix am = group_.holonomy_power(m_);
  if (!(lattice_image(am, fiber_) == fiber_)) {
    throw Error(ErrorCode::NotASubgroup, "fiber is not invariant under A^m");
  }
}

std::vector<SemidirectElement> SemidirectLattice::generators() const {
  std::vector<SemidirectElement> out;
  for (const auto& v : fiber_.generators()) out.push_back({v, 0});
  out.push_back({IntVector(group_.n()), m_});
  return out;
}

Lattice SemidirectLattice::as_product_lattice() const {
  const std::size_t n = group_.n();
  std::vector<IntVector> rows;
  for (auto v : fiber_.generators()) {
    v.push_back(0);
    rows.push_back(std::move(v));
  }
  IntVector t(n + 1);
  t[n] = m_;
  rows.push_back(std::move(t));
  return Lattice(n + 1, rows);
}

bool contains(const SemidirectLattice& s, const SemidirectElement& g) {
  return g.t % s.translation() == 0 && s.fiber().contains(g.v);
}

bool is_subgroup(const SemidirectLattice& g, const SemidirectLattice& s) {
  if (!(g.group() == s.group())) return false;
  return s.translation() % g.translation() == 0 && g.fiber().contains(s.fiber());
}

bool is_normal_in(const SemidirectLattice& g, const SemidirectLattice& s) {
  require_same_group(g, s);
  const auto& grp = g.group();
  const auto sg = s.generators();
  for (const auto& x : g.generators()) {
    const auto xi = inv(grp, x);
    for (const auto& y : sg) {
      if (!contains(s, conj(grp, x, y)) || !contains(s, conj(grp, xi, y))) return false;
    }
  }
  return true;
}

SemidirectLattice normalizer(const SemidirectLattice& g, const SemidirectLattice& s) {
  require_same_group(g, s);
  if (!is_subgroup(g, s)) throw Error(ErrorCode::NotASubgroup, "S is not contained in G");
  const std::size_t n = g.group().n();
  // Conjugating (0, m_S) by (v,t) gives ((Id - A^{m_S}) v, m_S); conjugating
  // the fiber gives A^t L_S, which only constrains t.
  IntMatrix shift = IntMatrix::identity(n) - g.group().holonomy_power(s.translation());
  Lattice fiber = lattice_intersection(g.fiber(), preimage_lattice(shift, s.fiber()));
  Integer t = g.translation();
  while (!(lattice_image(g.group().holonomy_power(t), s.fiber()) == s.fiber())) t += g.translation();
  SemidirectLattice out(g.group(), fiber, t);
  if (!is_normal_in(out, s)) {
    throw std::logic_error("normalizer does not normalize");
  }
  return out;
}

Integer index_in(const SemidirectLattice& g, const SemidirectLattice& s) {
  require_same_group(g, s);
  if (!is_subgroup(g, s)) throw Error(ErrorCode::NotASubgroup, "S is not contained in G");
  return s.as_product_lattice().covolume() / g.as_product_lattice().covolume();
}

AbelianStructure quotient(const SemidirectLattice& g, const SemidirectLattice& s) {
  require_same_group(g, s);
  if (!is_subgroup(g, s)) throw Error(ErrorCode::NotASubgroup, "S is not contained in G");
  if (!is_normal_in(g, s)) throw Error(ErrorCode::NotNormal, "S is not normal in G");
  const auto gens = g.generators();
  for (const auto& x : gens)
    for (const auto& y : gens) {
      if (!contains(s, commutator(g.group(), x, y))) {
        throw Error(ErrorCode::NotAbelianQuotient, "G/S is not abelian");
      }
    }
  // With [G,G] <= S, the coset of (v,t) depends only on v mod L_S and t mod m_S.
  return quotient_structure(g.as_product_lattice(), s.as_product_lattice());
}

std::vector<SemidirectLattice> intermediates(const SemidirectLattice& g,
                                             const SemidirectLattice& s,
                                             const Integer& max_quotient) {
  const AbelianStructure q = quotient(g, s);
  const Integer order = *q.order();
  if (order > max_quotient) {
    throw Error(ErrorCode::QuotientTooLarge,
                "|G/S| = " + to_decimal(order) + " exceeds " + to_decimal(max_quotient));
  }
  const std::size_t n = g.group().n();
  const Lattice top = g.as_product_lattice();
  const Lattice bottom = s.as_product_lattice();
  std::vector<IntVector> axes;
  for (std::size_t i = 0; i < n; ++i) {
    IntVector e(n + 1);
    e[i] = 1;
    axes.push_back(std::move(e));
  }
  const Lattice horizontal(n + 1, axes);
  std::vector<std::pair<Integer, SemidirectLattice>> keyed;
  for (const auto& lam : intermediate_lattices(top, bottom, 1000000)) {
    if (lam == top || lam == bottom) continue;
    // Product shape: Lambda = (Lambda cap Z^n x 0) + (0, m) Z.
    Integer m = 0;
    for (const auto& row : lam.generators()) m = gcd(m, row[n]);
    IntVector tvec(n + 1);
    tvec[n] = m;
    if (!lam.contains(tvec)) {
      throw Error(ErrorCode::UnsupportedShape, "intermediate subgroup is not a product lattice");
    }
    std::vector<IntVector> fiber_rows;
    for (const auto& row : lattice_intersection(lam, horizontal).generators()) {
      fiber_rows.emplace_back(row.begin(), row.end() - 1);
    }
    Lattice fiber(n, fiber_rows);
    if (!fiber.is_full_rank() ||
        !(lattice_image(g.group().holonomy_power(m), fiber) == fiber)) {
      throw Error(ErrorCode::UnsupportedShape, "intermediate fiber is not invariant");
    }
    SemidirectLattice h(g.group(), fiber, m);
    keyed.emplace_back(index_in(h, s), std::move(h));
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return lex_less(a.second.as_product_lattice().basis(),
                    b.second.as_product_lattice().basis());
  });
  std::vector<SemidirectLattice> out;
  out.reserve(keyed.size());
  for (auto& [key, h] : keyed) out.push_back(std::move(h));
  return out;
}

SemidirectCenter center_rank(const SemidirectLattice& g) {
  SemidirectCenter out;
  out.fixed_fiber = fixed_fiber(g);
  const long order = finite_order(g.group().holonomy());
  out.central_translation = order == 0 ? Integer(0) : lcm(g.translation(), Integer(order));
  out.rank = out.fixed_fiber.rank() + (order == 0 ? 0 : 1);
  out.structure = AbelianStructure{out.rank, {}};
  return out;
}

std::size_t inner_center_rank(const SemidirectLattice& g) {
  const std::size_t n = g.group().n();
  const SemidirectCenter z = center_rank(g);
  const IntMatrix id = IntMatrix::identity(n);
  // (v, 0) is central mod Z iff its commutator with (0, m) lands in Z.
  IntMatrix shift = id - g.group().holonomy_power(g.translation());
  Lattice v = lattice_intersection(g.fiber(), preimage_lattice(shift, z.fixed_fiber));
  // (0, t) is central mod Z iff (A^t - Id) L <= Z_fix; the induced action on
  // L / Z_fix is in GL(n - r, Z), so its order divides finite_order_lcm.
  Integer t = lcm(g.translation(), finite_order_lcm(n));
  IntMatrix lift = g.group().holonomy_power(t) - id;
  const bool translation = z.fixed_fiber.contains(lattice_image(lift, g.fiber()));
  const std::size_t numer = v.rank() + (translation ? 1 : 0);
  return numer - z.rank;
}

bool is_central_layer(const SemidirectLattice& top, const SemidirectLattice& prev,
                      const SemidirectLattice& next) {
  const SemidirectCenter z = center_rank(top);
  // Z_fix is A-invariant, so prev * Z(top) is the box (L + Z_fix) x| g Z.
  Lattice fiber = lattice_sum(prev.fiber(), z.fixed_fiber);
  Integer t = gcd(prev.translation(), z.central_translation);
  return fiber.contains(next.fiber()) && next.translation() % t == 0;
}

ClosureReport subnormal_closure(const SemidirectLattice& top, const SemidirectLattice& start,
                                std::size_t max_size) {
  ClosureReport out;
  std::deque<std::size_t> queue;
  out.reached.push_back(start);
  queue.push_back(0);
  auto seen = [&](const SemidirectLattice& x) {
    return std::find(out.reached.begin(), out.reached.end(), x) != out.reached.end();
  };
  while (!queue.empty()) {
    const SemidirectLattice x = out.reached[queue.front()];
    queue.pop_front();
    const SemidirectLattice nx = normalizer(top, x);
    if (nx == x) continue;
    out.layer_bound = std::max(out.layer_bound, index_in(nx, x));
    std::vector<SemidirectLattice> next;
    try {
      next = intermediates(nx, x);
    } catch (const Error&) {
      out.size = out.reached.size();
      return out;
    }
    next.push_back(nx);
    for (auto& y : next) {
      if (seen(y)) continue;
      if (out.reached.size() >= max_size) {
        out.size = out.reached.size();
        return out;
      }
      out.reached.push_back(std::move(y));
      queue.push_back(out.reached.size() - 1);
    }
  }
  out.complete = true;
  out.size = out.reached.size();
  return out;
}

SemidirectGroup sol3_group() { return SemidirectGroup(IntMatrix{{5, 2}, {2, 1}}); }

SemidirectLattice sol3_gamma(unsigned k) {
  Integer s;
  mpz_ui_pow_ui(s.get_mpz_t(), 2, k);
  return SemidirectLattice(sol3_group(), Lattice::scaled(2, s));
}

SemidirectLattice sol3_gamma(unsigned k, int i, int j) {
  if (k == 0 || i < 0 || i > 1 || j < 0 || j > 1) {
    throw Error(ErrorCode::InvalidParameters, "Gamma_k^(i,j) needs k >= 1 and i, j in {0,1}");
  }
  Integer hi;
  mpz_ui_pow_ui(hi.get_mpz_t(), 2, k);
  const Integer lo = hi / 2;
  if (i == 0 && j == 0) return sol3_gamma(k - 1);
  if (i == 1 && j == 0) return SemidirectLattice(sol3_group(), Lattice::diagonal({hi, lo}));
  if (i == 0 && j == 1) return SemidirectLattice(sol3_group(), Lattice::diagonal({lo, hi}));
  return SemidirectLattice(sol3_group(), Lattice(2, {{lo, lo}, {0, hi}}));
}

SeriesCertificate sol3_tower(unsigned k) {
  const SemidirectLattice gamma = sol3_gamma(0);
  SeriesCertificate cert;
  cert.kind = "sol3_tower";
  cert.group_ref = gamma;
  cert.base = sol3_gamma(k);
  Integer chain_max = 1;
  for (unsigned j = k; j >= 1; --j) {
    const SemidirectLattice lower = sol3_gamma(j);
    const SemidirectLattice upper = sol3_gamma(j - 1);
    ChainLink link{upper, quotient(upper, lower), is_normal_in(upper, lower),
                   is_central_layer(gamma, lower, upper)};
    chain_max = std::max(chain_max, *link.quotient.order());
    cert.chain.push_back(std::move(link));
  }
  for (unsigned j = 1; j <= k; ++j) {
    const SemidirectLattice lower = sol3_gamma(j);
    const SemidirectLattice upper = sol3_gamma(j - 1);
    cert.levels.push_back({j, index_in(gamma, lower), quotient(upper, lower),
                           normalizer(gamma, lower) == upper});
  }
  cert.total_index = index_in(gamma, sol3_gamma(k));
  const ClosureReport closure = subnormal_closure(gamma, std::get<SemidirectLattice>(cert.base));
  // Any subnormal step X <| Y has Y <= N(X), so a complete search bounds
  // every layer of every tower ending at the base.
  cert.closure_size = closure.size;
  cert.closure_verified = closure.complete;
  cert.max_quotient_order = cert.closure_verified ? closure.layer_bound : chain_max;
  cert.min_length = cert.closure_verified
                        ? length_lower_bound(cert.total_index, cert.max_quotient_order)
                        : (cert.total_index > 1 ? 1 : 0);
  return cert;
}

bool scaling_map_check(const SemidirectLattice& source, const Integer& factor,
                       const SemidirectLattice& target) {
  if (!(source.group() == target.group()) || factor == 0) return false;
  const auto& grp = source.group();
  auto f = [&](const SemidirectElement& x) { return SemidirectElement{scale(factor, x.v), x.t}; };
  const auto gens = source.generators();
  // Homomorphism on generator pairs (and their inverses).
  std::vector<SemidirectElement> sample = gens;
  for (const auto& x : gens) sample.push_back(inv(grp, x));
  for (const auto& x : sample) {
    if (!contains(target, f(x))) return false;
    for (const auto& y : sample) {
      if (!(f(mul(grp, x, y)) == mul(grp, f(x), f(y)))) return false;
    }
  }
  // Injective since factor != 0; onto iff the image lattice is the target.
  Lattice image = lattice_image(factor * IntMatrix::identity(grp.n()), source.fiber());
  return image == target.fiber() && source.translation() == target.translation();
}

bool scaling_iso_check(unsigned k) {
  Integer s;
  mpz_ui_pow_ui(s.get_mpz_t(), 2, k);
  return scaling_map_check(sol3_gamma(0), s, sol3_gamma(k));
}

}  // namespace nilcert
