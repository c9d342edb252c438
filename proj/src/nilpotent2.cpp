#include "nilcert/nilpotent2.hpp"

#include <algorithm>

#include "nilcert/certificate.hpp"

namespace nilcert {

namespace {

void require_dims(const TwoStepLattice& g, const NilElement& x) {
  if (x.u.size() != g.b() || x.w.size() != g.f()) {
    throw Error(ErrorCode::DimensionMismatch, "element does not match the lattice dimensions");
  }
}

// Order of sup/sub as lattices; throws when sub is not of finite index.
Integer lattice_index(const Lattice& sup, const Lattice& sub) {
  const AbelianStructure q = quotient_structure(sup, sub);
  if (!q.is_finite()) throw Error(ErrorCode::NotFiniteIndex, "sublattice has infinite index");
  return *q.order();
}

bool pairing_lands_in(const TwoStepLattice& g, const Lattice& a, const Lattice& b,
                      const Lattice& target) {
  for (const auto& u : a.generators())
    for (const auto& v : b.generators())
      if (!target.contains(g.pairing(u, v))) return false;
  return true;
}

Integer binom2(const Integer& n) { return n * (n - 1) / 2; }

bool is_prime(const Integer& p) {
  return p >= 2 && mpz_probab_prime_p(p.get_mpz_t(), 40) > 0;
}

}  // namespace

TwoStepLattice::TwoStepLattice(std::size_t f, std::size_t b, std::vector<IntMatrix> forms)
    : f_(f), b_(b), forms_(std::move(forms)) {
  if (forms_.size() != f_) {
    throw Error(ErrorCode::InvalidParameters, "expected one commutator form per central generator");
  }
  for (const auto& c : forms_) {
    if (c.rows() != b_ || c.cols() != b_) {
      throw Error(ErrorCode::InvalidParameters, "commutator form has the wrong size");
    }
    IntMatrix t(b_, b_);
    for (std::size_t i = 0; i < b_; ++i) {
      if (c(i, i) != 0) throw Error(ErrorCode::InvalidParameters, "form has a nonzero diagonal");
      for (std::size_t j = 0; j < b_; ++j) {
        if (c(i, j) != -c(j, i)) throw Error(ErrorCode::InvalidParameters, "form is not alternating");
        if (i < j) t(i, j) = c(i, j);
      }
    }
    tables_.push_back(std::move(t));
  }
}

TwoStepLattice TwoStepLattice::heisenberg(const Integer& k) {
  IntMatrix c(2, 2);
  c(0, 1) = k;
  c(1, 0) = -k;
  return TwoStepLattice(1, 2, {c});
}

TwoStepLattice TwoStepLattice::abelian(std::size_t f, std::size_t b) {
  return TwoStepLattice(f, b, std::vector<IntMatrix>(f, IntMatrix(b, b)));
}

IntVector TwoStepLattice::beta(const IntVector& u, const IntVector& v) const {
  IntVector out(f_);
  for (std::size_t l = 0; l < f_; ++l) {
    const IntMatrix& t = tables_[l];
    for (std::size_t i = 0; i < b_; ++i) {
      if (u[i] == 0) continue;
      for (std::size_t j = i + 1; j < b_; ++j) out[l] += u[i] * t(i, j) * v[j];
    }
  }
  return out;
}

IntVector TwoStepLattice::pairing(const IntVector& u, const IntVector& v) const {
  IntVector out(f_);
  for (std::size_t l = 0; l < f_; ++l) {
    const IntMatrix& c = forms_[l];
    for (std::size_t i = 0; i < b_; ++i) {
      if (u[i] == 0) continue;
      for (std::size_t j = 0; j < b_; ++j) out[l] += u[i] * c(i, j) * v[j];
    }
  }
  return out;
}

NilElement nil_mul(const TwoStepLattice& g, const NilElement& x, const NilElement& y) {
  require_dims(g, x);
  require_dims(g, y);
  return {add(x.u, y.u), add(add(x.w, y.w), g.beta(x.u, y.u))};
}

NilElement nil_inv(const TwoStepLattice& g, const NilElement& x) {
  require_dims(g, x);
  return {neg(x.u), add(neg(x.w), g.beta(x.u, x.u))};
}

NilElement nil_pow(const TwoStepLattice& g, const NilElement& x, const Integer& n) {
  require_dims(g, x);
  return {scale(n, x.u), add(scale(n, x.w), scale(binom2(n), g.beta(x.u, x.u)))};
}

NilElement nil_commutator(const TwoStepLattice& g, const NilElement& x, const NilElement& y) {
  return nil_mul(g, nil_mul(g, x, y), nil_mul(g, nil_inv(g, x), nil_inv(g, y)));
}

NilSublattice::NilSublattice(TwoStepLattice parent, Lattice u, Lattice w)
    : parent_(std::move(parent)), u_(std::move(u)), w_(std::move(w)) {
  if (u_.ambient_dim() != parent_.b() || w_.ambient_dim() != parent_.f()) {
    throw Error(ErrorCode::DimensionMismatch, "sublattice dimensions differ from the parent");
  }
  for (const auto& a : u_.generators())
    for (const auto& b : u_.generators())
      if (!w_.contains(parent_.beta(a, b))) {
        throw Error(ErrorCode::ClosureViolation, "beta(U, U) is not contained in W");
      }
}

NilSublattice NilSublattice::whole(const TwoStepLattice& parent) {
  return NilSublattice(parent, Lattice::full(parent.b()), Lattice::full(parent.f()));
}

bool NilSublattice::contains(const NilElement& x) const {
  require_dims(parent_, x);
  return u_.contains(x.u) && w_.contains(x.w);
}

std::vector<NilElement> NilSublattice::generators() const {
  std::vector<NilElement> out;
  for (const auto& u : u_.generators()) out.push_back({u, IntVector(parent_.f())});
  for (const auto& w : w_.generators()) out.push_back({IntVector(parent_.b()), w});
  return out;
}

bool is_subgroup(const NilSublattice& sup, const NilSublattice& sub) {
  return sup.parent() == sub.parent() && sup.u().contains(sub.u()) && sup.w().contains(sub.w());
}

bool is_normal_in(const NilSublattice& sup, const NilSublattice& sub) {
  // x y x^{-1} = [x, y] y with [x, y] = (0, C(u_x, u_y)).
  return pairing_lands_in(sup.parent(), sup.u(), sub.u(), sub.w());
}

Integer box_index(const NilSublattice& sup, const NilSublattice& sub) {
  if (!is_subgroup(sup, sub)) throw Error(ErrorCode::NotASubgroup, "not a subgroup");
  return lattice_index(sup.u(), sub.u()) * lattice_index(sup.w(), sub.w());
}

AbelianStructure box_quotient(const NilSublattice& sup, const NilSublattice& sub) {
  if (!is_subgroup(sup, sub)) throw Error(ErrorCode::NotASubgroup, "not a subgroup");
  if (!is_normal_in(sup, sub)) throw Error(ErrorCode::NotNormal, "sub is not normal in sup");
  const TwoStepLattice& g = sup.parent();
  if (!pairing_lands_in(g, sup.u(), sup.u(), sub.w())) {
    throw Error(ErrorCode::NotAbelianQuotient, "sup/sub is not abelian");
  }
  // Generators x_i = (U1_i, 0), z_l = (0, W1_l); the quotient map from
  // Z^{ru + rw} is a homomorphism, so its kernel is spanned by
  // (k, -omega(k)) for k in a basis of coords(U0 in U1), together with 0 + coords(W0).
  const Lattice& u1 = sup.u();
  const Lattice& w1 = sup.w();
  const std::size_t ru = u1.rank();
  const std::size_t rw = w1.rank();
  std::vector<IntVector> relations;
  for (const auto& u0 : sub.u().generators()) {
    const IntVector k = *u1.coordinates(u0);
    NilElement x = NilElement::identity(g);
    for (std::size_t i = 0; i < ru; ++i) {
      x = nil_mul(g, x, nil_pow(g, {u1.basis().row_vector(i), IntVector(g.f())}, k[i]));
    }
    const IntVector omega = *w1.coordinates(x.w);
    IntVector rel = k;
    for (const auto& c : omega) rel.push_back(-c);
    relations.push_back(std::move(rel));
  }
  for (const auto& w0 : sub.w().generators()) {
    IntVector rel(ru);
    const IntVector coords = *w1.coordinates(w0);
    rel.insert(rel.end(), coords.begin(), coords.end());
    relations.push_back(std::move(rel));
  }
  return AbelianStructure::cokernel(IntMatrix::from_rows(relations, ru + rw));
}

bool is_central_layer(const NilSublattice& prev, const NilSublattice& next) {
  const Lattice span = lattice_sum(prev.u(), center(prev.parent()).kernel_basis);
  return span.contains(next.u());
}

TwoStepLattice apply_scale(const TwoStepLattice& g, const RationalScale& scale) {
  if (scale.du.size() != g.b() || scale.dw.size() != g.f()) {
    throw Error(ErrorCode::InvalidParameters, "scale has the wrong number of denominators");
  }
  for (const auto& d : scale.du)
    if (d < 1) throw Error(ErrorCode::InvalidParameters, "denominators must be positive");
  for (const auto& d : scale.dw)
    if (d < 1) throw Error(ErrorCode::InvalidParameters, "denominators must be positive");
  std::vector<IntMatrix> forms;
  for (std::size_t l = 0; l < g.f(); ++l) {
    IntMatrix c(g.b(), g.b());
    for (std::size_t i = 0; i < g.b(); ++i)
      for (std::size_t j = 0; j < g.b(); ++j) {
        const Integer num = g.forms()[l](i, j) * scale.dw[l];
        const Integer den = scale.du[i] * scale.du[j];
        if (num % den != 0) {
          throw Error(ErrorCode::InvalidParameters, "rescaled commutator form is not integral");
        }
        c(i, j) = num / den;
      }
    forms.push_back(std::move(c));
  }
  return TwoStepLattice(g.f(), g.b(), std::move(forms));
}

NilSublattice scaled_embedding(const TwoStepLattice& g, const RationalScale& scale) {
  return NilSublattice(apply_scale(g, scale), Lattice::diagonal(scale.du),
                       Lattice::diagonal(scale.dw));
}

NilCenter center(const TwoStepLattice& g) {
  const std::size_t b = g.b();
  IntMatrix stacked(0, b);
  for (const auto& c : g.forms()) stacked = stacked.vconcat(c);
  NilCenter out;
  if (stacked.rows() == 0) {
    out.kernel_basis = Lattice::full(b);
  } else {
    IntMatrix k = integer_kernel(stacked);
    out.kernel_basis = k.rows() ? Lattice(k) : Lattice::zero(b);
  }
  out.rank = g.f() + out.kernel_basis.rank();
  return out;
}

Isolator isolator(const TwoStepLattice& g) {
  std::vector<IntVector> values;
  for (std::size_t i = 0; i < g.b(); ++i)
    for (std::size_t j = i + 1; j < g.b(); ++j) {
      IntVector v(g.f());
      for (std::size_t l = 0; l < g.f(); ++l) v[l] = g.forms()[l](i, j);
      if (!is_zero(v)) values.push_back(std::move(v));
    }
  Isolator out;
  out.commutator = Lattice(g.f(), values);
  out.sqrt_commutator = saturate(out.commutator);
  out.l = center(g).rank - out.sqrt_commutator.rank();
  return out;
}

IntMatrix commutator_image_matrix(const TwoStepLattice& g) {
  const std::size_t b = g.b();
  const std::size_t f = g.f();
  IntMatrix m(b, b * f);
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = 0; j < b; ++j)
      for (std::size_t l = 0; l < f; ++l) m(i, j * f + l) = g.forms()[l](i, j);
  return m;
}

AbelianStructure hbar1(const TwoStepLattice& g) {
  return AbelianStructure::cokernel(commutator_image_matrix(g));
}

void check_automorphism(const TwoStepLattice& g, const NilAutomorphism& alpha) {
  const std::size_t b = g.b();
  const std::size_t f = g.f();
  if (alpha.p.rows() != b || alpha.p.cols() != b || alpha.q.rows() != f || alpha.q.cols() != f) {
    throw Error(ErrorCode::NotAnAutomorphism, "P must be b x b and Q must be f x f");
  }
  if (abs(alpha.p.determinant()) != 1 || abs(alpha.q.determinant()) != 1) {
    throw Error(ErrorCode::NotAnAutomorphism, "P and Q must be unimodular");
  }
  const IntMatrix pt = alpha.p.transpose();
  for (std::size_t m = 0; m < f; ++m) {
    IntMatrix rhs(b, b);
    for (std::size_t l = 0; l < f; ++l) rhs = rhs + alpha.q(m, l) * g.forms()[l];
    if (!(pt * g.forms()[m] * alpha.p == rhs)) {
      throw Error(ErrorCode::NotAnAutomorphism, "P and Q do not preserve the commutator forms");
    }
  }
}

NilElement apply_automorphism(const TwoStepLattice& g, const NilAutomorphism& alpha,
                              const NilElement& x) {
  require_dims(g, x);
  // (u, w) = x_1^{u_1} ... x_b^{u_b} z^{w - beta(u,u)}; alpha(x_i) = (P e_i, 0),
  // alpha(z) = Q z.
  NilElement out = NilElement::identity(g);
  for (std::size_t i = 0; i < g.b(); ++i) {
    if (x.u[i] == 0) continue;
    out = nil_mul(g, out, nil_pow(g, {alpha.p.col_vector(i), IntVector(g.f())}, x.u[i]));
  }
  const IntVector central = alpha.q * sub(x.w, g.beta(x.u, x.u));
  return nil_mul(g, out, {IntVector(g.b()), central});
}

bool nilpotency_check(const TwoStepLattice& g, const NilAutomorphism& alpha, long max_order) {
  check_automorphism(g, alpha);
  if (alpha.order < 1 || alpha.order > max_order) {
    throw Error(ErrorCode::InfiniteOrder, "declared order is outside [1, max_order]");
  }
  for (const auto& x : NilSublattice::whole(g).generators()) {
    NilElement y = x;
    for (long n = 0; n < alpha.order; ++n) y = apply_automorphism(g, alpha, y);
    if (!(y == x)) {
      throw Error(ErrorCode::InfiniteOrder, "alpha^order is not the identity");
    }
  }
  if (!alpha.p.is_identity()) return false;
  const Lattice sqrt = isolator(g).sqrt_commutator;
  const IntMatrix shift = alpha.q - IntMatrix::identity(g.f());
  for (std::size_t l = 0; l < g.f(); ++l)
    if (!sqrt.contains(shift.col_vector(l))) return false;
  return true;
}

SeriesCertificate subnormal_series(const TwoStepLattice& lambda, const NilSublattice& gamma,
                                   const Integer& max_index) {
  if (!(gamma.parent() == lambda)) {
    throw Error(ErrorCode::DimensionMismatch, "gamma is not a sublattice of lambda");
  }
  if (!gamma.is_finite_index()) throw Error(ErrorCode::NotFiniteIndex, "gamma has infinite index");
  const NilSublattice top = NilSublattice::whole(lambda);
  const Integer index = box_index(top, gamma);
  if (index > max_index) {
    throw Error(ErrorCode::TooLarge, "index " + to_decimal(index) + " exceeds the guardrail");
  }
  const NilCenter z = center(lambda);
  // Lambda_1 = Gamma Z(Lambda) = (U + K) x Z^f.
  const NilSublattice middle(lambda, lattice_sum(gamma.u(), z.kernel_basis),
                             Lattice::full(lambda.f()));
  SeriesCertificate cert;
  cert.kind = "nil_series";
  cert.group_ref = lambda;
  cert.base = gamma;
  cert.total_index = index;
  // Layer ranks are bounded by rank Z(Lambda) and by b - rank K.
  const std::size_t b1 = z.rank;
  const std::size_t b2 = lambda.b() - z.kernel_basis.rank();
  const NilSublattice* prev = &gamma;
  for (auto [next, bound] : {std::pair{&middle, b1}, std::pair{&top, b2}}) {
    if (*next == *prev) continue;
    ChainLink link{*next, box_quotient(*next, *prev), is_normal_in(*next, *prev),
                   is_central_layer(*prev, *next)};
    if (link.quotient.rank() > bound) {
      throw std::logic_error("series layer exceeds the central-series rank bound");
    }
    cert.max_quotient_order = std::max(cert.max_quotient_order, *link.quotient.order());
    cert.chain.push_back(std::move(link));
    prev = next;
  }
  cert.min_length = index > 1 ? 1 : 0;
  return cert;
}

SeriesCertificate heisenberg_witness(const Integer& k, const Integer& p, unsigned a) {
  if (k < 1) throw Error(ErrorCode::InvalidParameters, "k must be positive");
  if (!is_prime(p)) throw Error(ErrorCode::InvalidParameters, "p must be prime");
  if (a < 2) throw Error(ErrorCode::InvalidParameters, "a must be at least 2");
  Integer pa;
  mpz_pow_ui(pa.get_mpz_t(), p.get_mpz_t(), a);
  const TwoStepLattice source = TwoStepLattice::heisenberg(k);
  const RationalScale scale{{p, p}, {pa}};
  const NilSublattice gamma = scaled_embedding(source, scale);
  const TwoStepLattice& outer = gamma.parent();
  const NilSublattice lambda(outer, gamma.u(), Lattice::full(1));
  const NilSublattice top = NilSublattice::whole(outer);

  SeriesCertificate cert;
  cert.kind = "heisenberg_witness";
  cert.group_ref = outer;
  cert.base = gamma;
  cert.source = source;
  cert.scale = scale;
  ChainLink first{lambda, box_quotient(lambda, gamma), is_normal_in(lambda, gamma),
                  is_central_layer(gamma, lambda)};
  ChainLink second{top, box_quotient(top, lambda), is_normal_in(top, lambda),
                   is_central_layer(lambda, top)};
  cert.profile = std::make_pair(first.quotient.rank(), second.quotient.rank());
  cert.max_quotient_order = std::max(*first.quotient.order(), *second.quotient.order());
  cert.chain = {std::move(first), std::move(second)};
  cert.total_index = box_index(top, gamma);
  cert.min_length = 1;
  return cert;
}

}  // namespace nilcert
