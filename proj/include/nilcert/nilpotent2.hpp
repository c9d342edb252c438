#pragma once

#include <vector>

#include "nilcert/lattice.hpp"

namespace nilcert {

struct SeriesCertificate;

/// Torsion-free 2-step nilpotent lattice 1 -> Z^f -> G -> Z^b -> 1 presented
/// by alternating commutator forms C_1..C_f: [x_i, x_j] = prod_l z_l^{C_l[i,j]}.
///
/// Elements are written in normal form (u, w) with u in Z^b, w in Z^f, and the
/// law (u,w)(u',w') = (u + u', w + w' + beta(u,u')) where beta_l(u,u') = u^T T_l u'
/// and T_l is the strictly upper-triangular part of C_l.
class TwoStepLattice {
 public:
  TwoStepLattice() = default;
  /// Throws InvalidParameters when a form is not alternating or has the wrong size.
  TwoStepLattice(std::size_t f, std::size_t b, std::vector<IntMatrix> forms);

  /// Form k * [[0,1],[-1,0]] on Z^2 with one central generator.
  static TwoStepLattice heisenberg(const Integer& k);
  /// Z^{f+b} with all forms zero.
  static TwoStepLattice abelian(std::size_t f, std::size_t b);

  [[nodiscard]] std::size_t f() const noexcept { return f_; }
  [[nodiscard]] std::size_t b() const noexcept { return b_; }
  [[nodiscard]] const std::vector<IntMatrix>& forms() const noexcept { return forms_; }
  [[nodiscard]] const std::vector<IntMatrix>& collection_tables() const noexcept {
    return tables_;
  }

  [[nodiscard]] IntVector beta(const IntVector& u, const IntVector& v) const;
  /// (C_1(u,v), ..., C_f(u,v)).
  [[nodiscard]] IntVector pairing(const IntVector& u, const IntVector& v) const;

  friend bool operator==(const TwoStepLattice& a, const TwoStepLattice& b) {
    return a.f_ == b.f_ && a.b_ == b.b_ && a.forms_ == b.forms_;
  }

 private:
  std::size_t f_ = 0;
  std::size_t b_ = 0;
  std::vector<IntMatrix> forms_;
  std::vector<IntMatrix> tables_;
};

struct NilElement {
  IntVector u;
  IntVector w;

  static NilElement identity(const TwoStepLattice& g) {
    return {IntVector(g.b()), IntVector(g.f())};
  }
  friend bool operator==(const NilElement&, const NilElement&) = default;
};

NilElement nil_mul(const TwoStepLattice& g, const NilElement& x, const NilElement& y);
NilElement nil_inv(const TwoStepLattice& g, const NilElement& x);
/// x^n = (n u, n w + binom(n,2) beta(u,u)) for every integer n.
NilElement nil_pow(const TwoStepLattice& g, const NilElement& x, const Integer& n);
/// x y x^{-1} y^{-1} = (0, C(u_x, u_y)).
NilElement nil_commutator(const TwoStepLattice& g, const NilElement& x, const NilElement& y);

/// Box subgroup U x W (normal-form coordinates), closed when beta(U,U) <= W.
class NilSublattice {
 public:
  NilSublattice() = default;
  /// Throws ClosureViolation when U x W is not a subgroup.
  NilSublattice(TwoStepLattice parent, Lattice u, Lattice w);
  static NilSublattice whole(const TwoStepLattice& parent);

  [[nodiscard]] const TwoStepLattice& parent() const noexcept { return parent_; }
  [[nodiscard]] const Lattice& u() const noexcept { return u_; }
  [[nodiscard]] const Lattice& w() const noexcept { return w_; }
  [[nodiscard]] bool contains(const NilElement& x) const;
  [[nodiscard]] std::vector<NilElement> generators() const;
  [[nodiscard]] bool is_finite_index() const {
    return u_.is_full_rank() && w_.is_full_rank();
  }

  friend bool operator==(const NilSublattice& a, const NilSublattice& b) {
    return a.parent_ == b.parent_ && a.u_ == b.u_ && a.w_ == b.w_;
  }

 private:
  TwoStepLattice parent_;
  Lattice u_;
  Lattice w_;
};

bool is_subgroup(const NilSublattice& sup, const NilSublattice& sub);
/// sub is normalized by sup: C(U_sup, U_sub) <= W_sub.
bool is_normal_in(const NilSublattice& sup, const NilSublattice& sub);
/// [sup : sub] = [U_sup : U_sub] [W_sup : W_sub].
Integer box_index(const NilSublattice& sup, const NilSublattice& sub);
/// Invariant factors of sup/sub; throws NotNormal or NotAbelianQuotient.
AbelianStructure box_quotient(const NilSublattice& sup, const NilSublattice& sub);
/// sub/prev is generated by images of central elements of the parent.
bool is_central_layer(const NilSublattice& prev, const NilSublattice& next);

/// Axis-wise denominators describing an overlattice of G inside its rational hull.
struct RationalScale {
  std::vector<Integer> du;
  std::vector<Integer> dw;

  friend bool operator==(const RationalScale&, const RationalScale&) = default;
};

/// The overlattice { (u_i / du_i, w_l / dw_l) } in its own integer coordinates;
/// throws InvalidParameters when the rescaled forms are not integral.
TwoStepLattice apply_scale(const TwoStepLattice& g, const RationalScale& scale);
/// G as a box subgroup of the overlattice apply_scale(g, scale).
NilSublattice scaled_embedding(const TwoStepLattice& g, const RationalScale& scale);

struct NilCenter {
  std::size_t rank = 0;
  /// { u : C_l u = 0 for all l }, saturated; the center is kernel x Z^f.
  Lattice kernel_basis;
};

NilCenter center(const TwoStepLattice& g);

struct Isolator {
  Lattice commutator;       // span of all C_l values in Z^f
  Lattice sqrt_commutator;  // its saturation
  std::size_t l = 0;        // rank Z(G) - rank sqrt_commutator
};

Isolator isolator(const TwoStepLattice& g);

/// b x (b f) matrix whose row i is u' -> C(e_i, u') written in Hom(Z^b, Z^f)
/// coordinates (index j * f + l).
IntMatrix commutator_image_matrix(const TwoStepLattice& g);
/// Hom(Z^b, Z^f) modulo the image of u -> C(u, .).
AbelianStructure hbar1(const TwoStepLattice& g);

/// Automorphism acting by P on Z^b and Q on Z^f.
struct NilAutomorphism {
  IntMatrix p;
  IntMatrix q;
  long order = 1;
};

/// Throws NotAnAutomorphism unless P^T C_m P = sum_l Q[m][l] C_l with P, Q
/// unimodular.
void check_automorphism(const TwoStepLattice& g, const NilAutomorphism& alpha);
/// Image of x under alpha using the canonical quadratic correction.
NilElement apply_automorphism(const TwoStepLattice& g, const NilAutomorphism& alpha,
                              const NilElement& x);
/// True iff alpha induces the identity on G / sqrt([G,G]) = Z^b + Z^l.
bool nilpotency_check(const TwoStepLattice& g, const NilAutomorphism& alpha,
                      long max_order = 10000);

/// Gamma = L_0 <= L_1 = Gamma Z(Lambda) <= L_2 = Lambda, trivial layers dropped.
SeriesCertificate subnormal_series(const TwoStepLattice& lambda, const NilSublattice& gamma,
                                   const Integer& max_index = 1000000);

/// H(k) <= Lambda <= Lambda' with Lambda/H(k) = Z/p^a central and
/// Lambda'/Lambda = (Z/p)^2.
SeriesCertificate heisenberg_witness(const Integer& k, const Integer& p, unsigned a);

}  // namespace nilcert
