#include "nilcert/invariants.hpp"

#include <algorithm>

namespace nilcert {

Integer minkowski_bound(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidParameters, "minkowski_bound needs n >= 1");
  Integer out = 1;
  for (unsigned long p = 2; p <= n + 1; ++p) {
    bool prime = true;
    for (unsigned long q = 2; q * q <= p; ++q) prime = prime && p % q != 0;
    if (!prime) continue;
    unsigned long e = 0;
    for (unsigned long denom = p - 1; denom <= n; denom *= p) e += n / denom;
    Integer pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), p, e);
    out *= pe;
  }
  return out;
}

std::size_t euler_length_bound(const Integer& chi) {
  if (chi == 0) throw Error(ErrorCode::ZeroEuler, "Euler characteristic is zero");
  const Integer a = abs(chi);
  return mpz_sizeinbase(a.get_mpz_t(), 2) - 1;
}

DiscSym2Bound discsym2_upper(const GroupRef& g) {
  if (const auto* s = std::get_if<SemidirectLattice>(&g)) {
    return {center_rank(*s).rank, inner_center_rank(*s)};
  }
  if (const auto* t = std::get_if<TwoStepLattice>(&g)) {
    // Z(G) = K x Z^f and G / Z(G) = Z^b / K is free abelian.
    const NilCenter z = center(*t);
    return {z.rank, t->b() - z.kernel_basis.rank()};
  }
  throw Error(ErrorCode::UnsupportedGroupShape, "unsupported group description");
}

namespace {

template <class T>
const T& expect(const auto& v) {
  const T* p = std::get_if<T>(&v);
  if (!p) throw Error(ErrorCode::UnresolvableReference, "certificate mixes group shapes");
  return *p;
}

struct ChainFacts {
  Integer product = 1;
  Integer max_order = 1;
};

// Returns nullopt as soon as a stored claim disagrees with the recomputation.
std::optional<ChainFacts> check_semidirect_chain(const SeriesCertificate& c) {
  const auto& top = expect<SemidirectLattice>(c.group_ref);
  const SemidirectLattice* prev = &expect<SemidirectLattice>(c.base);
  ChainFacts facts;
  for (const auto& link : c.chain) {
    const auto& next = expect<SemidirectLattice>(link.subgroup);
    if (!is_subgroup(next, *prev) || !is_subgroup(top, next)) return std::nullopt;
    if (!link.normality_verified || !is_normal_in(next, *prev)) return std::nullopt;
    const AbelianStructure q = quotient(next, *prev);
    if (!(q == link.quotient) || !q.is_finite()) return std::nullopt;
    if (link.central != is_central_layer(top, *prev, next)) return std::nullopt;
    facts.product *= *q.order();
    facts.max_order = std::max(facts.max_order, *q.order());
    prev = &next;
  }
  if (!(*prev == top)) return std::nullopt;
  if (facts.product != index_in(top, expect<SemidirectLattice>(c.base))) return std::nullopt;
  return facts;
}

std::optional<ChainFacts> check_nil_chain(const SeriesCertificate& c) {
  const auto& top_group = expect<TwoStepLattice>(c.group_ref);
  const NilSublattice top = NilSublattice::whole(top_group);
  const NilSublattice* prev = &expect<NilSublattice>(c.base);
  if (!(prev->parent() == top_group)) return std::nullopt;
  ChainFacts facts;
  for (const auto& link : c.chain) {
    const auto& next = expect<NilSublattice>(link.subgroup);
    if (!is_subgroup(next, *prev)) return std::nullopt;
    if (!link.normality_verified || !is_normal_in(next, *prev)) return std::nullopt;
    const AbelianStructure q = box_quotient(next, *prev);
    if (!(q == link.quotient) || !q.is_finite()) return std::nullopt;
    if (link.central != is_central_layer(*prev, next)) return std::nullopt;
    facts.product *= *q.order();
    facts.max_order = std::max(facts.max_order, *q.order());
    prev = &next;
  }
  if (!(*prev == top)) return std::nullopt;
  if (facts.product != box_index(top, expect<NilSublattice>(c.base))) return std::nullopt;
  return facts;
}

bool check_sol3_levels(const SeriesCertificate& c) {
  const auto& top = expect<SemidirectLattice>(c.group_ref);
  const auto k = static_cast<unsigned>(c.levels.size());
  if (!(top == sol3_gamma(0)) || !(expect<SemidirectLattice>(c.base) == sol3_gamma(k))) {
    return false;
  }
  for (unsigned j = 1; j <= k; ++j) {
    const TowerLevel& level = c.levels[j - 1];
    const SemidirectLattice lower = sol3_gamma(j);
    const SemidirectLattice upper = sol3_gamma(j - 1);
    if (level.level != j || level.index != index_in(top, lower)) return false;
    if (!(level.quotient == quotient(upper, lower))) return false;
    if (!level.normalizer_verified || !(normalizer(top, lower) == upper)) return false;
  }
  return true;
}

bool verify_impl(const SeriesCertificate& c) {
  const bool semidirect = std::holds_alternative<SemidirectLattice>(c.group_ref);
  const auto facts = semidirect ? check_semidirect_chain(c) : check_nil_chain(c);
  if (!facts || facts->product != c.total_index) return false;
  if (c.min_length > c.chain.size()) return false;

  if (c.kind == "sol3_tower") {
    if (!semidirect || !check_sol3_levels(c)) return false;
    const ClosureReport closure =
        subnormal_closure(expect<SemidirectLattice>(c.group_ref), expect<SemidirectLattice>(c.base));
    if (closure.complete != c.closure_verified || closure.size != c.closure_size) return false;
  } else if (c.closure_verified || !c.levels.empty()) {
    return false;
  }

  if (c.closure_verified) {
    const ClosureReport closure =
        subnormal_closure(expect<SemidirectLattice>(c.group_ref), expect<SemidirectLattice>(c.base));
    if (closure.layer_bound != c.max_quotient_order) return false;
    if (c.min_length != length_lower_bound(c.total_index, c.max_quotient_order)) return false;
  } else {
    if (facts->max_order != c.max_quotient_order) return false;
    if (c.min_length != (c.total_index > 1 ? 1U : 0U)) return false;
  }

  if (c.kind == "heisenberg_witness") {
    if (!c.source || !c.scale || !c.profile || c.chain.size() != 2) return false;
    if (!(apply_scale(*c.source, *c.scale) == expect<TwoStepLattice>(c.group_ref))) return false;
    if (!(scaled_embedding(*c.source, *c.scale) == expect<NilSublattice>(c.base))) return false;
    if (!c.chain[0].central) return false;
    const std::pair<std::size_t, std::size_t> ranks{c.chain[0].quotient.rank(),
                                                    c.chain[1].quotient.rank()};
    if (ranks != *c.profile) return false;
  } else if (c.source || c.scale || c.profile) {
    return false;
  }
  return true;
}

}  // namespace

bool verify_certificate(const SeriesCertificate& c) {
  try {
    return verify_impl(c);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::UnresolvableReference) throw;
    return false;
  }
}

}  // namespace nilcert
