#include "nilcert/cohomology.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace nilcert {

namespace {

using Word = std::vector<std::pair<std::size_t, int>>;

// Reduces x modulo R: free coordinates unchanged, torsion ones into [0, d).
IntVector reduce(const ModuleAction& act, IntVector x) {
  for (std::size_t i = 0; i < act.torsion.size(); ++i) {
    auto& c = x[act.free + i];
    c = floor_mod(c, act.torsion[i]);
  }
  return x;
}

bool same_class(const ModuleAction& act, const IntVector& a, const IntVector& b) {
  return reduce(act, a) == reduce(act, b);
}

IntVector unit(std::size_t n, std::size_t i) {
  IntVector e(n);
  e[i] = 1;
  return e;
}

// X with psi X = Id modulo R, column by column.
IntMatrix inverse_mod(const ModuleAction& act, const IntMatrix& psi) {
  const std::size_t d = act.dim();
  const Lattice rel = act.relations();
  IntMatrix system = psi;
  if (rel.rank() > 0) system = psi.hconcat(rel.basis().transpose());
  IntMatrix out(d, d);
  for (std::size_t c = 0; c < d; ++c) {
    auto sol = solve_integer(system, unit(d, c));
    if (!sol) throw Error(ErrorCode::IllDefinedAction, "a generator does not act invertibly");
    for (std::size_t r = 0; r < d; ++r) out(r, c) = (*sol)[r];
  }
  return out;
}

bool congruent_identity(const ModuleAction& act, const IntMatrix& m) {
  const std::size_t d = act.dim();
  for (std::size_t c = 0; c < d; ++c)
    if (!same_class(act, m.col_vector(c), unit(d, c))) return false;
  return true;
}

struct Prepared {
  std::vector<IntMatrix> psi;
  std::vector<IntMatrix> psi_inv;
  std::vector<Word> relators;
};

Prepared prepare(const ModuleAction& act) {
  validate_action(act);
  Prepared out;
  out.psi = act.action;
  for (const auto& m : act.action) out.psi_inv.push_back(inverse_mod(act, m));
  for (const auto& w : act.relators) out.relators.push_back(parse_word(w, act.generators));
  return out;
}

// Fox derivatives D_j(w) evaluated through psi: c(w) = sum_j D_j c(g_j).
std::vector<IntMatrix> fox(const ModuleAction& act, const Prepared& prep, const Word& w) {
  const std::size_t d = act.dim();
  std::vector<IntMatrix> deriv(act.generators, IntMatrix(d, d));
  IntMatrix prefix = IntMatrix::identity(d);
  for (auto [g, e] : w) {
    if (e > 0) {
      deriv[g] = deriv[g] + prefix;
      prefix = prefix * prep.psi[g];
    } else {
      prefix = prefix * prep.psi_inv[g];
      deriv[g] = deriv[g] - prefix;
    }
  }
  return deriv;
}

Lattice power_lattice(const Lattice& l, std::size_t copies) {
  const std::size_t n = l.ambient_dim();
  std::vector<IntVector> rows;
  for (std::size_t c = 0; c < copies; ++c)
    for (const auto& v : l.generators()) {
      IntVector row(n * copies);
      std::copy(v.begin(), v.end(), row.begin() + static_cast<std::ptrdiff_t>(c * n));
      rows.push_back(std::move(row));
    }
  return Lattice(n * copies, rows);
}

// Lattice of lifted cocycles in Z^{r d}.
Lattice cocycle_lattice(const ModuleAction& act, const Prepared& prep) {
  const std::size_t d = act.dim();
  const std::size_t r = act.generators;
  if (prep.relators.empty() || r * d == 0) return Lattice::full(r * d);
  IntMatrix system(prep.relators.size() * d, r * d);
  for (std::size_t k = 0; k < prep.relators.size(); ++k) {
    const auto deriv = fox(act, prep, prep.relators[k]);
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) system(k * d + a, j * d + b) = deriv[j](a, b);
  }
  return preimage_general(system, power_lattice(act.relations(), prep.relators.size()));
}

std::vector<IntVector> split(const ModuleAction& act, const IntVector& lifted) {
  const std::size_t d = act.dim();
  std::vector<IntVector> out;
  for (std::size_t j = 0; j < act.generators; ++j) {
    IntVector v(lifted.begin() + static_cast<std::ptrdiff_t>(j * d),
                lifted.begin() + static_cast<std::ptrdiff_t>((j + 1) * d));
    out.push_back(reduce(act, std::move(v)));
  }
  return out;
}

// Generators of sup/sub adapted to its invariant factors.
CocycleSpace adapted_space(const ModuleAction& act, const Lattice& sup, const Lattice& sub) {
  CocycleSpace out;
  out.lifted = sup;
  out.structure = quotient_structure(sup, sub);
  const std::size_t r = sup.rank();
  if (r == 0) return out;
  IntMatrix coords(sub.rank(), r);
  for (std::size_t i = 0; i < sub.rank(); ++i) {
    const IntVector c = *sup.coordinates(sub.basis().row_vector(i));
    for (std::size_t j = 0; j < r; ++j) coords(i, j) = c[j];
  }
  std::vector<Integer> factors;
  IntMatrix adapted = sup.basis();
  if (coords.rows() > 0) {
    SmithForm form = snf(coords);
    factors = form.factors;
    adapted = unimodular_inverse(form.V) * sup.basis();
  }
  for (std::size_t i = 0; i < r; ++i) {
    if (i < factors.size() && factors[i] == 1) continue;
    out.basis.push_back(split(act, adapted.row_vector(i)));
  }
  return out;
}

void check_cocycles(const ModuleAction& act, const CocycleSpace& space) {
  const std::size_t d = act.dim();
  for (const auto& c : space.basis)
    for (const auto& w : act.relators)
      if (!same_class(act, evaluate_cocycle(act, c, w), IntVector(d))) {
        throw std::logic_error("cocycle basis element violates a relator");
      }
}

Lattice coboundary_lattice(const ModuleAction& act, const Prepared& prep) {
  const std::size_t d = act.dim();
  const std::size_t r = act.generators;
  std::vector<IntVector> rows;
  for (std::size_t k = 0; k < d; ++k) {
    IntVector row(r * d);
    for (std::size_t j = 0; j < r; ++j) {
      IntVector v = sub(prep.psi[j] * unit(d, k), unit(d, k));
      std::copy(v.begin(), v.end(), row.begin() + static_cast<std::ptrdiff_t>(j * d));
    }
    rows.push_back(std::move(row));
  }
  return lattice_sum(Lattice(r * d, rows), power_lattice(act.relations(), r));
}

}  // namespace

Lattice ModuleAction::relations() const {
  const std::size_t d = dim();
  std::vector<IntVector> rows;
  for (std::size_t i = 0; i < torsion.size(); ++i) {
    IntVector row(d);
    row[free + i] = torsion[i];
    rows.push_back(std::move(row));
  }
  return Lattice(d, rows);
}

std::vector<std::pair<std::size_t, int>> parse_word(const std::string& word,
                                                    std::size_t generators) {
  Word out;
  for (char ch : word) {
    if (ch >= 'a' && ch < static_cast<char>('a' + generators)) {
      out.emplace_back(static_cast<std::size_t>(ch - 'a'), 1);
    } else if (ch >= 'A' && ch < static_cast<char>('A' + generators)) {
      out.emplace_back(static_cast<std::size_t>(ch - 'A'), -1);
    } else if (ch != '1') {
      throw Error(ErrorCode::ParseError, std::string("bad letter '") + ch + "' in relator " + word);
    }
  }
  return out;
}

void validate_action(const ModuleAction& act) {
  const std::size_t d = act.dim();
  if (act.generators > 26) throw Error(ErrorCode::InvalidParameters, "at most 26 generators");
  if (act.action.size() != act.generators) {
    throw Error(ErrorCode::IllDefinedAction, "need one action matrix per generator");
  }
  for (const auto& t : act.torsion)
    if (t < 2) throw Error(ErrorCode::InvalidParameters, "torsion orders must be at least 2");
  const Lattice rel = act.relations();
  for (const auto& m : act.action) {
    if (m.rows() != d || m.cols() != d) {
      throw Error(ErrorCode::IllDefinedAction, "action matrix has the wrong size");
    }
    if (!rel.contains(lattice_image(m, rel))) {
      throw Error(ErrorCode::IllDefinedAction, "action does not respect the torsion relations");
    }
    inverse_mod(act, m);
  }
  std::vector<IntMatrix> inv;
  for (const auto& m : act.action) inv.push_back(inverse_mod(act, m));
  for (const auto& w : act.relators) {
    IntMatrix acc = IntMatrix::identity(d);
    for (auto [g, e] : parse_word(w, act.generators)) acc = acc * (e > 0 ? act.action[g] : inv[g]);
    if (!congruent_identity(act, acc)) {
      throw Error(ErrorCode::IllDefinedAction, "relator " + w + " does not act trivially");
    }
  }
}

IntVector evaluate_cocycle(const ModuleAction& act, const std::vector<IntVector>& values,
                           const std::string& word) {
  const std::size_t d = act.dim();
  IntVector c(d);
  IntMatrix prefix = IntMatrix::identity(d);
  for (auto [g, e] : parse_word(word, act.generators)) {
    if (e > 0) {
      c = add(c, prefix * values[g]);
      prefix = prefix * act.action[g];
    } else {
      // c(x g^{-1}) = c(x) - psi(x g^{-1}) c(g).
      prefix = prefix * inverse_mod(act, act.action[g]);
      c = sub(c, prefix * values[g]);
    }
  }
  return reduce(act, c);
}

CocycleSpace z1(const ModuleAction& act) {
  const Prepared prep = prepare(act);
  const Lattice lifted = cocycle_lattice(act, prep);
  CocycleSpace out = adapted_space(act, lifted, power_lattice(act.relations(), act.generators));
  check_cocycles(act, out);
  return out;
}

CocycleSpace b1(const ModuleAction& act) {
  const Prepared prep = prepare(act);
  const Lattice cob = coboundary_lattice(act, prep);
  if (!cocycle_lattice(act, prep).contains(cob)) {
    throw std::logic_error("coboundaries are not cocycles");
  }
  CocycleSpace out = adapted_space(act, cob, power_lattice(act.relations(), act.generators));
  check_cocycles(act, out);
  return out;
}

AbelianStructure h1(const ModuleAction& act) {
  const Prepared prep = prepare(act);
  const Lattice cocycles = cocycle_lattice(act, prep);
  const Lattice cob = coboundary_lattice(act, prep);
  if (!cocycles.contains(cob)) throw std::logic_error("coboundaries are not cocycles");
  return quotient_structure(cocycles, cob);
}

namespace {

// Hasselgrove-Leech-Trotter enumeration with coincidence handling.
class CosetEnumerator {
 public:
  CosetEnumerator(std::size_t generators, std::vector<Word> relators, std::size_t max_cosets)
      : cols_(2 * generators), relators_(std::move(relators)), max_(max_cosets) {
    new_coset();
  }

  CayleyTable run() {
    for (std::size_t c = 0; c < table_.size(); ++c) {
      if (!alive(c)) continue;
      for (const auto& w : relators_) {
        scan_and_fill(c, w);
        if (!alive(c)) break;
      }
      if (!alive(c)) continue;
      for (std::size_t x = 0; x < cols_; ++x)
        if (table_[c][x] < 0) define(c, x);
    }
    return compact();
  }

 private:
  static constexpr long kNone = -1;

  std::size_t inverse_col(std::size_t x) const { return x ^ 1U; }
  std::size_t col(std::pair<std::size_t, int> letter) const {
    return 2 * letter.first + (letter.second > 0 ? 0 : 1);
  }
  bool alive(std::size_t c) const { return forward_[c] == c; }

  std::size_t new_coset() {
    if (live_ >= max_) {
      throw Error(ErrorCode::EnumerationFailed, "coset enumeration exceeded its guard");
    }
    table_.emplace_back(cols_, kNone);
    forward_.push_back(table_.size() - 1);
    ++live_;
    return table_.size() - 1;
  }

  void define(std::size_t c, std::size_t x) {
    const std::size_t n = new_coset();
    table_[c][x] = static_cast<long>(n);
    table_[n][inverse_col(x)] = static_cast<long>(c);
  }

  std::size_t rep(std::size_t c) {
    std::size_t root = c;
    while (forward_[root] != root) root = forward_[root];
    while (forward_[c] != root) {
      const std::size_t next = forward_[c];
      forward_[c] = root;
      c = next;
    }
    return root;
  }

  void merge(std::size_t a, std::size_t b, std::vector<std::size_t>& queue) {
    a = rep(a);
    b = rep(b);
    if (a == b) return;
    const std::size_t lo = std::min(a, b);
    const std::size_t hi = std::max(a, b);
    forward_[hi] = lo;
    --live_;
    queue.push_back(hi);
  }

  void coincidence(std::size_t a, std::size_t b) {
    std::vector<std::size_t> queue;
    merge(a, b, queue);
    for (std::size_t i = 0; i < queue.size(); ++i) {
      const std::size_t e = queue[i];
      for (std::size_t x = 0; x < cols_; ++x) {
        if (table_[e][x] < 0) continue;
        const auto f = static_cast<std::size_t>(table_[e][x]);
        const std::size_t xi = inverse_col(x);
        table_[f][xi] = kNone;
        const std::size_t e1 = rep(e);
        const std::size_t f1 = rep(f);
        if (table_[e1][x] >= 0) {
          merge(f1, static_cast<std::size_t>(table_[e1][x]), queue);
        } else if (table_[f1][xi] >= 0) {
          merge(e1, static_cast<std::size_t>(table_[f1][xi]), queue);
        } else {
          table_[e1][x] = static_cast<long>(f1);
          table_[f1][xi] = static_cast<long>(e1);
        }
      }
    }
  }

  void scan_and_fill(std::size_t c, const Word& w) {
    if (w.empty()) return;
    std::size_t f = c;
    std::size_t b = c;
    std::size_t i = 0;
    std::size_t j = w.size();  // letters [i, j) are unscanned
    for (;;) {
      while (i < j && table_[f][col(w[i])] >= 0) {
        f = static_cast<std::size_t>(table_[f][col(w[i])]);
        ++i;
      }
      if (i == j) {
        if (f != b) coincidence(f, b);
        return;
      }
      while (j > i && table_[b][inverse_col(col(w[j - 1]))] >= 0) {
        b = static_cast<std::size_t>(table_[b][inverse_col(col(w[j - 1]))]);
        --j;
      }
      if (j == i) {
        coincidence(f, b);
        return;
      }
      if (j == i + 1) {
        table_[f][col(w[i])] = static_cast<long>(b);
        table_[b][inverse_col(col(w[i]))] = static_cast<long>(f);
        return;
      }
      define(f, col(w[i]));
    }
  }

  CayleyTable compact() {
    // Renumber live cosets breadth-first from the identity coset.
    std::map<std::size_t, std::size_t> index;
    std::vector<std::size_t> order{0};
    index[0] = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      for (std::size_t x = 0; x < cols_; x += 2) {
        const std::size_t t = rep(static_cast<std::size_t>(table_[order[k]][x]));
        if (index.emplace(t, order.size()).second) order.push_back(t);
      }
    }
    CayleyTable out;
    out.order = order.size();
    out.right.assign(order.size(), std::vector<std::size_t>(cols_ / 2));
    for (std::size_t k = 0; k < order.size(); ++k)
      for (std::size_t x = 0; x < cols_; x += 2) {
        out.right[k][x / 2] = index.at(rep(static_cast<std::size_t>(table_[order[k]][x])));
      }
    return out;
  }

  std::size_t cols_;
  std::vector<Word> relators_;
  std::size_t max_;
  std::size_t live_ = 0;
  std::vector<std::vector<long>> table_;
  std::vector<std::size_t> forward_;
};

using Key = std::vector<Integer>;

Key flatten(const std::vector<IntVector>& values) {
  Key out;
  for (const auto& v : values) out.insert(out.end(), v.begin(), v.end());
  return out;
}

// Invariant factors of a finite abelian group from |H[p^j]| counts.
AbelianStructure structure_from_counts(
    const std::map<Integer, std::vector<std::size_t>>& ranks_at_least) {
  // ranks_at_least[p][j-1] = number of cyclic p-parts of order >= p^j.
  std::vector<std::vector<Integer>> parts;  // per prime, descending orders
  for (const auto& [p, counts] : ranks_at_least) {
    std::vector<Integer> orders;
    for (std::size_t j = 0; j < counts.size(); ++j) {
      const std::size_t next = j + 1 < counts.size() ? counts[j + 1] : 0;
      Integer pj;
      mpz_pow_ui(pj.get_mpz_t(), p.get_mpz_t(), j + 1);
      for (std::size_t n = next; n < counts[j]; ++n) orders.push_back(pj);
    }
    std::sort(orders.rbegin(), orders.rend());
    parts.push_back(std::move(orders));
  }
  std::size_t width = 0;
  for (const auto& o : parts) width = std::max(width, o.size());
  std::vector<Integer> factors(width, 1);
  for (const auto& o : parts)
    for (std::size_t i = 0; i < o.size(); ++i) factors[i] *= o[i];
  std::reverse(factors.begin(), factors.end());
  return AbelianStructure{0, factors};
}

std::vector<Integer> prime_factors(Integer n) {
  std::vector<Integer> out;
  for (Integer p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

CayleyTable enumerate_group(std::size_t generators, const std::vector<std::string>& relators,
                            std::size_t max_cosets) {
  std::vector<Word> words;
  for (const auto& w : relators) words.push_back(parse_word(w, generators));
  if (generators == 0) return CayleyTable{1, {std::vector<std::size_t>{}}};
  return CosetEnumerator(generators, std::move(words), max_cosets).run();
}

AbelianStructure h1_brute(const ModuleAction& act, std::size_t max_group,
                          std::size_t max_module) {
  const Prepared prep = prepare(act);
  if (act.free > 0) throw Error(ErrorCode::TooLarge, "module is infinite");
  Integer module_order = 1;
  for (const auto& t : act.torsion) module_order *= t;
  if (module_order > max_module) throw Error(ErrorCode::TooLarge, "module is too large");
  const CayleyTable q = enumerate_group(act.generators, act.relators);
  if (q.order > max_group) throw Error(ErrorCode::TooLarge, "group is too large");
  const std::size_t d = act.dim();
  const std::size_t r = act.generators;
  const std::size_t n = q.order;

  Integer tuples = 1;
  for (std::size_t j = 0; j < r; ++j) tuples *= module_order;
  if (tuples * n > 50000000) throw Error(ErrorCode::TooLarge, "too many candidate cocycles");

  // psi of each element and a spanning tree from the identity.
  std::vector<IntMatrix> psi(n);
  std::vector<std::pair<std::size_t, std::size_t>> parent(n, {n, 0});
  psi[0] = IntMatrix::identity(d);
  std::vector<std::size_t> bfs{0};
  std::vector<bool> seen(n, false);
  seen[0] = true;
  for (std::size_t k = 0; k < bfs.size(); ++k) {
    const std::size_t x = bfs[k];
    for (std::size_t g = 0; g < r; ++g) {
      const std::size_t y = q.right[x][g];
      if (seen[y]) continue;
      seen[y] = true;
      psi[y] = psi[x] * prep.psi[g];
      parent[y] = {x, g};
      bfs.push_back(y);
    }
  }
  // Multiplication table from words along the tree.
  std::vector<std::vector<std::size_t>> word_of(n);
  for (std::size_t k = 1; k < bfs.size(); ++k) {
    const auto [x, g] = parent[bfs[k]];
    word_of[bfs[k]] = word_of[x];
    word_of[bfs[k]].push_back(g);
  }
  auto times = [&](std::size_t a, std::size_t b) {
    for (std::size_t g : word_of[b]) a = q.right[a][g];
    return a;
  };
  std::vector<std::vector<std::size_t>> mult(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) mult[a][b] = times(a, b);

  // Odometer over M^r.
  std::vector<IntVector> gen_values(r, IntVector(d));
  auto advance = [&]() {
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t i = 0; i < d; ++i) {
        gen_values[j][i] += 1;
        if (gen_values[j][i] < act.torsion[i]) return true;
        gen_values[j][i] = 0;
      }
    return false;
  };
  std::set<Key> cocycles;
  std::vector<IntVector> c(n);
  bool more = true;
  while (more) {
    for (std::size_t x : bfs) {
      if (x == 0) {
        c[0] = IntVector(d);
        continue;
      }
      const auto [p, g] = parent[x];
      c[x] = reduce(act, add(c[p], psi[p] * gen_values[g]));
    }
    bool ok = true;
    for (std::size_t x = 0; x < n && ok; ++x)
      for (std::size_t g = 0; g < r && ok; ++g)
        ok = reduce(act, add(c[x], psi[x] * gen_values[g])) == c[q.right[x][g]];
    if (ok) {
      for (std::size_t a = 0; a < n && ok; ++a)
        for (std::size_t b = 0; b < n && ok; ++b)
          ok = reduce(act, add(c[a], psi[a] * c[b])) == c[mult[a][b]];
      if (!ok) throw std::logic_error("edge-checked map is not a crossed homomorphism");
      cocycles.insert(flatten(gen_values));
    }
    more = advance();
  }

  // Principal crossed homomorphisms q -> psi(q) m - m, keyed on generators.
  std::set<Key> principal;
  IntVector m(d);
  for (bool go = true; go;) {
    std::vector<IntVector> vals;
    for (std::size_t g = 0; g < r; ++g) vals.push_back(reduce(act, sub(prep.psi[g] * m, m)));
    principal.insert(flatten(vals));
    go = false;
    for (std::size_t i = 0; i < d; ++i) {
      m[i] += 1;
      if (m[i] < act.torsion[i]) {
        go = true;
        break;
      }
      m[i] = 0;
    }
  }
  for (const auto& b : principal)
    if (!cocycles.count(b)) throw std::logic_error("principal map is not a cocycle");

  const std::size_t h_order = cocycles.size() / principal.size();
  if (h_order == 1) return AbelianStructure{};
  std::map<Integer, std::vector<std::size_t>> ranks;
  for (const auto& p : prime_factors(Integer(static_cast<unsigned long>(h_order)))) {
    std::vector<std::size_t> at_least;
    std::size_t prev_log = 0;
    Integer pj = p;
    for (;;) {
      std::size_t killed = 0;
      for (const auto& z : cocycles) {
        Key scaled = z;
        for (std::size_t k = 0; k < scaled.size(); ++k) {
          scaled[k] = floor_mod(scaled[k] * pj, act.torsion[k % d]);
        }
        if (principal.count(scaled)) ++killed;
      }
      // |H[p^j]| = killed / |B| is a power of p.
      std::size_t count = killed / principal.size();
      std::size_t log = 0;
      while (count > 1) {
        count /= p.get_ui();
        ++log;
      }
      if (log == prev_log) break;
      at_least.push_back(log - prev_log);
      prev_log = log;
      pj *= p;
    }
    ranks[p] = at_least;
  }
  return structure_from_counts(ranks);
}

}  // namespace nilcert
