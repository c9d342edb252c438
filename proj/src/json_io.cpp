#include "nilcert/json_io.hpp"

#include <charconv>

namespace nilcert {

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { throw Error(ErrorCode::ParseError, msg); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::size_t count_from_json(const json& j, const std::string& what) {
  const Integer x = integer_from_json(j, what);
  if (x < 0 || !x.fits_ulong_p()) parse_fail(what + " must be a non-negative count");
  return x.get_ui();
}

json count_or_string(const Integer& x) {
  if (x.fits_slong_p()) return x.get_si();
  return x.get_str();
}

bool bool_from_json(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_boolean()) parse_fail(std::string("field '") + key + "' must be a boolean");
  return v.get<bool>();
}

std::vector<Integer> integers_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) parse_fail(what + " must be an array");
  std::vector<Integer> out;
  for (const auto& x : j) out.push_back(integer_from_json(x, what));
  return out;
}

json integers_to_json(const std::vector<Integer>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(integer_to_json(x));
  return out;
}

SemidirectLattice semidirect_from_json(const json& j) {
  const IntMatrix a = matrix_from_json(field(j, "matrix"), "matrix");
  if (!a.is_square() || a.rows() == 0) parse_fail("holonomy matrix must be square and non-empty");
  if (j.contains("n") && count_from_json(j.at("n"), "n") != a.rows()) {
    parse_fail("n does not match the holonomy matrix");
  }
  const std::size_t n = a.rows();
  Lattice fiber = Lattice::full(n);
  if (j.contains("sublattice")) {
    const IntMatrix s = matrix_from_json(j.at("sublattice"), "sublattice", n);
    if (s.cols() != n) parse_fail("sublattice has the wrong width");
    fiber = Lattice(s);
  }
  Integer m = 1;
  if (j.contains("m")) m = integer_from_json(j.at("m"), "m");
  return SemidirectLattice(SemidirectGroup(a), fiber, m);
}

TwoStepLattice twostep_from_json(const json& j) {
  const std::size_t f = count_from_json(field(j, "f"), "f");
  const std::size_t b = count_from_json(field(j, "b"), "b");
  const json& forms = field(j, "forms");
  if (!forms.is_array()) parse_fail("forms must be an array");
  std::vector<IntMatrix> cs;
  for (const auto& c : forms) cs.push_back(matrix_from_json(c, "form", b));
  return TwoStepLattice(f, b, std::move(cs));
}

json tower_level_to_json(const TowerLevel& l) {
  return {{"level", l.level},
          {"index", integer_to_json(l.index)},
          {"quotient_factors", integers_to_json(l.quotient.torsion)},
          {"normalizer_verified", l.normalizer_verified}};
}

}  // namespace

json integer_to_json(const Integer& x) { return x.get_str(); }

Integer integer_from_json(const json& j, const std::string& what) {
  if (j.is_string()) {
    try {
      return parse_integer(j.get<std::string>());
    } catch (const Error&) {
      parse_fail(what + ": not a decimal integer");
    }
  }
  if (j.is_number_integer()) {
    return j.is_number_unsigned() ? Integer(std::to_string(j.get<std::uint64_t>()))
                                  : Integer(std::to_string(j.get<std::int64_t>()));
  }
  parse_fail(what + ": expected an integer or a decimal string");
}

json matrix_to_json(const IntMatrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(vector_to_json(m.row_vector(i)));
  return out;
}

IntMatrix matrix_from_json(const json& j, const std::string& what, std::size_t cols) {
  if (!j.is_array()) parse_fail(what + " must be an array of rows");
  std::vector<IntVector> rows;
  for (const auto& r : j) rows.push_back(vector_from_json(r, what));
  for (const auto& r : rows)
    if (r.size() != rows.front().size()) parse_fail(what + " is ragged");
  return IntMatrix::from_rows(rows, cols);
}

json vector_to_json(const IntVector& v) { return integers_to_json(v); }

IntVector vector_from_json(const json& j, const std::string& what) {
  return integers_from_json(j, what);
}

json structure_to_json(const AbelianStructure& s) {
  return {{"free_rank", s.free_rank}, {"torsion", integers_to_json(s.torsion)}};
}

AbelianStructure structure_from_json(const json& j) {
  AbelianStructure s;
  s.free_rank = count_from_json(field(j, "free_rank"), "free_rank");
  s.torsion = integers_from_json(field(j, "torsion"), "torsion");
  return s;
}

json lattice_to_json(const SemidirectLattice& g) {
  return {{"type", "semidirect"},
          {"n", g.group().n()},
          {"matrix", matrix_to_json(g.group().holonomy())},
          {"sublattice", matrix_to_json(g.fiber().basis())},
          {"m", count_or_string(g.translation())}};
}

json lattice_to_json(const TwoStepLattice& g) {
  json forms = json::array();
  for (const auto& c : g.forms()) forms.push_back(matrix_to_json(c));
  return {{"type", "twostep"}, {"f", g.f()}, {"b", g.b()}, {"forms", forms}};
}

json group_to_json(const GroupRef& g) {
  return std::visit([](const auto& x) { return lattice_to_json(x); }, g);
}

GroupRef group_from_json(const json& j) {
  const json& type = field(j, "type");
  if (type == "semidirect") return semidirect_from_json(j);
  if (type == "twostep") return twostep_from_json(j);
  throw Error(ErrorCode::UnsupportedGroupShape, "unknown group type " + type.dump());
}

json nilsub_to_json(const NilSublattice& s) {
  return {{"type", "nilsub"}, {"u", matrix_to_json(s.u().basis())},
          {"w", matrix_to_json(s.w().basis())}};
}

NilSublattice nilsub_from_json(const json& j, const TwoStepLattice& parent) {
  if (field(j, "type") != "nilsub") parse_fail("expected a nilsub description");
  const IntMatrix u = matrix_from_json(field(j, "u"), "u", parent.b());
  const IntMatrix w = matrix_from_json(field(j, "w"), "w", parent.f());
  if (u.cols() != parent.b() || w.cols() != parent.f()) {
    throw Error(ErrorCode::DimensionMismatch, "nilsub dimensions differ from the group");
  }
  return NilSublattice(parent, Lattice(u), Lattice(w));
}

json subgroup_to_json(const SubgroupRef& s) {
  if (const auto* x = std::get_if<SemidirectLattice>(&s)) return lattice_to_json(*x);
  return nilsub_to_json(std::get<NilSublattice>(s));
}

json action_to_json(const ModuleAction& a) {
  json mats = json::array();
  for (const auto& m : a.action) mats.push_back(matrix_to_json(m));
  return {{"generators", a.generators},
          {"relators", a.relators},
          {"module", {{"free", a.free}, {"torsion", integers_to_json(a.torsion)}}},
          {"action", mats}};
}

ModuleAction action_from_json(const json& j) {
  ModuleAction a;
  a.generators = count_from_json(field(j, "generators"), "generators");
  const json& rel = field(j, "relators");
  if (!rel.is_array()) parse_fail("relators must be an array of words");
  for (const auto& w : rel) {
    if (!w.is_string()) parse_fail("relators must be strings");
    a.relators.push_back(w.get<std::string>());
  }
  const json& mod = field(j, "module");
  a.free = count_from_json(field(mod, "free"), "module.free");
  a.torsion = integers_from_json(field(mod, "torsion"), "module.torsion");
  const json& mats = field(j, "action");
  if (!mats.is_array()) parse_fail("action must be an array of matrices");
  for (const auto& m : mats) a.action.push_back(matrix_from_json(m, "action", a.dim()));
  return a;
}

json certificate_to_json(const SeriesCertificate& c) {
  json chain = json::array();
  for (const auto& link : c.chain) {
    chain.push_back({{"subgroup", subgroup_to_json(link.subgroup)},
                     {"quotient_factors", integers_to_json(link.quotient.torsion)},
                     {"quotient_free_rank", link.quotient.free_rank},
                     {"normality_verified", link.normality_verified},
                     {"central", link.central}});
  }
  json levels = json::array();
  for (const auto& l : c.levels) levels.push_back(tower_level_to_json(l));
  json out = {{"schema", kSchema},
              {"kind", c.kind},
              {"group", group_to_json(c.group_ref)},
              {"base", subgroup_to_json(c.base)},
              {"chain", chain},
              {"total_index", integer_to_json(c.total_index)},
              {"min_length", c.min_length},
              {"max_quotient_order", integer_to_json(c.max_quotient_order)},
              {"closure_verified", c.closure_verified},
              {"closure_size", c.closure_size},
              {"levels", levels}};
  if (c.profile) out["profile"] = {c.profile->first, c.profile->second};
  if (c.source) out["source"] = lattice_to_json(*c.source);
  if (c.scale) {
    out["scale"] = {{"du", integers_to_json(c.scale->du)}, {"dw", integers_to_json(c.scale->dw)}};
  }
  return out;
}

SeriesCertificate certificate_from_json(const json& j) {
  if (j.contains("schema") && j.at("schema") != kSchema) parse_fail("unsupported schema");
  SeriesCertificate c;
  const json& kind = field(j, "kind");
  if (!kind.is_string()) parse_fail("kind must be a string");
  c.kind = kind.get<std::string>();
  c.group_ref = group_from_json(field(j, "group"));
  auto subgroup = [&](const json& s) -> SubgroupRef {
    if (const auto* t = std::get_if<TwoStepLattice>(&c.group_ref)) {
      if (field(s, "type") != "nilsub") {
        throw Error(ErrorCode::UnresolvableReference, "subgroup does not live in a two-step group");
      }
      return nilsub_from_json(s, *t);
    }
    if (field(s, "type") != "semidirect") {
      throw Error(ErrorCode::UnresolvableReference, "subgroup does not live in a semidirect group");
    }
    return std::get<SemidirectLattice>(group_from_json(s));
  };
  c.base = subgroup(field(j, "base"));
  const json& chain = field(j, "chain");
  if (!chain.is_array()) parse_fail("chain must be an array");
  for (const auto& link : chain) {
    ChainLink l{subgroup(field(link, "subgroup")),
                AbelianStructure{count_from_json(field(link, "quotient_free_rank"), "quotient_free_rank"),
                                 integers_from_json(field(link, "quotient_factors"),
                                                    "quotient_factors")},
                bool_from_json(link, "normality_verified"), bool_from_json(link, "central")};
    c.chain.push_back(std::move(l));
  }
  c.total_index = integer_from_json(field(j, "total_index"), "total_index");
  c.min_length = count_from_json(field(j, "min_length"), "min_length");
  c.max_quotient_order = integer_from_json(field(j, "max_quotient_order"), "max_quotient_order");
  c.closure_verified = bool_from_json(j, "closure_verified");
  c.closure_size = count_from_json(field(j, "closure_size"), "closure_size");
  const json& levels = field(j, "levels");
  if (!levels.is_array()) parse_fail("levels must be an array");
  for (const auto& l : levels) {
    c.levels.push_back({static_cast<unsigned>(count_from_json(field(l, "level"), "level")),
                        integer_from_json(field(l, "index"), "index"),
                        AbelianStructure{0, integers_from_json(field(l, "quotient_factors"),
                                                               "quotient_factors")},
                        bool_from_json(l, "normalizer_verified")});
  }
  if (j.contains("profile")) {
    const json& p = j.at("profile");
    if (!p.is_array() || p.size() != 2) parse_fail("profile must be a pair");
    c.profile = std::make_pair(count_from_json(p[0], "profile"), count_from_json(p[1], "profile"));
  }
  if (j.contains("source")) {
    auto g = group_from_json(j.at("source"));
    if (!std::holds_alternative<TwoStepLattice>(g)) {
      throw Error(ErrorCode::UnresolvableReference, "source must be a two-step group");
    }
    c.source = std::get<TwoStepLattice>(g);
  }
  if (j.contains("scale")) {
    const json& s = j.at("scale");
    c.scale = RationalScale{integers_from_json(field(s, "du"), "du"),
                            integers_from_json(field(s, "dw"), "dw")};
  }
  return c;
}

std::vector<std::string> preset_names() {
  return {"sol3", "sol3:<k>", "sol3:<k>:<ij>", "heisenberg:<k>", "torus:<n>", "klein-s1"};
}

namespace {

std::optional<unsigned long> parse_count(const std::string& s) {
  unsigned long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::vector<std::string> split_colon(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(':', start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

}  // namespace

std::optional<json> preset(const std::string& name) {
  const auto parts = split_colon(name);
  const std::string& head = parts[0];
  if (head == "sol3") {
    if (parts.size() == 1) return lattice_to_json(sol3_gamma(0));
    const auto k = parse_count(parts[1]);
    if (!k || *k > 64) return std::nullopt;
    if (parts.size() == 2) return lattice_to_json(sol3_gamma(static_cast<unsigned>(*k)));
    if (parts.size() == 3 && parts[2].size() == 2) {
      const int i = parts[2][0] - '0';
      const int jj = parts[2][1] - '0';
      if (i < 0 || i > 1 || jj < 0 || jj > 1 || *k == 0) return std::nullopt;
      return lattice_to_json(sol3_gamma(static_cast<unsigned>(*k), i, jj));
    }
    return std::nullopt;
  }
  if (head == "heisenberg" && parts.size() == 2) {
    const auto k = parse_count(parts[1]);
    if (!k || *k == 0) return std::nullopt;
    return lattice_to_json(TwoStepLattice::heisenberg(Integer(*k)));
  }
  if (head == "torus" && parts.size() == 2) {
    const auto n = parse_count(parts[1]);
    if (!n || *n == 0 || *n > 64) return std::nullopt;
    return lattice_to_json(TwoStepLattice::abelian(0, *n));
  }
  if (name == "klein-s1") {
    return lattice_to_json(
        SemidirectLattice(SemidirectGroup(IntMatrix{{-1, 0}, {0, 1}}), Lattice::full(2)));
  }
  return std::nullopt;
}

}  // namespace nilcert
