#include "nilcert/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "nilcert/json_io.hpp"

namespace nilcert {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string matrix;
  std::string group;
  std::string sub;
  std::string action;
  std::string cert;
  std::string chi;
  std::string p = "3";
  long k = -1;
  long n = -1;
  unsigned a = 2;
  bool brute = false;
  bool text = false;
  bool json_flag = false;
  std::string max_index;
  std::string max_enum;
};

json read_input(const std::string& arg, const std::string& what) {
  if (arg.empty()) throw UsageError("missing " + what);
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) {
    try {
      return json::parse(arg);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::ParseError, what + ": " + e.what());
    }
  }
  if (auto p = preset(arg)) return *p;
  if (!std::filesystem::is_regular_file(arg)) {
    throw UsageError(what + ": '" + arg + "' is neither inline JSON, a preset, nor a file");
  }
  std::ifstream in(arg);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, arg + ": " + e.what());
  }
}

Integer guard_value(const std::string& flag, const char* env, long fallback) {
  std::string text = flag;
  if (text.empty() && env) {
    if (const char* v = std::getenv(env)) text = v;
  }
  if (text.empty()) return fallback;
  try {
    Integer x = parse_integer(text);
    if (x < 1) throw UsageError("guardrails must be positive");
    return x;
  } catch (const Error&) {
    throw UsageError("bad guardrail value '" + text + "'");
  }
}

const char* kEnvMaxIndex = "NILCERT_MAX_INDEX";

void check_index(const Integer& index, const Integer& max_index) {
  if (index > max_index) {
    throw Error(ErrorCode::TooLarge,
                "index " + to_decimal(index) + " exceeds --max-index " + to_decimal(max_index));
  }
}

// Group from --group, letting bare parametric presets take --k / --n.
GroupRef group_input(const Options& o) {
  std::string arg = o.group;
  if ((arg == "heisenberg" || arg == "sol3") && o.k >= 0) arg += ":" + std::to_string(o.k);
  if (arg == "torus" && o.n >= 0) arg += ":" + std::to_string(o.n);
  return group_from_json(read_input(arg, "--group"));
}

const SemidirectLattice& as_semidirect(const GroupRef& g, const char* verb) {
  const auto* s = std::get_if<SemidirectLattice>(&g);
  if (!s) throw Error(ErrorCode::UnsupportedGroupShape, std::string(verb) + " needs a semidirect group");
  return *s;
}

const TwoStepLattice& as_twostep(const GroupRef& g, const char* verb) {
  const auto* t = std::get_if<TwoStepLattice>(&g);
  if (!t) throw Error(ErrorCode::UnsupportedGroupShape, std::string(verb) + " needs a two-step group");
  return *t;
}

SemidirectLattice semidirect_sub(const Options& o, const SemidirectLattice& g) {
  const auto s = group_from_json(read_input(o.sub, "--sub"));
  const auto& out = as_semidirect(s, "--sub");
  if (!(out.group() == g.group())) {
    throw Error(ErrorCode::DimensionMismatch, "--sub lives in a different semidirect product");
  }
  return out;
}

json with_schema(json j) {
  j["schema"] = kSchema;
  return j;
}

void summarize(const json& j, std::ostream& out, const std::string& prefix = "") {
  for (const auto& [key, value] : j.items()) {
    if (key == "schema") continue;
    if (value.is_object()) {
      summarize(value, out, prefix + key + ".");
    } else {
      out << prefix << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump())
          << "\n";
    }
  }
}

using Handler = std::function<json(const Options&)>;

json do_snf(const Options& o) {
  const SmithForm f = snf(matrix_from_json(read_input(o.matrix, "--matrix"), "matrix"));
  json factors = json::array();
  for (const auto& d : f.factors) factors.push_back(integer_to_json(d));
  return {{"S", matrix_to_json(f.S)}, {"U", matrix_to_json(f.U)}, {"V", matrix_to_json(f.V)},
          {"factors", factors}};
}

json do_hnf(const Options& o) {
  const HermiteForm h = hnf(matrix_from_json(read_input(o.matrix, "--matrix"), "matrix"));
  return {{"H", matrix_to_json(h.H)}, {"U", matrix_to_json(h.U)}, {"rank", h.rank},
          {"pivots", h.pivot_cols}};
}

json do_center(const Options& o) {
  const GroupRef g = group_input(o);
  if (const auto* s = std::get_if<SemidirectLattice>(&g)) {
    const SemidirectCenter c = center_rank(*s);
    return {{"rank", c.rank},
            {"structure", structure_to_json(c.structure)},
            {"fixed_fiber", matrix_to_json(c.fixed_fiber.basis())},
            {"central_translation", integer_to_json(c.central_translation)}};
  }
  const NilCenter c = center(std::get<TwoStepLattice>(g));
  return {{"rank", c.rank}, {"kernel_basis", matrix_to_json(c.kernel_basis.basis())}};
}

json do_isolator(const Options& o) {
  const Isolator iso = isolator(as_twostep(group_input(o), "isolator"));
  return {{"commutator", matrix_to_json(iso.commutator.basis())},
          {"sqrt_commutator", matrix_to_json(iso.sqrt_commutator.basis())},
          {"l", iso.l}};
}

json do_normalizer(const Options& o) {
  const GroupRef g = group_input(o);
  const auto& top = as_semidirect(g, "normalizer");
  const SemidirectLattice s = semidirect_sub(o, top);
  const SemidirectLattice n = normalizer(top, s);
  return {{"normalizer", lattice_to_json(n)}, {"index", integer_to_json(index_in(n, s))}};
}

json do_quotient(const Options& o, const Integer& max_index) {
  const GroupRef g = group_input(o);
  if (const auto* top = std::get_if<SemidirectLattice>(&g)) {
    const SemidirectLattice s = semidirect_sub(o, *top);
    check_index(index_in(*top, s), max_index);
    return {{"quotient", structure_to_json(quotient(*top, s))}};
  }
  const auto& t = std::get<TwoStepLattice>(g);
  const NilSublattice s = nilsub_from_json(read_input(o.sub, "--sub"), t);
  const NilSublattice whole = NilSublattice::whole(t);
  if (s.is_finite_index()) check_index(box_index(whole, s), max_index);
  return {{"quotient", structure_to_json(box_quotient(whole, s))}};
}

json do_intermediates(const Options& o, const Integer& max_enum) {
  const GroupRef g = group_input(o);
  const auto& top = as_semidirect(g, "intermediates");
  const SemidirectLattice s = semidirect_sub(o, top);
  json list = json::array();
  for (const auto& h : intermediates(top, s, max_enum)) {
    list.push_back({{"subgroup", lattice_to_json(h)},
                    {"index_over_sub", integer_to_json(index_in(h, s))}});
  }
  return {{"count", list.size()}, {"subgroups", list}};
}

json do_series(const Options& o, const Integer& max_index) {
  const GroupRef g = group_input(o);
  const auto& lambda = as_twostep(g, "series");
  const NilSublattice gamma = nilsub_from_json(read_input(o.sub, "--sub"), lambda);
  return certificate_to_json(subnormal_series(lambda, gamma, max_index));
}

json do_hbar1(const Options& o) {
  return {{"hbar1", structure_to_json(hbar1(as_twostep(group_input(o), "hbar1")))}};
}

json do_cohomology(const Options& o) {
  const ModuleAction act = action_from_json(read_input(o.action, "--action"));
  json out = {{"z1", structure_to_json(z1(act).structure)},
              {"b1", structure_to_json(b1(act).structure)},
              {"h1", structure_to_json(h1(act))}};
  if (o.brute) out["h1_brute"] = structure_to_json(h1_brute(act));
  return out;
}

json do_minkowski(const Options& o) {
  if (o.n < 1) throw UsageError("minkowski needs --n >= 1");
  return {{"n", o.n}, {"bound", integer_to_json(minkowski_bound(static_cast<std::size_t>(o.n)))}};
}

json do_euler(const Options& o) {
  if (o.chi.empty()) throw UsageError("euler-bound needs --chi");
  Integer chi;
  try {
    chi = parse_integer(o.chi);
  } catch (const Error&) {
    throw UsageError("--chi must be an integer");
  }
  return {{"chi", integer_to_json(chi)}, {"bound", euler_length_bound(chi)}};
}

json do_discsym2(const Options& o) {
  const DiscSym2Bound d = discsym2_upper(group_input(o));
  return {{"f", d.f}, {"b", d.b}};
}

json do_sol3(const Options& o, const Integer& max_index) {
  if (o.k < 0) throw UsageError("sol3-tower needs --k");
  if (o.k > 64) throw Error(ErrorCode::TooLarge, "--k is limited to 64");
  Integer total;
  mpz_ui_pow_ui(total.get_mpz_t(), 4, static_cast<unsigned long>(o.k));
  check_index(total, max_index);
  return certificate_to_json(sol3_tower(static_cast<unsigned>(o.k)));
}

json do_witness(const Options& o, const Integer& max_index) {
  if (o.k < 1) throw UsageError("heisenberg-witness needs --k >= 1");
  Integer p;
  try {
    p = parse_integer(o.p);
  } catch (const Error&) {
    throw UsageError("--p must be an integer");
  }
  if (p >= 2 && o.a >= 2 && o.a <= 4096) {
    Integer total;
    mpz_pow_ui(total.get_mpz_t(), p.get_mpz_t(), o.a + 2);
    check_index(total, max_index);
  }
  return certificate_to_json(heisenberg_witness(Integer(o.k), p, o.a));
}

json do_verify(const Options& o, bool& valid) {
  const SeriesCertificate c = certificate_from_json(read_input(o.cert, "--cert"));
  valid = verify_certificate(c);
  return {{"valid", valid}, {"kind", c.kind}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact certificates for lattices in nilpotent and solvable groups", "nilcert"};
  app.require_subcommand(1, 1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--text", o.text, "plain-text summary instead of JSON");
    sub->add_flag("--json", o.json_flag, "JSON report (default)");
    sub->add_option("--max-index", o.max_index, "index guardrail (default 1000000)");
    sub->add_option("--max-enum", o.max_enum, "enumeration guardrail (default 10000)");
  };
  auto group_opts = [&](CLI::App* sub, bool with_sub) {
    sub->add_option("--group,--preset", o.group, "group: inline JSON, preset name, or file")
        ->required();
    sub->add_option("--k", o.k, "parameter for bare heisenberg / sol3 presets");
    sub->add_option("--n", o.n, "parameter for the bare torus preset");
    if (with_sub) {
      sub->add_option("--sub", o.sub, "subgroup: inline JSON, preset name, or file")->required();
    }
  };

  std::map<std::string, CLI::App*> verbs;
  auto verb = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub);
    verbs[name] = sub;
    return sub;
  };

  verb("snf", "Smith normal form U A V = S")->add_option("--matrix", o.matrix)->required();
  verb("hnf", "row Hermite normal form U A = H")->add_option("--matrix", o.matrix)->required();
  group_opts(verb("center", "center of a lattice"), false);
  group_opts(verb("isolator", "isolator of the commutator subgroup"), false);
  group_opts(verb("normalizer", "normalizer of --sub in --group"), true);
  group_opts(verb("quotient", "invariant factors of --group / --sub"), true);
  group_opts(verb("intermediates", "subgroups strictly between --sub and --group"), true);
  group_opts(verb("series", "subnormal series from --sub up to --group"), true);
  group_opts(verb("hbar1", "Hom(Z^b, Z^f) modulo the commutator image"), false);
  {
    CLI::App* sub = verb("cohomology", "Z^1, B^1, H^1 of a module action");
    sub->add_option("--action", o.action)->required();
    sub->add_flag("--brute", o.brute, "cross-check against direct enumeration");
  }
  verb("minkowski", "Minkowski bound for GL(n, Z)")->add_option("--n", o.n)->required();
  verb("euler-bound", "length bound from the Euler characteristic")
      ->add_option("--chi", o.chi)
      ->required();
  group_opts(verb("discsym2-bound", "(rank Z(G), rank Z(G/Z(G)))"), false);
  verb("sol3-tower", "length-k tower certificate")->add_option("--k", o.k)->required();
  {
    CLI::App* sub = verb("heisenberg-witness", "two-layer witness chain above H(k)");
    sub->add_option("--k", o.k)->required();
    sub->add_option("--p", o.p, "prime");
    sub->add_option("--a", o.a, "central exponent (>= 2)");
  }
  verb("verify", "re-check a certificate")->add_option("--cert", o.cert)->required();

  std::vector<std::string> argv_store{"nilcert"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  std::string name;
  for (const auto& [k, sub] : verbs)
    if (sub->parsed()) name = k;

  json report;
  bool valid = true;
  try {
    const Integer max_index = guard_value(o.max_index, kEnvMaxIndex, 1000000);
    const Integer max_enum = guard_value(o.max_enum, nullptr, 10000);
    if (name == "snf") report = do_snf(o);
    else if (name == "hnf") report = do_hnf(o);
    else if (name == "center") report = do_center(o);
    else if (name == "isolator") report = do_isolator(o);
    else if (name == "normalizer") report = do_normalizer(o);
    else if (name == "quotient") report = do_quotient(o, max_index);
    else if (name == "intermediates") report = do_intermediates(o, max_enum);
    else if (name == "series") report = do_series(o, max_index);
    else if (name == "hbar1") report = do_hbar1(o);
    else if (name == "cohomology") report = do_cohomology(o);
    else if (name == "minkowski") report = do_minkowski(o);
    else if (name == "euler-bound") report = do_euler(o);
    else if (name == "discsym2-bound") report = do_discsym2(o);
    else if (name == "sol3-tower") report = do_sol3(o, max_index);
    else if (name == "heisenberg-witness") report = do_witness(o, max_index);
    else if (name == "verify") report = do_verify(o, valid);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    const json error = {{"schema", kSchema},
                        {"error", {{"code", std::string(e.name())}, {"message", e.what()}}}};
    out << error.dump(2) << "\n";
    return 1;
  }

  report = with_schema(std::move(report));
  if (o.text) {
    summarize(report, out);
  } else {
    out << report.dump(2) << "\n";
  }
  return valid ? 0 : 1;
}

}  // namespace nilcert
