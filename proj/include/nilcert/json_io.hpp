#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nilcert/cohomology.hpp"
#include "nilcert/invariants.hpp"

namespace nilcert {

using json = nlohmann::json;

inline constexpr const char* kSchema = "nilcert/1";

// Integers travel as decimal strings; plain JSON integers are accepted on input.
json integer_to_json(const Integer& x);
Integer integer_from_json(const json& j, const std::string& what);

json matrix_to_json(const IntMatrix& m);
/// `cols` is used when the matrix has no rows.
IntMatrix matrix_from_json(const json& j, const std::string& what, std::size_t cols = 0);
json vector_to_json(const IntVector& v);
IntVector vector_from_json(const json& j, const std::string& what);

json structure_to_json(const AbelianStructure& s);
AbelianStructure structure_from_json(const json& j);

json lattice_to_json(const SemidirectLattice& g);
json lattice_to_json(const TwoStepLattice& g);
json group_to_json(const GroupRef& g);
/// {"type":"semidirect",...} or {"type":"twostep",...}; throws ParseError.
GroupRef group_from_json(const json& j);

json nilsub_to_json(const NilSublattice& s);
/// {"type":"nilsub","u":[[..]],"w":[[..]]} inside `parent`.
NilSublattice nilsub_from_json(const json& j, const TwoStepLattice& parent);
json subgroup_to_json(const SubgroupRef& s);

json action_to_json(const ModuleAction& a);
ModuleAction action_from_json(const json& j);

json certificate_to_json(const SeriesCertificate& c);
SeriesCertificate certificate_from_json(const json& j);

/// Built-in group descriptions: sol3, sol3:k, sol3:k:ij, heisenberg:k,
/// torus:n, klein-s1.
std::vector<std::string> preset_names();
/// Returns nullopt for names that are not presets.
std::optional<json> preset(const std::string& name);

}  // namespace nilcert
