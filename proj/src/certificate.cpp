#include "nilcert/certificate.hpp"

namespace nilcert {

std::size_t length_lower_bound(const Integer& total, const Integer& layer_bound) {
  if (total < 1) throw Error(ErrorCode::InvalidParameters, "total index must be positive");
  if (total == 1) return 0;
  if (layer_bound < 2) {
    throw Error(ErrorCode::InvalidParameters, "a nontrivial tower needs layer bound >= 2");
  }
  std::size_t m = 0;
  Integer reach = 1;
  while (reach < total) {
    reach *= layer_bound;
    ++m;
  }
  return m;
}

}  // namespace nilcert
