#include "qint/core/rng.hpp"

#include <sstream>
#include <stdexcept>

namespace qint {

std::string rng_state(const Rng& rng) {
  std::ostringstream out;
  out << rng;
  return out.str();
}

void restore_rng_state(Rng& rng, const std::string& state) {
  std::istringstream in(state);
  in >> rng;
  if (in.fail()) throw std::invalid_argument("malformed RNG state");
}

}  // namespace qint
