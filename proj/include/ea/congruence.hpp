#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ea/state.hpp"

namespace ea {

// A decidable state equivalence with a canonical-representative map, so
// that configurations (equivalence classes) can be hashed and explored.
struct Congruence {
  std::string name;
  std::function<bool(const State&, const State&)> equiv;
  std::function<State(const State&)> canon;
  // Function names equivalent states must agree on.
  std::vector<std::string> respects;
};

// Configurations are single states; canon is the identity.
Congruence congruence_identity();

// The ring congruence: g agrees modulo 2N, p-g agrees exactly, and every
// other function name has the same interpretation. The canonical
// representative replaces g by g mod 2N and p by (g mod 2N) + (p-g).
Congruence congruence_R(int n);

struct RespectVerdict {
  bool ok = true;
  std::string detail;
  explicit operator bool() const { return ok; }
};

// Verifies that equivalent sample pairs agree on every respected symbol.
RespectVerdict check_respects(
    const Congruence& c,
    const std::vector<std::pair<State, State>>& samples);

}  // namespace ea
