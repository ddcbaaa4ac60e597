#include "ea/congruence.hpp"

#include "ea/errors.hpp"

namespace ea {

namespace {

long long read_int(const State& s, const std::string& symbol) {
  return s.read(Location{symbol, {}}).as_int();
}

long long mod2n(long long v, int n) {
  long long m = v % (2 * n);
  return m < 0 ? m + 2 * n : m;
}

// Interpretations equal for every symbol except the listed ones.
bool agree_except(const State& a, const State& b,
                  const std::vector<std::string>& except) {
  auto skipped = [&](const std::string& symbol) {
    for (const std::string& e : except) {
      if (symbol == e) return true;
    }
    return false;
  };
  for (const auto& [loc, v] : a.interp()) {
    if (skipped(loc.symbol)) continue;
    if (!(b.read(loc) == v)) return false;
  }
  for (const auto& [loc, v] : b.interp()) {
    if (skipped(loc.symbol)) continue;
    if (!(a.read(loc) == v)) return false;
  }
  return true;
}

}  // namespace

Congruence congruence_identity() {
  Congruence c;
  c.name = "identity";
  c.equiv = [](const State& a, const State& b) { return a == b; };
  c.canon = [](const State& s) { return s; };
  c.respects = {};  // everything, trivially
  return c;
}

Congruence congruence_R(int n) {
  if (n < 1) throw ContractError("congruence_R requires N >= 1");
  Congruence c;
  c.name = "ring-R:" + std::to_string(n);
  c.equiv = [n](const State& a, const State& b) {
    long long pa = read_int(a, "p"), ga = read_int(a, "g");
    long long pb = read_int(b, "p"), gb = read_int(b, "g");
    if (mod2n(ga, n) != mod2n(gb, n)) return false;
    if (pa - ga != pb - gb) return false;
    return agree_except(a, b, {"p", "g"}) && a.universes() == b.universes();
  };
  c.canon = [n](const State& s) {
    long long p = read_int(s, "p"), g = read_int(s, "g");
    State out = s;
    long long gm = mod2n(g, n);
    out.write(Location{"g", {}}, Value::integer(gm));
    out.write(Location{"p", {}}, Value::integer(gm + (p - g)));
    return out;
  };
  c.respects = {"Buffer",        "InputDatum", "OutputDatum", "InSendBit",
                "InReceiveBit",  "OutSendBit", "OutReceiveBit"};
  return c;
}

RespectVerdict check_respects(
    const Congruence& c,
    const std::vector<std::pair<State, State>>& samples) {
  for (const auto& [a, b] : samples) {
    if (!c.equiv(a, b)) continue;
    for (const std::string& f : c.respects) {
      if (a.entries_of(f) != b.entries_of(f)) {
        return {false, "congruence '" + c.name + "' violates symbol '" + f +
                           "' on an equivalent pair"};
      }
    }
  }
  return {};
}

}  // namespace ea
