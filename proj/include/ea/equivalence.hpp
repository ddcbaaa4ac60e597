#pragma once

#include "ea/explorer.hpp"

namespace ea::equiv {

// The cross-machine configuration map h and its inverse. Both sides work
// on and produce canonical representatives. Throwing MapUndefined reports
// a configuration outside the map's domain.
struct MapUndefined : Error {
  using Error::Error;
};

struct ConfigMap {
  std::function<State(const State&)> forward;
  std::function<State(const State&)> backward;
};

// Matches enabled agents across the two machines, per configuration. The
// B-side state carries the information both directions need (which slot
// holds the input/output turn, which rule its mode admits).
struct AgentCorrespondence {
  // The B agent matching an A agent.
  std::function<Value(const State& b, const Value& agent_a)> forward;
  // The A agent matching a B agent.
  std::function<Value(const State& b, const Value& agent_b)> backward;
};

struct CongruenceVerdict {
  bool ok = true;
  std::string detail;
  explicit operator bool() const { return ok; }
};

// The congruence property: equivalent states stay equivalent under
// Result(agent, -) for every agent, choice and environment assignment
// (Result(agent, a) = a when the agent is disabled).
CongruenceVerdict check_congruence(
    const Congruence& cong, const Machine& machine,
    const std::vector<std::pair<State, State>>& samples,
    const explorer::EnvStrategy& env);

struct SquareFailure {
  std::string kind;  // "square-fail", "enabledness", "common-symbols", ...
  std::string config_a;
  std::string config_b;
  std::string agent;
  std::string expected;
  std::string got;
};

struct LockstepVerdict {
  bool ok = false;
  bool closure_complete = false;
  bool map_incomplete = false;
  std::size_t a_configs = 0;
  std::size_t b_configs = 0;
  std::string detail;
  std::optional<SquareFailure> failure;

  explicit operator bool() const { return ok; }
};

// Certifies lock-step equivalence over the explored quotients: at every
// reachable A-configuration [a] with [b] = h([a]), common symbols agree,
// enabled agents correspond under matched environment assignments, and
// firing commutes with h; symmetrically from B through h's inverse, with
// h a bijection between the two explored quotients. When both closures
// complete the certificate covers all runs; otherwise it holds within the
// given bounds.
LockstepVerdict check_lockstep(const Machine& a, const Machine& b,
                               const Congruence& cong_a,
                               const Congruence& cong_b, const ConfigMap& h,
                               const AgentCorrespondence& corr,
                               const explorer::EnvStrategy& env,
                               const explorer::Bounds& bounds = {});

// Function names interpreted in both machines, minus the distributed
// framework (Me, Mod, Agents, module names) and the builtins.
std::vector<std::string> common_symbols(const DistributedProgram& a,
                                        const DistributedProgram& b);

// JSON line for a verdict, matching the documented export format.
std::string verdict_json(const LockstepVerdict& verdict);

}  // namespace ea::equiv
