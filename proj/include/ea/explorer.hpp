#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ea/congruence.hpp"
#include "ea/distributed.hpp"

namespace ea::explorer {

// How the environment drives the external functions of a machine.
//   none     - the machine has no external functions (or they never move)
//   free     - every type-correct assignment; by default restricted to the
//              send/receive handshake discipline (flip a send bit only when
//              it matches its receive bit, offering any datum; acknowledge
//              only a pending output). The unconstrained variant enumerates
//              the full assignment space.
//   scripted - a fixed assignment per step
struct EnvStrategy {
  enum class Kind { None, Free, Scripted };

  Kind kind = Kind::None;
  std::map<std::string, std::string> domains;  // external symbol -> universe
  bool handshake = true;
  std::vector<EnvAssignment> script;

  static EnvStrategy none();
  static EnvStrategy free_env(std::map<std::string, std::string> domains,
                              bool handshake = true);
  static EnvStrategy scripted(std::vector<EnvAssignment> script);

  // Candidate assignments before a move. Handshake and none strategies
  // list the empty assignment first; the unconstrained variant enumerates
  // full assignments (the identity assignment subsumes the empty one);
  // scripted steps produce exactly the scripted assignment.
  std::vector<EnvAssignment> options(const State& s, std::size_t step) const;
};

struct Bounds {
  std::size_t max_nodes = 100000;
  int max_depth = 64;
};

struct Step {
  Value agent;
  std::optional<int> choice;
  EnvAssignment env;
  GlobalState state;  // after the environment assignment and the fire
};

// All (environment assignment; agent fire) successors of a state, in a
// stable order.
std::vector<Step> successors(const DistributedProgram& program,
                             const GlobalState& s, const EnvStrategy& env,
                             std::size_t step);

struct TransitionGraph {
  struct Node {
    State representative;
    std::string key;  // canonical encoding of the representative
    int depth = 0;
  };
  struct Edge {
    int from = 0;
    Value agent;
    std::optional<int> choice;
    EnvAssignment env;
    int to = 0;
  };

  std::vector<Node> nodes;
  std::vector<Edge> edges;
  int initial = 0;
  bool complete = false;  // closure reached within bounds

  std::unordered_map<std::string, int> index;
};

// Breadth-first closure of the initial configuration under
// (environment assignment; agent fire) steps, in the quotient induced by
// the congruence. Node identity is the canonical encoding of the
// representative state. Deterministic, including under jobs > 1.
TransitionGraph explore(const DistributedProgram& program,
                        const GlobalState& initial, const Congruence& cong,
                        const EnvStrategy& env, const Bounds& bounds = {},
                        int jobs = 1);

// All sequential runs of at most `depth` moves, deduplicated by trace, in
// a stable order. Every prefix of an enumerated run is also enumerated.
std::vector<Run> enumerate_runs(const DistributedProgram& program,
                                const GlobalState& initial,
                                const EnvStrategy& env, int depth,
                                std::size_t max_runs = SIZE_MAX);

struct InvariantResult {
  bool holds = true;
  // Shortest path to a violating configuration: (agent, choice, env) steps
  // plus the violating state.
  std::vector<TransitionGraph::Edge> path;
  std::optional<State> violation;
  bool complete = false;
};

InvariantResult check_invariant(const DistributedProgram& program,
                                const GlobalState& initial,
                                const Congruence& cong, const EnvStrategy& env,
                                const Bounds& bounds,
                                const std::function<bool(const State&)>& pred);

// Line-delimited JSON export: one node record per line, then one edge
// record per line.
std::string export_graph(const TransitionGraph& graph);

}  // namespace ea::explorer
