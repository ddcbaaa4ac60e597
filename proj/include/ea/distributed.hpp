#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ea/semantics.hpp"

namespace ea {

// A named module. A module written as several named rules (e.g. a
// wait/work pair) executes as a single rule whose update set is the union
// of the parts; in all machines here the parts carry mutually exclusive
// guards, so the union is the unique enabled part.
struct EAModule {
  std::string name;
  std::vector<std::pair<std::string, RulePtr>> rules;  // sub-rule name, rule

  RulePtr combined() const;
  // Function names mentioned anywhere in the module's rules.
  std::set<std::string> mentioned_symbols() const;
};

struct DistributedProgram {
  VocabularyPtr vocab;
  std::vector<EAModule> modules;

  const EAModule* module_named(const std::string& name) const;
  std::vector<std::string> external_symbols() const;
  bool has_external_symbols() const;

  // Module names must be pairwise distinct and distinct from Me; modules
  // may not update external symbols (only the outside world changes them).
  void validate() const;
};

bool equal(const DistributedProgram& a, const DistributedProgram& b);

// A global state of a distributed program: the Agents universe lists the
// agents and the unary function Mod assigns them module names.
using GlobalState = State;

std::vector<Value> agents_of(const GlobalState& s);
// Module name assigned to an agent, empty if none.
std::string module_name_of(const GlobalState& s, const Value& agent);

// The local state of an agent: the reduct of the global state to the
// functions mentioned in the agent's module, expanded by interpreting Me
// as the agent.
State view(const GlobalState& s, const Value& agent,
           const DistributedProgram& program);

struct EnabledResult {
  bool enabled = false;
  std::vector<ResolvedRule> resolutions;  // the enabling ones
};

EnabledResult agent_enabled(const GlobalState& s, const Value& agent,
                            const DistributedProgram& program);

using EnvAssignment = std::map<std::string, Value>;

// Applies an environment assignment to external symbols. Assignments to
// non-external symbols are rejected.
GlobalState apply_env(const GlobalState& s, const EnvAssignment& env,
                      const DistributedProgram& program);

// Performs one move: the environment assignment (if any) takes effect
// first, then the agent fires under the given choice resolution. The agent
// must be enabled once the assignment is in place.
GlobalState fire_agent(const GlobalState& s, const Value& agent,
                       const DistributedProgram& program,
                       std::optional<int> choice = std::nullopt,
                       const EnvAssignment& env = {});

struct Move {
  Value agent;
  std::optional<int> choice;
  EnvAssignment env_effect;
};

// A finite partially ordered run: moves of one agent are ordered by their
// position in `moves`; `order` adds cross-agent edges (earlier < later by
// move index). States are defined on down-closed subsets via coherence.
struct Run {
  GlobalState initial;
  std::vector<Move> moves;
  std::vector<std::pair<int, int>> order;  // explicit edges i < j

  static Run sequential(GlobalState initial, std::vector<Move> moves);

  std::size_t size() const { return moves.size(); }
  // Full precedence relation (per-agent order plus explicit edges,
  // transitively closed).
  std::vector<std::vector<bool>> precedence() const;
};

struct RunVerdict {
  bool ok = true;
  std::string condition;  // violated condition, empty when ok
  std::string witness;

  explicit operator bool() const { return ok; }
};

// Checks the run conditions: a genuine partial order, per-agent moves
// linearly ordered, and coherence on every finite initial segment (the
// external-function variant when the program declares external symbols).
// Incomparable moves must commute; otherwise the run is reported as
// non-confluent.
RunVerdict validate_run(const DistributedProgram& program, const Run& run);

// The state of the strict down-set of a move.
GlobalState state_at_move(const DistributedProgram& program, const Run& run,
                          int move_index);

// The state of a down-closed subset given as a bitmask over move indices.
GlobalState state_of_segment(const DistributedProgram& program,
                             const Run& run, std::uint64_t segment);

struct Machine {
  std::string name;
  DistributedProgram program;
  GlobalState initial;
};

}  // namespace ea
