#include "ea/distributed.hpp"

#include <algorithm>

#include "ea/errors.hpp"

namespace ea {

RulePtr EAModule::combined() const {
  if (rules.size() == 1) return rules.front().second;
  std::vector<RulePtr> items;
  items.reserve(rules.size());
  for (const auto& [name, rule] : rules) items.push_back(rule);
  return Rule::block(std::move(items));
}

std::set<std::string> EAModule::mentioned_symbols() const {
  std::set<std::string> out;
  for (const auto& [name, rule] : rules) collect_symbols(rule, out);
  return out;
}

const EAModule* DistributedProgram::module_named(
    const std::string& name) const {
  for (const EAModule& m : modules) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

std::vector<std::string> DistributedProgram::external_symbols() const {
  std::vector<std::string> out;
  for (const auto& [name, f] : vocab->symbols()) {
    if (f.is_external) out.push_back(name);
  }
  return out;
}

bool DistributedProgram::has_external_symbols() const {
  return !external_symbols().empty();
}

namespace {

void collect_update_targets(const RulePtr& r, std::set<std::string>& out) {
  if (!r) return;
  switch (r->kind) {
    case Rule::Kind::Update:
      out.insert(r->symbol);
      break;
    case Rule::Kind::Block:
      for (const RulePtr& item : r->items) collect_update_targets(item, out);
      break;
    case Rule::Kind::If:
      collect_update_targets(r->body, out);
      collect_update_targets(r->else_body, out);
      break;
    case Rule::Kind::Var:
    case Rule::Kind::Choose:
      collect_update_targets(r->body, out);
      break;
  }
}

}  // namespace

void DistributedProgram::validate() const {
  std::set<std::string> names;
  for (const EAModule& m : modules) {
    if (m.name == "Me")
      throw StructuralError("a module may not be named 'Me'");
    if (!names.insert(m.name).second)
      throw StructuralError("duplicate module name '" + m.name + "'");
    std::set<std::string> targets;
    for (const auto& [rname, rule] : m.rules)
      collect_update_targets(rule, targets);
    for (const std::string& t : targets) {
      const FunctionSymbol* f = vocab->find(t);
      if (f && f->is_external)
        throw StructuralError("module '" + m.name +
                              "' updates external symbol '" + t + "'");
    }
  }
}

bool equal(const DistributedProgram& a, const DistributedProgram& b) {
  if (!(*a.vocab == *b.vocab)) return false;
  if (a.modules.size() != b.modules.size()) return false;
  for (std::size_t i = 0; i < a.modules.size(); ++i) {
    const EAModule& ma = a.modules[i];
    const EAModule& mb = b.modules[i];
    if (ma.name != mb.name || ma.rules.size() != mb.rules.size()) return false;
    for (std::size_t j = 0; j < ma.rules.size(); ++j) {
      if (ma.rules[j].first != mb.rules[j].first) return false;
      if (!equal(ma.rules[j].second, mb.rules[j].second)) return false;
    }
  }
  return true;
}

std::vector<Value> agents_of(const GlobalState& s) {
  if (!s.has_universe("Agents")) return {};
  return s.universe("Agents");
}

std::string module_name_of(const GlobalState& s, const Value& agent) {
  Value m = s.read(Location{"Mod", {agent}});
  if (m.is_undef()) return "";
  return m.name();
}

State view(const GlobalState& s, const Value& agent,
           const DistributedProgram& program) {
  std::string mod = module_name_of(s, agent);
  if (mod.empty())
    throw ContractError("agent " + agent.text() + " has no module");
  const EAModule* module = program.module_named(mod);
  if (!module)
    throw StructuralError("Mod names unknown module '" + mod + "'");
  std::set<std::string> mentioned = module->mentioned_symbols();

  State out(s.vocab_ptr());
  for (const auto& [name, elems] : s.universes())
    out.declare_universe(name, elems);
  for (const auto& [loc, v] : s.interp()) {
    if (mentioned.count(loc.symbol)) out.write(loc, v);
  }
  out.write(Location{"Me", {}}, agent);
  return out;
}

namespace {

// Evaluating against the global state expanded with Me is equivalent to
// evaluating against the materialized view: the reduct keeps every symbol
// the module mentions.
GlobalState with_me(const GlobalState& s, const Value& agent) {
  GlobalState out = s;
  out.write(Location{"Me", {}}, agent);
  return out;
}

}  // namespace

EnabledResult agent_enabled(const GlobalState& s, const Value& agent,
                            const DistributedProgram& program) {
  std::string mod = module_name_of(s, agent);
  if (mod.empty())
    throw ContractError("agent " + agent.text() + " has no module");
  const EAModule* module = program.module_named(mod);
  if (!module)
    throw StructuralError("Mod names unknown module '" + mod + "'");

  GlobalState local = with_me(s, agent);
  EnabledResult result;
  for (ResolvedRule& res : enumerate_choices(module->combined(), local)) {
    if (is_enabled(res.rule, local)) {
      result.enabled = true;
      result.resolutions.push_back(std::move(res));
    }
  }
  return result;
}

GlobalState apply_env(const GlobalState& s, const EnvAssignment& env,
                      const DistributedProgram& program) {
  GlobalState out = s;
  for (const auto& [name, v] : env) {
    const FunctionSymbol* f = program.vocab->find(name);
    if (!f || !f->is_external)
      throw ContractError("environment assignment to non-external symbol '" +
                          name + "'");
    out.write(Location{name, {}}, v);
  }
  return out;
}

GlobalState fire_agent(const GlobalState& s, const Value& agent,
                       const DistributedProgram& program,
                       std::optional<int> choice, const EnvAssignment& env) {
  GlobalState pre = env.empty() ? s : apply_env(s, env, program);
  std::string mod = module_name_of(pre, agent);
  if (mod.empty())
    throw ContractError("agent " + agent.text() + " has no module");
  const EAModule* module = program.module_named(mod);
  if (!module)
    throw StructuralError("Mod names unknown module '" + mod + "'");

  GlobalState local = with_me(pre, agent);
  std::vector<ResolvedRule> instances =
      enumerate_choices(module->combined(), local);
  const ResolvedRule* picked = nullptr;
  for (const ResolvedRule& res : instances) {
    if (res.choice == choice) {
      picked = &res;
      break;
    }
  }
  if (!picked)
    throw ContractError("no such choice resolution for agent " + agent.text());
  if (!is_enabled(picked->rule, local))
    throw ContractError("firing disabled agent " + agent.text());

  UpdateSet us = update_set(picked->rule, local);
  GlobalState out = fire(pre, us).state;
  out.write(Location{"Me", {}}, Value::undef());  // global states carry no Me
  return out;
}

Run Run::sequential(GlobalState initial, std::vector<Move> moves) {
  Run run;
  run.initial = std::move(initial);
  run.moves = std::move(moves);
  for (int i = 0; i + 1 < static_cast<int>(run.moves.size()); ++i) {
    run.order.emplace_back(i, i + 1);
  }
  return run;
}

std::vector<std::vector<bool>> Run::precedence() const {
  int n = static_cast<int>(moves.size());
  std::vector<std::vector<bool>> before(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (moves[i].agent == moves[j].agent) before[i][j] = true;
    }
  }
  for (const auto& [i, j] : order) {
    if (i >= 0 && j >= 0 && i < n && j < n) before[i][j] = true;
  }
  // Floyd-Warshall style closure; runs at desk scale are small.
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (!before[i][k]) continue;
      for (int j = 0; j < n; ++j) {
        if (before[k][j]) before[i][j] = true;
      }
    }
  }
  return before;
}

namespace {

struct SegmentStates {
  const DistributedProgram& program;
  const Run& run;
  std::vector<std::vector<bool>> before;
  std::map<std::uint64_t, GlobalState> memo;
  RunVerdict verdict;

  SegmentStates(const DistributedProgram& p, const Run& r)
      : program(p), run(r), before(r.precedence()) {
    memo.emplace(0, r.initial);
  }

  bool is_down_closed(std::uint64_t mask) const {
    int n = static_cast<int>(run.moves.size());
    for (int j = 0; j < n; ++j) {
      if (!(mask >> j & 1)) continue;
      for (int i = 0; i < n; ++i) {
        if (before[i][j] && !(mask >> i & 1)) return false;
      }
    }
    return true;
  }

  std::vector<int> maximal_elements(std::uint64_t mask) const {
    std::vector<int> out;
    int n = static_cast<int>(run.moves.size());
    for (int i = 0; i < n; ++i) {
      if (!(mask >> i & 1)) continue;
      bool maximal = true;
      for (int j = 0; j < n; ++j) {
        if ((mask >> j & 1) && before[i][j]) {
          maximal = false;
          break;
        }
      }
      if (maximal) out.push_back(i);
    }
    return out;
  }

  // Computes the state of a down-closed segment, checking coherence for
  // every maximal element and confluence across them.
  const GlobalState* state_of(std::uint64_t mask) {
    auto it = memo.find(mask);
    if (it != memo.end()) return &it->second;
    if (!verdict.ok) return nullptr;

    std::optional<GlobalState> result;
    for (int mu : maximal_elements(mask)) {
      std::uint64_t sub = mask & ~(1ull << mu);
      const GlobalState* prev = state_of(sub);
      if (!prev) return nullptr;
      const Move& move = run.moves[mu];
      GlobalState pre = move.env_effect.empty()
                            ? *prev
                            : apply_env(*prev, move.env_effect, program);
      EnabledResult en = agent_enabled(pre, move.agent, program);
      bool choice_ok = false;
      for (const ResolvedRule& res : en.resolutions) {
        if (res.choice == move.choice) choice_ok = true;
      }
      if (!en.enabled || !choice_ok) {
        verdict = {false, "coherence",
                   "agent " + move.agent.text() + " (move " +
                       std::to_string(mu) + ") not enabled at its segment"};
        return nullptr;
      }
      GlobalState next =
          fire_agent(*prev, move.agent, program, move.choice, move.env_effect);
      if (!result) {
        result = std::move(next);
      } else if (!(*result == next)) {
        verdict = {false, "non-confluent run",
                   "incomparable moves around move " + std::to_string(mu) +
                       " do not commute"};
        return nullptr;
      }
    }
    auto [pos, inserted] = memo.emplace(mask, std::move(*result));
    return &pos->second;
  }
};

}  // namespace

RunVerdict validate_run(const DistributedProgram& program, const Run& run) {
  int n = static_cast<int>(run.moves.size());
  if (n > 62) return {false, "size", "validate_run supports at most 62 moves"};

  // Condition 1-2: a finite strict partial order with per-agent moves
  // linearly ordered. Per-agent linearity holds by construction; a cycle
  // in the explicit edges would contradict the order.
  auto before = run.precedence();
  for (int i = 0; i < n; ++i) {
    if (before[i][i])
      return {false, "partial order",
              "ordering edges form a cycle through move " + std::to_string(i)};
  }

  if (!program.has_external_symbols()) {
    for (int i = 0; i < n; ++i) {
      if (!run.moves[i].env_effect.empty())
        return {false, "coherence",
                "move " + std::to_string(i) +
                    " carries an environment effect but the program has no "
                    "external functions"};
    }
  }

  // Conditions 3-4: enumerate the down-closed segments breadth-first and
  // check coherence at each maximal element.
  SegmentStates states(program, run);
  std::vector<std::uint64_t> frontier{0};
  std::set<std::uint64_t> seen{0};
  while (!frontier.empty()) {
    std::vector<std::uint64_t> next;
    for (std::uint64_t mask : frontier) {
      if (!states.state_of(mask)) return states.verdict;
      for (int j = 0; j < n; ++j) {
        if (mask >> j & 1) continue;
        std::uint64_t grown = mask | (1ull << j);
        if (!states.is_down_closed(grown) || !seen.insert(grown).second)
          continue;
        next.push_back(grown);
      }
    }
    frontier = std::move(next);
  }
  return {};
}

GlobalState state_of_segment(const DistributedProgram& program,
                             const Run& run, std::uint64_t segment) {
  SegmentStates states(program, run);
  const GlobalState* s = states.state_of(segment);
  if (!s) throw ContractError("invalid run segment: " + states.verdict.witness);
  return *s;
}

GlobalState state_at_move(const DistributedProgram& program, const Run& run,
                          int move_index) {
  int n = static_cast<int>(run.moves.size());
  if (move_index < 0 || move_index >= n)
    throw ContractError("unknown move " + std::to_string(move_index));
  auto before = run.precedence();
  std::uint64_t mask = 0;
  for (int i = 0; i < n; ++i) {
    if (before[i][move_index]) mask |= 1ull << i;
  }
  return state_of_segment(program, run, mask);
}

}  // namespace ea
