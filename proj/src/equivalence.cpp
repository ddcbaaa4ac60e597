#include "ea/equivalence.hpp"

#include <algorithm>
#include <deque>

#include "json.hpp"

namespace ea::equiv {

namespace {

using explorer::EnvStrategy;

std::optional<std::string> common_disagreement(
    const State& a, const State& b, const std::vector<std::string>& common) {
  for (const std::string& f : common) {
    if (a.entries_of(f) != b.entries_of(f)) return f;
  }
  return std::nullopt;
}

struct EnabledMove {
  Value agent;
  std::optional<int> choice;
};

std::vector<EnabledMove> enabled_moves(const DistributedProgram& program,
                                       const GlobalState& s) {
  std::vector<EnabledMove> out;
  for (const Value& agent : agents_of(s)) {
    EnabledResult r = agent_enabled(s, agent, program);
    for (const ResolvedRule& res : r.resolutions)
      out.push_back({agent, res.choice});
  }
  return out;
}

}  // namespace

std::vector<std::string> common_symbols(const DistributedProgram& a,
                                        const DistributedProgram& b) {
  std::set<std::string> skip = {"Me", "Mod", "Agents"};
  for (const EAModule& m : a.modules) skip.insert(m.name);
  for (const EAModule& m : b.modules) skip.insert(m.name);
  std::vector<std::string> out;
  for (const auto& [name, f] : a.vocab->symbols()) {
    if (Vocabulary::is_builtin(name) || skip.count(name)) continue;
    if (b.vocab->has(name)) out.push_back(name);
  }
  return out;
}

CongruenceVerdict check_congruence(
    const Congruence& cong, const Machine& machine,
    const std::vector<std::pair<State, State>>& samples,
    const EnvStrategy& env) {
  for (const auto& [a1, a2] : samples) {
    if (!cong.equiv(a1, a2))
      return {false, "sample pair is not equivalent under " + cong.name};
    for (const EnvAssignment& delta : env.options(a1, 0)) {
      GlobalState d1 = delta.empty() ? a1 : apply_env(a1, delta, machine.program);
      GlobalState d2 = delta.empty() ? a2 : apply_env(a2, delta, machine.program);
      for (const Value& agent : agents_of(a1)) {
        EnabledResult e1 = agent_enabled(d1, agent, machine.program);
        EnabledResult e2 = agent_enabled(d2, agent, machine.program);
        // Result(agent, a) = a when disabled.
        std::set<int> c1, c2;
        for (const ResolvedRule& r : e1.resolutions)
          c1.insert(r.choice.value_or(-1));
        for (const ResolvedRule& r : e2.resolutions)
          c2.insert(r.choice.value_or(-1));
        if (c1 != c2)
          return {false, "agent " + agent.text() +
                             " enabled differently on an equivalent pair"};
        if (c1.empty()) {
          if (!cong.equiv(d1, d2))
            return {false, "environment step broke equivalence"};
          continue;
        }
        for (const ResolvedRule& r : e1.resolutions) {
          GlobalState r1 =
              fire_agent(d1, agent, machine.program, r.choice, {});
          GlobalState r2 =
              fire_agent(d2, agent, machine.program, r.choice, {});
          if (!cong.equiv(r1, r2))
            return {false, "Result(" + agent.text() +
                               ", -) broke equivalence under " + cong.name};
        }
      }
    }
  }
  return {};
}

namespace {

struct QuotientExplorer {
  const Machine& machine;
  const Congruence& cong;
  const EnvStrategy& env;
  const explorer::Bounds& bounds;

  std::vector<State> reps;
  std::unordered_map<std::string, int> index;
  bool complete = true;

  explicit QuotientExplorer(const Machine& m, const Congruence& c,
                            const EnvStrategy& e, const explorer::Bounds& b)
      : machine(m), cong(c), env(e), bounds(b) {}

  int intern(const State& s) {
    State rep = cong.canon(s);
    std::string key = rep.canonical_text();
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    if (reps.size() >= bounds.max_nodes) {
      complete = false;
      return -1;
    }
    int id = static_cast<int>(reps.size());
    reps.push_back(std::move(rep));
    index.emplace(std::move(key), id);
    return id;
  }
};

}  // namespace

LockstepVerdict check_lockstep(const Machine& a, const Machine& b,
                               const Congruence& cong_a,
                               const Congruence& cong_b, const ConfigMap& h,
                               const AgentCorrespondence& corr,
                               const EnvStrategy& env,
                               const explorer::Bounds& bounds) {
  LockstepVerdict verdict;
  std::vector<std::string> common = common_symbols(a.program, b.program);

  auto fail = [&](SquareFailure f) {
    verdict.ok = false;
    verdict.failure = std::move(f);
    verdict.detail = verdict.failure->kind;
    return verdict;
  };

  // One commuting-square check: configuration pair (ra, rb), one matched
  // environment assignment, all agents. Returns false on failure (verdict
  // filled in).
  bool swept_from_b = false;
  auto check_square = [&](const State& ra, const State& rb,
                          const EnvAssignment& delta,
                          std::vector<State>* successors_a,
                          std::vector<State>* successors_b,
                          std::optional<SquareFailure>& failure) {
    GlobalState da = delta.empty() ? ra : apply_env(ra, delta, a.program);
    GlobalState db = delta.empty() ? rb : apply_env(rb, delta, b.program);
    std::vector<EnabledMove> ea = enabled_moves(a.program, da);
    std::vector<EnabledMove> eb = enabled_moves(b.program, db);

    // Enabledness correspondence, A -> B.
    for (const EnabledMove& ma : ea) {
      Value beta = corr.forward(db, ma.agent);
      bool found = false;
      for (const EnabledMove& mb : eb) {
        if (mb.agent == beta && mb.choice == ma.choice) found = true;
      }
      if (!found) {
        failure = SquareFailure{"enabledness", ra.canonical_text(),
                                rb.canonical_text(), ma.agent.text(),
                                "agent " + beta.text() + " enabled", "disabled"};
        return false;
      }
      GlobalState res_a = fire_agent(da, ma.agent, a.program, ma.choice, {});
      GlobalState res_b = fire_agent(db, beta, b.program, ma.choice, {});
      State can_a = cong_a.canon(res_a);
      State can_b = cong_b.canon(res_b);
      State mapped = cong_b.canon(h.forward(can_a));
      if (!(mapped == can_b)) {
        failure = SquareFailure{"square-fail", ra.canonical_text(),
                                rb.canonical_text(), ma.agent.text(),
                                mapped.canonical_text(),
                                can_b.canonical_text()};
        return false;
      }
      if (successors_a) successors_a->push_back(std::move(can_a));
      if (successors_b) successors_b->push_back(std::move(can_b));
    }
    // Enabledness correspondence, B -> A.
    for (const EnabledMove& mb : eb) {
      Value alpha = corr.backward(db, mb.agent);
      bool found = false;
      for (const EnabledMove& ma : ea) {
        if (ma.agent == alpha && ma.choice == mb.choice) found = true;
      }
      if (!found) {
        failure = SquareFailure{"enabledness", ra.canonical_text(),
                                rb.canonical_text(), mb.agent.text(),
                                "agent " + alpha.text() + " enabled",
                                "disabled"};
        return false;
      }
    }
    return true;
  };

  auto sweep = [&](bool from_a) -> bool {
    QuotientExplorer q(from_a ? a : b, from_a ? cong_a : cong_b, env, bounds);
    int root = q.intern(from_a ? a.initial : b.initial);
    if (root < 0) return true;
    std::deque<std::pair<int, int>> frontier{{root, 0}};
    std::set<int> seen{root};
    while (!frontier.empty()) {
      auto [at, depth] = frontier.front();
      frontier.pop_front();
      if (depth >= bounds.max_depth) {
        q.complete = false;
        continue;
      }
      State ra, rb;
      try {
        if (from_a) {
          ra = q.reps[at];
          rb = cong_b.canon(h.forward(ra));
          State back = cong_a.canon(h.backward(rb));
          if (!(back == ra)) {
            fail({"bijectivity", ra.canonical_text(), rb.canonical_text(), "",
                  ra.canonical_text(), back.canonical_text()});
            return false;
          }
        } else {
          rb = q.reps[at];
          ra = cong_a.canon(h.backward(rb));
          State fwd = cong_b.canon(h.forward(ra));
          if (!(fwd == rb)) {
            fail({"bijectivity", ra.canonical_text(), rb.canonical_text(), "",
                  rb.canonical_text(), fwd.canonical_text()});
            return false;
          }
        }
        if (auto f = common_disagreement(ra, rb, common)) {
          fail({"common-symbols", ra.canonical_text(), rb.canonical_text(),
                "", "agreement on '" + *f + "'", "disagreement"});
          return false;
        }
        for (const EnvAssignment& delta :
             env.options(from_a ? ra : rb, static_cast<std::size_t>(depth))) {
          std::vector<State> next_a, next_b;
          std::optional<SquareFailure> failure;
          if (!check_square(ra, rb, delta, &next_a, &next_b, failure)) {
            fail(std::move(*failure));
            return false;
          }
          const std::vector<State>& own = from_a ? next_a : next_b;
          for (const State& s : own) {
            int id = q.intern(s);
            if (id >= 0 && seen.insert(id).second)
              frontier.emplace_back(id, depth + 1);
          }
        }
      } catch (const MapUndefined& e) {
        verdict.ok = false;
        verdict.map_incomplete = true;
        verdict.detail = std::string("map incomplete: ") + e.what();
        verdict.failure = SquareFailure{
            "map-incomplete", q.reps[at].canonical_text(), "", "", "", ""};
        return false;
      }
    }
    if (from_a) {
      verdict.a_configs = q.reps.size();
      verdict.closure_complete = q.complete;
    } else {
      verdict.b_configs = q.reps.size();
      verdict.closure_complete = verdict.closure_complete && q.complete;
      swept_from_b = true;
    }
    return true;
  };

  if (!sweep(true)) return verdict;
  if (!sweep(false)) return verdict;
  (void)swept_from_b;

  verdict.ok = true;
  verdict.detail = verdict.closure_complete
                       ? "equivalent-within-bounds (closure complete)"
                       : "equivalent-within-bounds (truncated)";
  return verdict;
}

std::string verdict_json(const LockstepVerdict& verdict) {
  nlohmann::json rec;
  if (verdict.ok) {
    rec["kind"] = "equivalent";
    rec["closure_complete"] = verdict.closure_complete;
  } else if (verdict.map_incomplete) {
    rec["kind"] = "map-incomplete";
  } else if (verdict.failure) {
    rec["kind"] = verdict.failure->kind;
  } else {
    rec["kind"] = "fail";
  }
  rec["detail"] = verdict.detail;
  rec["a_configs"] = verdict.a_configs;
  rec["b_configs"] = verdict.b_configs;
  if (verdict.failure) {
    rec["configA"] = verdict.failure->config_a;
    rec["configB"] = verdict.failure->config_b;
    rec["agent"] = verdict.failure->agent;
    rec["expected"] = verdict.failure->expected;
    rec["got"] = verdict.failure->got;
  }
  return rec.dump();
}

}  // namespace ea::equiv
