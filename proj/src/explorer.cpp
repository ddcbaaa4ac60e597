#include "ea/explorer.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <sstream>
#include <thread>

#include "ea/errors.hpp"
#include "json.hpp"

namespace ea::explorer {

EnvStrategy EnvStrategy::none() { return EnvStrategy{}; }

EnvStrategy EnvStrategy::free_env(std::map<std::string, std::string> domains,
                                  bool handshake) {
  EnvStrategy s;
  s.kind = Kind::Free;
  s.domains = std::move(domains);
  s.handshake = handshake;
  return s;
}

EnvStrategy EnvStrategy::scripted(std::vector<EnvAssignment> script) {
  EnvStrategy s;
  s.kind = Kind::Scripted;
  s.script = std::move(script);
  return s;
}

namespace {

long long bit_at(const State& s, const std::string& symbol) {
  Value v = s.read(Location{symbol, {}});
  return v.is_integer() ? v.as_int() : 0;
}

}  // namespace

std::vector<EnvAssignment> EnvStrategy::options(const State& s,
                                                std::size_t step) const {
  switch (kind) {
    case Kind::None:
      return {{}};
    case Kind::Scripted: {
      if (step < script.size()) return {script[step]};
      return {{}};
    }
    case Kind::Free:
      break;
  }

  if (!handshake) {
    // Full cartesian product of type-correct assignments.
    std::vector<EnvAssignment> out{{}};
    for (const auto& [symbol, universe] : domains) {
      std::vector<EnvAssignment> grown;
      for (const EnvAssignment& base : out) {
        for (const Value& v : s.universe(universe)) {
          EnvAssignment a = base;
          a[symbol] = v;
          grown.push_back(std::move(a));
        }
      }
      out = std::move(grown);
    }
    return out;
  }

  // Handshake discipline: the input side may flip InSendBit (offering any
  // datum) only when the bits match; the output side may acknowledge by
  // flipping OutReceiveBit only when the bits differ.
  std::vector<EnvAssignment> in_side{{}};
  if (domains.count("InSendBit") && domains.count("InputDatum") &&
      bit_at(s, "InSendBit") == bit_at(s, "InReceiveBit")) {
    for (const Value& d : s.universe(domains.at("InputDatum"))) {
      EnvAssignment a;
      a["InSendBit"] = Value::integer(1 - bit_at(s, "InSendBit"));
      a["InputDatum"] = d;
      in_side.push_back(std::move(a));
    }
  }
  std::vector<EnvAssignment> out_side{{}};
  if (domains.count("OutReceiveBit") &&
      bit_at(s, "OutSendBit") != bit_at(s, "OutReceiveBit")) {
    EnvAssignment a;
    a["OutReceiveBit"] = Value::integer(1 - bit_at(s, "OutReceiveBit"));
    out_side.push_back(std::move(a));
  }

  std::vector<EnvAssignment> out;
  for (const EnvAssignment& i : in_side) {
    for (const EnvAssignment& o : out_side) {
      EnvAssignment merged = i;
      merged.insert(o.begin(), o.end());
      out.push_back(std::move(merged));
    }
  }
  return out;
}

std::vector<Step> successors(const DistributedProgram& program,
                             const GlobalState& s, const EnvStrategy& env,
                             std::size_t step) {
  std::vector<Step> out;
  for (const EnvAssignment& delta : env.options(s, step)) {
    GlobalState with_delta =
        delta.empty() ? s : apply_env(s, delta, program);
    for (const Value& agent : agents_of(s)) {
      EnabledResult enabled = agent_enabled(with_delta, agent, program);
      for (const ResolvedRule& res : enabled.resolutions) {
        out.push_back(Step{
            agent, res.choice, delta,
            fire_agent(with_delta, agent, program, res.choice, {})});
      }
    }
  }
  return out;
}

TransitionGraph explore(const DistributedProgram& program,
                        const GlobalState& initial, const Congruence& cong,
                        const EnvStrategy& env, const Bounds& bounds,
                        int jobs) {
  TransitionGraph graph;
  State root = cong.canon(initial);
  std::string root_key = root.canonical_text();
  graph.nodes.push_back({std::move(root), root_key, 0});
  graph.index.emplace(root_key, 0);
  graph.initial = 0;
  graph.complete = true;

  std::vector<int> frontier{0};
  int depth = 0;
  while (!frontier.empty()) {
    if (depth >= bounds.max_depth) {
      graph.complete = false;
      break;
    }
    ++depth;

    // Expand the whole layer (possibly in parallel), then integrate the
    // results in node order so the graph is scheduling-independent.
    std::vector<std::vector<Step>> results(frontier.size());
    auto work = [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        results[i] =
            successors(program, graph.nodes[frontier[i]].representative, env,
                       static_cast<std::size_t>(depth - 1));
      }
    };
    if (jobs <= 1 || frontier.size() < 2) {
      work(0, frontier.size());
    } else {
      std::size_t n = frontier.size();
      std::size_t workers = std::min<std::size_t>(jobs, n);
      std::vector<std::thread> threads;
      std::size_t chunk = (n + workers - 1) / workers;
      for (std::size_t w = 0; w < workers; ++w) {
        std::size_t begin = w * chunk;
        std::size_t end = std::min(n, begin + chunk);
        if (begin < end) threads.emplace_back(work, begin, end);
      }
      for (std::thread& t : threads) t.join();
    }

    std::vector<int> next;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      for (Step& succ : results[i]) {
        State rep = cong.canon(succ.state);
        std::string key = rep.canonical_text();
        auto it = graph.index.find(key);
        int to;
        if (it != graph.index.end()) {
          to = it->second;
        } else if (graph.nodes.size() >= bounds.max_nodes) {
          graph.complete = false;
          continue;
        } else {
          to = static_cast<int>(graph.nodes.size());
          graph.nodes.push_back({std::move(rep), key, depth});
          graph.index.emplace(std::move(key), to);
          next.push_back(to);
        }
        graph.edges.push_back(
            {frontier[i], succ.agent, succ.choice, succ.env, to});
      }
    }
    frontier = std::move(next);
  }
  return graph;
}

std::vector<Run> enumerate_runs(const DistributedProgram& program,
                                const GlobalState& initial,
                                const EnvStrategy& env, int depth,
                                std::size_t max_runs) {
  std::vector<Run> out;
  std::vector<Move> trace;

  std::function<void(const GlobalState&, int)> dfs = [&](const GlobalState& s,
                                                         int remaining) {
    if (out.size() >= max_runs) return;
    out.push_back(Run::sequential(initial, trace));
    if (remaining == 0) return;
    std::size_t step = trace.size();
    for (Step& succ : successors(program, s, env, step)) {
      if (out.size() >= max_runs) return;
      trace.push_back(Move{succ.agent, succ.choice, succ.env});
      dfs(succ.state, remaining - 1);
      trace.pop_back();
    }
  };
  dfs(initial, depth);
  return out;
}

InvariantResult check_invariant(
    const DistributedProgram& program, const GlobalState& initial,
    const Congruence& cong, const EnvStrategy& env, const Bounds& bounds,
    const std::function<bool(const State&)>& pred) {
  InvariantResult result;
  TransitionGraph graph;  // only used for its node/edge bookkeeping

  struct Parent {
    int node = -1;
    TransitionGraph::Edge edge;
  };
  std::vector<Parent> parents;

  State root = cong.canon(initial);
  std::string root_key = root.canonical_text();
  graph.nodes.push_back({std::move(root), root_key, 0});
  graph.index.emplace(root_key, 0);
  parents.push_back({});

  auto violated_at = [&](int node) {
    result.holds = false;
    result.violation = graph.nodes[node].representative;
    std::vector<TransitionGraph::Edge> path;
    for (int at = node; parents[at].node >= 0; at = parents[at].node) {
      path.push_back(parents[at].edge);
    }
    std::reverse(path.begin(), path.end());
    result.path = std::move(path);
  };

  if (!pred(graph.nodes[0].representative)) {
    violated_at(0);
    return result;
  }

  std::deque<int> frontier{0};
  result.complete = true;
  while (!frontier.empty()) {
    int at = frontier.front();
    frontier.pop_front();
    int depth = graph.nodes[at].depth;
    if (depth >= bounds.max_depth) {
      result.complete = false;
      continue;
    }
    for (Step& succ :
         successors(program, graph.nodes[at].representative, env,
                    static_cast<std::size_t>(depth))) {
      State rep = cong.canon(succ.state);
      std::string key = rep.canonical_text();
      auto it = graph.index.find(key);
      if (it != graph.index.end()) continue;
      if (graph.nodes.size() >= bounds.max_nodes) {
        result.complete = false;
        break;
      }
      int id = static_cast<int>(graph.nodes.size());
      graph.nodes.push_back({std::move(rep), key, depth + 1});
      graph.index.emplace(std::move(key), id);
      parents.push_back(
          {at, TransitionGraph::Edge{at, succ.agent, succ.choice, succ.env, id}});
      if (!pred(graph.nodes[id].representative)) {
        violated_at(id);
        return result;
      }
      frontier.push_back(id);
    }
  }
  return result;
}

std::string export_graph(const TransitionGraph& graph) {
  using nlohmann::json;
  std::ostringstream out;
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    json rec;
    rec["id"] = i;
    rec["state"] = graph.nodes[i].key;
    out << rec.dump() << "\n";
  }
  for (const TransitionGraph::Edge& e : graph.edges) {
    json rec;
    rec["from"] = e.from;
    rec["agent"] = e.agent.text();
    if (e.choice) {
      rec["choice"] = *e.choice;
    } else {
      rec["choice"] = nullptr;
    }
    json env = json::object();
    for (const auto& [k, v] : e.env) env[k] = v.text();
    rec["env"] = env;
    rec["to"] = e.to;
    out << rec.dump() << "\n";
  }
  return out.str();
}

}  // namespace ea::explorer
