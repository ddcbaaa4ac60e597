// Command-line front end: parsing, execution, exploration, the lemma
// suites and the lock-step equivalence check for the ring-buffer case
// study.
//
// Exit codes: 0 all checks pass, 1 a counterexample or violation was
// found, 2 usage or parse error.

#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "ea/dsl.hpp"
#include "ea/ringbuffer.hpp"
#include "json.hpp"

using namespace ea;
using nlohmann::json;

namespace {

struct LoadedMachine {
  DistributedProgram program;
  GlobalState state;
};

LoadedMachine load(const std::string& program_path,
                   const std::string& state_path) {
  LoadedMachine m;
  m.program = dsl::parse_program(dsl::read_file(program_path), program_path);
  if (!state_path.empty()) {
    m.state = dsl::parse_state(dsl::read_file(state_path), m.program,
                               state_path);
  }
  return m;
}

explorer::EnvStrategy make_env(const std::string& kind,
                               const std::string& script_path,
                               const LoadedMachine& m) {
  if (kind == "none") return explorer::EnvStrategy::none();
  if (kind == "script") {
    if (script_path.empty())
      throw Error("--env script needs --env-file");
    return explorer::EnvStrategy::scripted(dsl::parse_script(
        dsl::read_file(script_path), m.program, m.state, script_path));
  }
  if (!m.program.has_external_symbols())
    return explorer::EnvStrategy::none();
  // free environment over the declared external symbols
  std::map<std::string, std::string> domains;
  for (const std::string& s : m.program.external_symbols()) {
    if (s == "InputDatum") domains[s] = "Data";
    if (s == "InSendBit" || s == "OutReceiveBit") domains[s] = "Z2";
  }
  return explorer::EnvStrategy::free_env(std::move(domains),
                                         kind != "free-unconstrained");
}

Congruence make_congruence(const std::string& name) {
  if (name == "identity") return congruence_identity();
  if (name.rfind("ring-R:", 0) == 0) {
    return congruence_R(std::stoi(name.substr(7)));
  }
  throw Error("unknown congruence '" + name + "' (identity or ring-R:N)");
}

std::string env_text(const EnvAssignment& env) {
  if (env.empty()) return "-";
  std::string out;
  for (const auto& [k, v] : env) {
    if (!out.empty()) out += ", ";
    out += k + " = " + v.text();
  }
  return out;
}

json env_json(const EnvAssignment& env) {
  json out = json::object();
  for (const auto& [k, v] : env) out[k] = v.text();
  return out;
}

int cmd_parse(const std::string& program_path, const std::string& state_path) {
  LoadedMachine m = load(program_path, state_path);
  std::cout << dsl::render(m.program);
  if (!state_path.empty()) {
    std::cout << "\n" << dsl::render(m.state);
  }
  return 0;
}

int cmd_run(const std::string& program_path, const std::string& state_path,
            int steps, const std::string& env_kind,
            const std::string& script_path, std::uint64_t seed, bool as_json) {
  LoadedMachine m = load(program_path, state_path);
  explorer::EnvStrategy env = make_env(env_kind, script_path, m);
  std::mt19937_64 gen(seed);

  GlobalState s = m.state;
  for (int k = 0; k < steps; ++k) {
    auto options = explorer::successors(m.program, s, env, k);
    if (options.empty()) {
      if (!as_json) std::cout << "no enabled move at step " << k << "\n";
      break;
    }
    auto& step = options[std::uniform_int_distribution<std::size_t>(
        0, options.size() - 1)(gen)];
    if (as_json) {
      json rec;
      rec["step"] = k;
      rec["agent"] = step.agent.text();
      if (step.choice) rec["choice"] = *step.choice;
      rec["env"] = env_json(step.env);
      std::cout << rec.dump() << "\n";
    } else {
      std::cout << k << ". agent " << step.agent.text();
      if (step.choice) std::cout << " choice " << *step.choice;
      std::cout << "  env: " << env_text(step.env) << "\n";
    }
    s = std::move(step.state);
  }
  if (as_json) {
    json rec;
    rec["state"] = s.canonical_text();
    std::cout << rec.dump() << "\n";
  } else {
    std::cout << "\nfinal state:\n" << dsl::render(s);
  }
  return 0;
}

int cmd_explore(const std::string& program_path, const std::string& state_path,
                const std::string& congruence, std::size_t max_nodes,
                int max_depth, const std::string& env_kind,
                const std::string& script_path, int jobs, bool as_json) {
  LoadedMachine m = load(program_path, state_path);
  explorer::Bounds bounds{max_nodes, max_depth};
  explorer::TransitionGraph graph =
      explorer::explore(m.program, m.state, make_congruence(congruence),
                        make_env(env_kind, script_path, m), bounds, jobs);
  std::cout << explorer::export_graph(graph);
  if (as_json) {
    json rec;
    rec["kind"] = "summary";
    rec["nodes"] = graph.nodes.size();
    rec["edges"] = graph.edges.size();
    rec["complete"] = graph.complete;
    std::cout << rec.dump() << "\n";
  } else {
    std::cout << (graph.complete ? "closure complete: " : "truncated: ")
              << graph.nodes.size() << " configurations, "
              << graph.edges.size() << " transitions\n";
  }
  return 0;
}

int cmd_check_invariants(const std::string& machine, int n, int data_size,
                         int max_depth, bool as_json) {
  ringbuf::RingParams params = ringbuf::RingParams::of(n, data_size);
  ringbuf::RingKind kind;
  if (machine == "r1") kind = ringbuf::RingKind::R1;
  else if (machine == "r2") kind = ringbuf::RingKind::R2;
  else if (machine == "rea") kind = ringbuf::RingKind::Rea;
  else if (machine == "cea") kind = ringbuf::RingKind::Cea;
  else throw Error("unknown machine '" + machine + "'");

  explorer::Bounds bounds;
  bounds.max_depth = max_depth;
  bool all_pass = true;
  for (const ringbuf::LemmaResult& lemma :
       ringbuf::lemma_suite(kind, params, bounds)) {
    all_pass = all_pass && lemma.pass;
    if (as_json) {
      json rec;
      rec["kind"] = "lemma";
      rec["name"] = lemma.name;
      rec["pass"] = lemma.pass;
      rec["detail"] = lemma.detail;
      std::cout << rec.dump() << "\n";
    } else {
      std::cout << (lemma.pass ? "PASS" : "FAIL") << "  " << lemma.name
                << "  (" << lemma.detail << ")\n";
    }
  }
  return all_pass ? 0 : 1;
}

int cmd_check_equiv(int n, int data_size, bool strict, std::size_t max_nodes,
                    int max_depth, bool as_json) {
  ringbuf::RingParams params = ringbuf::RingParams::of(n, data_size);
  explorer::Bounds bounds{max_nodes, max_depth};

  if (strict) {
    ringbuf::StrictReport report = ringbuf::strict_comparison(params, bounds);
    if (as_json) {
      json rec;
      rec["kind"] = report.rea_exceeds ? "strict-fail" : "strict-unresolved";
      rec["cea_count"] = report.cea_count_second;
      rec["cea_count_at_lower_depth"] = report.cea_count_first;
      rec["cea_depth_stable"] =
          report.cea_count_first == report.cea_count_second;
      rec["cea_closure_complete"] = report.cea_complete;
      rec["rea_count"] = report.rea_count;
      rec["rea_depth"] = report.rea_depth;
      std::cout << rec.dump() << "\n";
    } else {
      std::cout << "column machine: " << report.cea_count_second
                << " reachable states (depth-stable: "
                << report.cea_count_first << " then "
                << report.cea_count_second << ", closure "
                << (report.cea_complete ? "complete" : "truncated") << ")\n"
                << "row machine: " << report.rea_count
                << " reachable states at depth " << report.rea_depth << "\n";
      if (report.rea_exceeds) {
        std::cout << "strict lock-step equivalence fails: the row machine's "
                     "identity quotient exceeds the column machine's finite "
                     "state count\n";
      }
    }
    return report.rea_exceeds ? 1 : 0;
  }

  equiv::LockstepVerdict verdict =
      ringbuf::check_equiv_rea_cea(params, bounds);
  if (as_json) {
    std::cout << equiv::verdict_json(verdict) << "\n";
  } else {
    std::cout << verdict.detail << "\n"
              << "configurations: " << verdict.a_configs << " (row) / "
              << verdict.b_configs << " (column)\n";
    if (verdict.failure) {
      std::cout << "failed at: " << verdict.failure->kind << " agent "
                << verdict.failure->agent << "\n";
    }
  }
  return verdict.ok ? 0 : 1;
}

int cmd_metrics(const std::string& machine, int n, int data_size,
                int max_depth, bool as_json) {
  ringbuf::RingParams params = ringbuf::RingParams::of(n, data_size);
  Machine m = machine == "cea" ? ringbuf::build_cea(params)
                               : ringbuf::build_rea(params);
  explorer::Bounds bounds;
  bounds.max_depth = max_depth;
  ringbuf::MetricsReport report =
      ringbuf::inequivalence_metrics(m, params, bounds);
  if (as_json) {
    json rec;
    rec["kind"] = "metrics";
    rec["machine"] = m.name;
    rec["shared_internal_locations"] = report.shared_internal_locations;
    rec["shared_locations"] = report.shared_location_names;
    rec["max_counter_by_depth"] = report.max_counter_by_depth;
    rec["configs_by_depth"] = report.configs_by_depth;
    rec["closure_complete"] = report.closure_complete;
    std::cout << rec.dump() << "\n";
  } else {
    std::cout << m.name << ": " << report.shared_internal_locations
              << " shared internal locations (";
    for (std::size_t i = 0; i < report.shared_location_names.size(); ++i) {
      if (i) std::cout << ", ";
      std::cout << report.shared_location_names[i];
    }
    std::cout << ")\n" << "max counter by depth:";
    for (long long v : report.max_counter_by_depth) std::cout << " " << v;
    std::cout << "\nreachable states by depth:";
    for (std::size_t v : report.configs_by_depth) std::cout << " " << v;
    std::cout << (report.closure_complete ? "\n(closure complete)\n"
                                          : "\n(truncated)\n");
  }
  return 0;
}

int cmd_pp_table(int n, bool as_json) {
  auto rows = ringbuf::pp_table(n);
  if (!as_json) {
    std::cout << " p |";
    for (int i = 0; i < n; ++i) std::cout << " pp[" << i << "]";
    std::cout << "\n";
  }
  for (const auto& row : rows) {
    if (as_json) {
      json rec;
      rec["p"] = row.p;
      rec["pp"] = row.pp;
      rec["box"] = row.box;
      std::cout << rec.dump() << "\n";
      continue;
    }
    std::cout << " " << row.p << " |";
    for (int i = 0; i < n; ++i) {
      if (i == row.box) {
        std::cout << "  [" << row.pp[i] << "] ";
      } else {
        std::cout << "   " << row.pp[i] << "  ";
      }
    }
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"execution and verification toolkit for distributed evolving "
               "algebras"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "line-delimited JSON output");

  std::string program_path, state_path, script_path;
  std::string env_kind = "auto", congruence = "identity", machine;
  int steps = 20, max_depth = 64, n = 2, data_size = 2, jobs = 1;
  std::size_t max_nodes = 100000;
  std::uint64_t seed = 0;
  bool strict = false;

  auto* parse = app.add_subcommand("parse", "parse and render a program");
  parse->add_option("file", program_path, "program (.ea)")->required();
  parse->add_option("--state", state_path, "initial state (.eas)");

  auto* run = app.add_subcommand("run", "one sequential run, trace on stdout");
  run->add_option("file", program_path)->required();
  run->add_option("--state", state_path)->required();
  run->add_option("--steps", steps, "number of moves");
  run->add_option("--env", env_kind,
                  "auto|free|free-unconstrained|none|script");
  run->add_option("--env-file", script_path, "script for --env script");
  run->add_option("--seed", seed, "tie-breaking seed");

  auto* explore = app.add_subcommand("explore", "bounded reachability");
  explore->add_option("file", program_path)->required();
  explore->add_option("--state", state_path)->required();
  explore->add_option("--congruence", congruence, "identity|ring-R:N");
  explore->add_option("--max-nodes", max_nodes);
  explore->add_option("--max-depth", max_depth);
  explore->add_option("--env", env_kind);
  explore->add_option("--env-file", script_path);
  explore->add_option("--jobs", jobs, "concurrent workers");

  auto* invariants =
      app.add_subcommand("check-invariants", "the lemma suite per machine");
  invariants->add_option("machine", machine, "r1|r2|rea|cea")->required();
  invariants->add_option("--N", n, "buffer size");
  invariants->add_option("--data-size", data_size);
  invariants->add_option("--max-depth", max_depth);

  auto* equivalence = app.add_subcommand(
      "check-equiv", "lock-step equivalence of the row and column machines");
  equivalence->add_option("--N", n, "buffer size");
  equivalence->add_option("--data-size", data_size);
  equivalence->add_flag("--strict", strict, "identity congruences only");
  equivalence->add_option("--max-nodes", max_nodes);
  equivalence->add_option("--max-depth", max_depth);

  auto* casestudy = app.add_subcommand("casestudy", "case-study tables");
  auto* pp = casestudy->add_subcommand("pp-table",
                                       "the p/pp correspondence table");
  pp->add_option("--N", n, "buffer size")->required();
  auto* metrics = casestudy->add_subcommand(
      "metrics", "sharing and magnitude observables");
  metrics->add_option("--machine", machine, "rea|cea")->required();
  metrics->add_option("--N", n, "buffer size");
  metrics->add_option("--data-size", data_size);
  metrics->add_option("--max-depth", max_depth);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*parse) return cmd_parse(program_path, state_path);
    if (*run)
      return cmd_run(program_path, state_path, steps, env_kind, script_path,
                     seed, as_json);
    if (*explore)
      return cmd_explore(program_path, state_path, congruence, max_nodes,
                         max_depth, env_kind, script_path, jobs, as_json);
    if (*invariants)
      return cmd_check_invariants(machine, n, data_size, max_depth, as_json);
    if (*equivalence)
      return cmd_check_equiv(n, data_size, strict, max_nodes, max_depth,
                             as_json);
    if (*casestudy) {
      if (*pp) return cmd_pp_table(n, as_json);
      if (*metrics)
        return cmd_metrics(machine, n, data_size,
                           max_depth == 64 ? 10 : max_depth, as_json);
      std::cerr << "casestudy needs a table name (pp-table or metrics)\n";
      return 2;
    }
  } catch (const dsl::DslError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
