// Acceptance suite: one criterion per section, one PASS/FAIL line each.
// Exit code 0 only when every criterion passes.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "ea/dsl.hpp"
#include "ea/ringbuffer.hpp"
#include "json.hpp"
#include "token_ring.hpp"

using namespace ea;
using namespace ea::ringbuf;
using nlohmann::json;

namespace {

struct Criterion {
  int number;
  std::string title;
  double budget_seconds;
  std::function<bool(std::string&)> check;
};

std::string run_tool(const std::string& args, int& exit_code) {
  std::string command = std::string(EA_TOOL_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  std::string output;
  if (!pipe) {
    exit_code = -1;
    return output;
  }
  char buffer[4096];
  std::size_t got;
  while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0) {
    output.append(buffer, got);
  }
  int status = pclose(pipe);
  exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return output;
}

// --- criterion 1: the correspondence table ------------------------------

bool pp_table_reproduction(std::string& detail) {
  // rows 0..6 of the figure for N=4; the box marks the input turn
  const std::vector<std::vector<int>> expected_pp = {
      {0, 0, 0, 0}, {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 1, 1, 0},
      {1, 1, 1, 1}, {0, 1, 1, 1}, {0, 0, 1, 1}};
  const std::vector<int> expected_box = {0, 1, 2, 3, 0, 1, 2};

  int exit_code = 0;
  std::string output = run_tool("--json casestudy pp-table --N 4", exit_code);
  if (exit_code != 0) {
    detail = "tool exited with " + std::to_string(exit_code);
    return false;
  }
  std::istringstream in(output);
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto rec = json::parse(line);
    if (row >= expected_pp.size()) {
      detail = "too many rows";
      return false;
    }
    if (rec["p"] != static_cast<long long>(row) ||
        rec["pp"].get<std::vector<int>>() != expected_pp[row] ||
        rec["box"] != expected_box[row]) {
      detail = "row " + std::to_string(row) + " mismatches the figure";
      return false;
    }
    ++row;
  }
  if (row != expected_pp.size()) {
    detail = "expected " + std::to_string(expected_pp.size()) + " rows, got " +
             std::to_string(row);
    return false;
  }
  // the box is the input turn of the mapped configuration
  for (const PpRow& r : pp_table(4)) {
    if (r.box != static_cast<int>(r.p % 4)) {
      detail = "box of row " + std::to_string(r.p) + " is not the input turn";
      return false;
    }
  }
  return true;
}

// --- criterion 2: the equivalence theorem at desk scale -----------------

bool equivalence_theorem(std::string& detail) {
  for (int n : {1, 2, 3, 4}) {
    for (int d : {1, 2}) {
      equiv::LockstepVerdict v = check_equiv_rea_cea(RingParams::of(n, d));
      if (!v.ok || !v.closure_complete) {
        detail = "N=" + std::to_string(n) + " |Data|=" + std::to_string(d) +
                 ": " + v.detail;
        return false;
      }
    }
  }
  // the command-line gate agrees
  int exit_code = 0;
  run_tool("check-equiv --N 2 --data-size 2", exit_code);
  if (exit_code != 0) {
    detail = "check-equiv exit code " + std::to_string(exit_code);
    return false;
  }
  return true;
}

// --- criterion 3: strict inequivalence ----------------------------------

bool strict_inequivalence(std::string& detail) {
  StrictReport report = strict_comparison(RingParams::of(2, 2));
  if (!report.cea_complete ||
      report.cea_count_first != report.cea_count_second) {
    detail = "column machine count is not depth-stable";
    return false;
  }
  if (!report.rea_exceeds || report.rea_count <= report.cea_count_second) {
    detail = "row machine did not exceed the finite column count";
    return false;
  }
  int exit_code = 0;
  std::string output =
      run_tool("--json check-equiv --N 2 --data-size 2 --strict", exit_code);
  if (exit_code != 1) {
    detail = "strict mode exit code " + std::to_string(exit_code) +
             ", expected 1";
    return false;
  }
  auto rec = json::parse(output.substr(0, output.find('\n')));
  if (rec["kind"] != "strict-fail" ||
      rec["cea_count"] != report.cea_count_second ||
      rec["cea_depth_stable"] != true) {
    detail = "strict report does not name the exact finite count";
    return false;
  }
  detail = "column count " + std::to_string(report.cea_count_second) +
           ", row count " + std::to_string(report.rea_count) + " at depth " +
           std::to_string(report.rea_depth);
  return true;
}

// --- criterion 4: the lemma suite over the finite quotients -------------

bool lemma_suite_criterion(std::string& detail) {
  for (int n : {1, 2, 3, 4}) {
    RingParams params = RingParams::of(n, 2);
    Machine rea = build_rea(params);
    Machine cea = build_cea(params);
    auto env = ring_free_env();
    explorer::Bounds bounds;

    auto fails = [&](const char* what) {
      detail = std::string(what) + " at N=" + std::to_string(n);
      return false;
    };

    explorer::InvariantResult gap = explorer::check_invariant(
        rea.program, rea.initial, congruence_R(n), env, bounds,
        [n](const State& s) {
          long long d =
              s.read({"p", {}}).as_int() - s.read({"g", {}}).as_int();
          return 0 <= d && d <= n;
        });
    if (!gap.holds || !gap.complete) return fails("p-g bounds");

    RingParams captured = params;
    explorer::InvariantResult inout = explorer::check_invariant(
        rea.program, rea.initial, congruence_R(n), env, bounds,
        [captured, n](const State& s) {
          State c = h_map(s, captured);
          return in_map(c) == s.read({"p", {}}).as_int() % n &&
                 out_map(c) == s.read({"g", {}}).as_int() % n;
        });
    if (!inout.holds || !inout.complete) return fails("in/out connection");

    explorer::InvariantResult turns = explorer::check_invariant(
        cea.program, cea.initial, congruence_identity(), env, bounds,
        [n](const State& s) {
          for (const char* counter : {"pp", "gg"}) {
            int k;
            try {
              k = counter[0] == 'p' ? in_map(s) : out_map(s);
            } catch (const Error&) {
              return false;  // zero or several turn holders
            }
            long long at_k =
                s.read({counter, {Value::integer(k)}}).as_int();
            for (int i = 0; i < n; ++i) {
              long long at_i =
                  s.read({counter, {Value::integer(i)}}).as_int();
              if (i < k && at_i != 1 - at_k) return false;
              if (i >= k && at_i != at_k) return false;
            }
          }
          return true;
        });
    if (!turns.holds || !turns.complete)
      return fails("turn uniqueness and switch shape");

    explorer::InvariantResult modes = explorer::check_invariant(
        cea.program, cea.initial, congruence_identity(), env, bounds,
        [n](const State& s) {
          for (int k = 0; k < n; ++k) {
            bool same = s.read({"pp", {Value::integer(k)}}) ==
                        s.read({"gg", {Value::integer(k)}});
            Value mode = s.read({"Mode", {Value::integer(k)}});
            if (same != (mode == Value::mode("Get"))) return false;
          }
          return true;
        });
    if (!modes.holds || !modes.complete) return fails("mode redundancy");
  }
  return true;
}

// --- criterion 5: the first-in-first-out theorem -------------------------

bool fifo_theorem(std::string& detail) {
  RingParams params = RingParams::of(2, 2);
  Machine rea = build_rea(params);
  Machine cea = build_cea(params);

  SweepReport row = fifo_sweep(rea, ring_free_env(), congruence_R(2), 12);
  if (!row.ok) {
    detail = "row machine: " + row.detail;
    return false;
  }
  SweepReport col =
      fifo_sweep(cea, ring_free_env(), congruence_identity(), 12);
  if (!col.ok) {
    detail = "column machine: " + col.detail;
    return false;
  }

  // the move-ordering chain on explicit run objects
  for (const Machine* m : {&rea, &cea}) {
    auto runs = explorer::enumerate_runs(m->program, m->initial,
                                         ring_free_env(), 6, 3000);
    for (const Run& run : runs) {
      FifoVerdict v = fifo_check(*m, run);
      if (!v.ok) {
        detail = m->name + ": " + v.detail;
        return false;
      }
      if (v.regular_exact &&
          v.outputs != std::vector<std::string>(
                           v.inputs.begin(),
                           v.inputs.begin() + v.outputs.size())) {
        detail = m->name + ": regular run with diverging sequences";
        return false;
      }
    }
  }
  return true;
}

// --- criterion 6: induced runs ------------------------------------------

bool induced_runs(std::string& detail) {
  // three data values: the run tree to depth 8 then holds over 1000 runs
  RingParams params = RingParams::of(2, 3);
  Machine r1 = build_r1(params);
  Machine r2 = build_r2(params);
  auto runs = explorer::enumerate_runs(r1.program, r1.initial,
                                       explorer::EnvStrategy::none(), 8, 1000);
  if (runs.size() < 1000) {
    detail = "only " + std::to_string(runs.size()) + " runs enumerated";
    return false;
  }
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const Run& run = runs[i];
    Run induced = induce_r2_run(r1, r2, run);
    RunVerdict v = validate_run(r2.program, induced);
    if (!v.ok) {
      detail = "run " + std::to_string(i) + ": " + v.condition;
      return false;
    }
    for (std::size_t k = 0; k <= run.size(); ++k) {
      std::uint64_t mask = (1ull << k) - 1;
      State induced_state =
          induce_r2_state(state_of_segment(r1.program, run, mask), r2);
      if (!(induced_state == state_of_segment(r2.program, induced, mask))) {
        detail = "run " + std::to_string(i) + ": states diverge at prefix " +
                 std::to_string(k);
        return false;
      }
    }
  }
  detail = std::to_string(runs.size()) + " runs";
  return true;
}

// --- criterion 7: sharing metrics ----------------------------------------

bool sharing_metrics(std::string& detail) {
  explorer::Bounds shallow;
  shallow.max_depth = 4;
  for (int n : {2, 3, 4}) {
    RingParams params = RingParams::of(n, 2);
    MetricsReport row =
        inequivalence_metrics(build_rea(params), params, shallow);
    if (row.shared_internal_locations != static_cast<std::size_t>(n + 2)) {
      detail = "row machine at N=" + std::to_string(n) + ": " +
               std::to_string(row.shared_internal_locations) +
               " shared locations, expected " + std::to_string(n + 2);
      return false;
    }
    MetricsReport col =
        inequivalence_metrics(build_cea(params), params, shallow);
    if (col.shared_internal_locations != static_cast<std::size_t>(2 * n)) {
      detail = "column machine at N=" + std::to_string(n) + ": " +
               std::to_string(col.shared_internal_locations) +
               " shared locations, expected " + std::to_string(2 * n);
      return false;
    }
  }
  return true;
}

// --- criterion 8: semantics unit properties ------------------------------

bool semantics_properties(std::string& detail) {
  using namespace eatest;
  Rng rng(988776655);
  TokenRing ring;

  for (int round = 0; round < 400; ++round) {
    State s = random_token_state(rng);

    // block-union
    std::vector<RulePtr> items;
    for (int i = 0, count = rng.below(4); i < count; ++i)
      items.push_back(random_rule(rng));
    UpdateSet whole = update_set(Rule::block(items), s);
    UpdateSet joined;
    for (const RulePtr& item : items) {
      for (const Update& u : update_set(item, s)) joined.insert(u);
    }
    if (!(whole == joined)) {
      detail = "block-union";
      return false;
    }

    // inconsistent-fire-is-identity and the frame property
    UpdateSet us = update_set(random_rule(rng), s);
    FireResult fired = fire(s, us);
    if (!is_consistent(us)) {
      if (fired.applied || !(fired.state == s)) {
        detail = "inconsistent-fire-is-identity";
        return false;
      }
    } else {
      auto written = [&us](const Location& loc) {
        for (const Update& u : us) {
          if (u.location == loc) return true;
        }
        return false;
      };
      for (const auto& [loc, v] : s.interp()) {
        if (!written(loc) && !(fired.state.read(loc) == v)) {
          detail = "frame property";
          return false;
        }
      }
      for (const auto& [loc, v] : fired.state.interp()) {
        if (!written(loc) && !(s.read(loc) == v)) {
          detail = "frame property";
          return false;
        }
      }
    }

    // var-rule oracle equivalence (universe of size 3 <= 4)
    RulePtr body = random_rule(rng, 2);
    UpdateSet var_set = update_set(Rule::var_rule("y", "Nodes", body), s);
    UpdateSet oracle;
    for (const Value& u : s.universe("Nodes")) {
      for (const Update& upd : update_set(substitute(body, "y", u), s))
        oracle.insert(upd);
    }
    if (!(var_set == oracle)) {
      detail = "var-rule oracle";
      return false;
    }

    // choose-enumeration completeness
    auto choose = Rule::choose_rule("x", "Nodes", random_rule(rng, 2));
    auto instances = enumerate_choices(choose, s);
    const auto& nodes = s.universe("Nodes");
    if (instances.size() != nodes.size()) {
      detail = "choose-enumeration";
      return false;
    }
    for (std::size_t i = 0; i < instances.size(); ++i) {
      if (instances[i].choice != static_cast<int>(i) ||
          !(*instances[i].chosen == nodes[i])) {
        detail = "choose-enumeration order";
        return false;
      }
    }
  }
  return true;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "pp-table reproduction (rows 0-6, boxes at the input turn)", 1.0,
       pp_table_reproduction},
      {2, "lock-step equivalence certified for (N, |Data|) in {1..4}x{1,2}",
       60.0, equivalence_theorem},
      {3, "strict lock-step equivalence fails with the exact finite count",
       30.0, strict_inequivalence},
      {4, "lemma suite exhaustive over the finite quotients (N in {1..4})",
       60.0, lemma_suite_criterion},
      {5, "first-in-first-out with the move-ordering chain, depth 12", 120.0,
       fifo_theorem},
      {6, "1000 induced runs validate with matching states", 60.0,
       induced_runs},
      {7, "shared internal locations: N+2 (row) and 2N (column)", 10.0,
       sharing_metrics},
      {8, "semantics unit properties", 30.0, semantics_properties},
  };

  bool all_pass = true;
  for (Criterion& criterion : criteria) {
    auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool pass = false;
    try {
      pass = criterion.check(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      start)
            .count();
    if (seconds > criterion.budget_seconds) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("over budget (") +
                std::to_string(criterion.budget_seconds) + "s)";
    }
    all_pass = all_pass && pass;
    std::printf("criterion %d: %s  %s  [%.2fs]%s%s\n", criterion.number,
                pass ? "PASS" : "FAIL", criterion.title.c_str(), seconds,
                detail.empty() ? "" : "  --", detail.c_str());
  }
  std::printf("%s\n", all_pass ? "all criteria pass" : "FAILURES present");
  return all_pass ? 0 : 1;
}
