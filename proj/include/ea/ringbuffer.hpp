#pragma once

#include "ea/equivalence.hpp"

namespace ea::ringbuf {

struct RingParams {
  int n = 2;                                    // buffer size
  std::vector<std::string> data = {"d0", "d1"};  // datum names

  static RingParams of(int n, int data_size);
};

// The built-in machines. R1 runs the buffer with explicit environment and
// channel agents (six in total); R2 folds the channels into handshake
// bits (four agents); the row machine drives the buffer with two agents
// over external handshake functions; the column machine dedicates one
// agent per slot.
Machine build_r1(const RingParams& params);
Machine build_r2(const RingParams& params);
Machine build_rea(const RingParams& params);
Machine build_cea(const RingParams& params);

enum class RingKind { R1, R2, Rea, Cea };
RingKind detect_kind(const DistributedProgram& program);

// The unique index where a 0/1 pattern switches value (position 0 when
// the pattern is constant). Fails unless exactly one index qualifies.
int switch_point(const std::vector<int>& bits);

// The configuration map from row states to column states: pp(i) follows
// p's division pattern modulo 2, gg(i) follows g's, Mode is derived from
// pp and gg agreeing, and every common function name keeps its
// interpretation.
State h_map(const State& row_state, const RingParams& params);
// The inverse on switch-shaped column states; rejects states outside the
// image.
State h_inverse(const State& col_state, const RingParams& params);

// The slot holding the input (output) turn; exactly one on every
// reachable column state.
int in_map(const State& col_state);
int out_map(const State& col_state);

equiv::ConfigMap rea_cea_config_map(const RingParams& params);
equiv::AgentCorrespondence rea_cea_correspondence();

// Free environment for the handshake machines: InputDatum over Data,
// InSendBit and OutReceiveBit over Z2.
explorer::EnvStrategy ring_free_env(bool handshake = true);

// Lock-step check of the row machine against the column machine, with the
// ring congruence on the row side and identity on the column side.
equiv::LockstepVerdict check_equiv_rea_cea(
    const RingParams& params, const explorer::Bounds& bounds = {});

// The p <-> pp correspondence table; row p carries pp[0..N-1] and the
// boxed position (the input turn).
struct PpRow {
  long long p = 0;
  std::vector<int> pp;
  int box = 0;
};
std::vector<PpRow> pp_table(int n);

struct FifoVerdict {
  bool ok = true;
  std::string detail;
  std::vector<std::string> inputs;   // datum names in move order
  std::vector<std::string> outputs;
  bool regular_exact = false;    // output sequence exactly as long
  bool regular_atleast = false;  // output sequence at least as long
  explicit operator bool() const { return ok; }
};

// Extracts the input and output data sequences of a validated run and
// checks that the outputs form a prefix of the inputs (equality on
// regular runs), along with the input/output interleaving chain
// mu_i < nu_i < mu_{i+N} wherever both moves exist.
FifoVerdict fifo_check(const Machine& machine, const Run& run);

struct SweepReport {
  bool ok = true;
  std::string detail;
  std::size_t nodes = 0;  // distinct memoized positions
  explicit operator bool() const { return ok; }
};

// Exhaustive first-in-first-out check over every run of at most `depth`
// moves: depth-first over the run tree with memoization on (configuration,
// pending data, remaining depth), verifying at each move that outputs pop
// exactly what inputs pushed and that the interleaving chain holds.
SweepReport fifo_sweep(const Machine& machine,
                       const explorer::EnvStrategy& env,
                       const Congruence& memo_cong, int depth);

// Maps a validated run of R1 to the induced run of R2: channel moves are
// relabeled to the matching buffer agent, the order is preserved, and the
// handshake bits are derived from the modes.
Run induce_r2_run(const Machine& r1, const Machine& r2, const Run& run);
// The induced-state transformation alone (for comparing against replay).
State induce_r2_state(const State& r1_state, const Machine& r2);

struct OrderingVerdict {
  bool ok = true;
  std::string lemma;  // the violated linearity claim, empty when ok
  std::string detail;
  explicit operator bool() const { return ok; }
};

// The machine-specific linearity claims: channel versus buffer-end moves
// and same-slot channel moves for R1, same-slot moves for R2 and the row
// machine, Get moves and Put moves for the column machine.
OrderingVerdict ordering_checks(const Machine& machine, const Run& run);

struct MetricsReport {
  std::size_t shared_internal_locations = 0;
  std::vector<std::string> shared_location_names;
  // Cumulative maxima / counts indexed by exploration depth.
  std::vector<long long> max_counter_by_depth;
  std::vector<std::size_t> configs_by_depth;
  bool closure_complete = false;
};

// Inequivalence observables: internal locations touched by more than one
// agent (statically derived from the program), counter magnitudes and
// reachable state counts by depth under the identity congruence.
MetricsReport inequivalence_metrics(const Machine& machine,
                                    const RingParams& params,
                                    const explorer::Bounds& bounds);

struct LemmaResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// The lemma suite for one machine at the given parameters; exhaustive on
// the finite quotients (ring congruence for the row machine, identity for
// the column machine), depth-bounded for R1 and R2.
std::vector<LemmaResult> lemma_suite(RingKind kind, const RingParams& params,
                                     const explorer::Bounds& bounds);

struct StrictReport {
  std::size_t cea_count_first = 0;
  std::size_t cea_count_second = 0;
  bool cea_complete = false;
  std::size_t rea_count = 0;
  int rea_depth = 0;
  bool rea_exceeds = false;  // row machine has strictly more configurations
};

// The strict lock-step comparison: identity quotients on both sides. The
// column machine's reachable state count is finite and depth-stable; the
// row machine's keeps growing, so strict equivalence fails.
StrictReport strict_comparison(const RingParams& params,
                               const explorer::Bounds& bounds = {});

// Adds the same amount to p and g; multiples of 2N stay in the same ring
// congruence class.
State shift_pg(const State& s, long long delta);

// Equivalent sample pairs for congruence checking: reachable
// representatives paired with 2N-shifted copies.
std::vector<std::pair<State, State>> equivalent_samples(
    const RingParams& params, std::size_t max_pairs);

}  // namespace ea::ringbuf
