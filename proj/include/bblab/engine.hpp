#pragma once
// Campaign driver: sweeps a machine space, pushes every machine through the
// decider pipeline, and reduces the halting step counts to a maximum. A
// result is exact only when nothing in the space was left Unknown (or, for
// oracle campaigns, Unresolved). Campaigns can stream records into a
// ResultsStore and resume from it after a kill.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <bblab/deciders.hpp>
#include <bblab/oracle.hpp>
#include <bblab/store.hpp>

namespace bblab {

struct BBResult {
  std::uint64_t value = 0;  // max halting steps seen
  bool exact = false;       // true only when every machine was settled
  std::string champion;     // lexicographically least machine text at value
  std::uint64_t champion_at = 0;  // 1-based position in enumeration order
  std::uint64_t classified = 0;   // machines pushed through the pipeline
  std::uint64_t halted = 0;
  std::uint64_t unknown = 0;      // budget ran out, no proof either way
  std::uint64_t unresolved = 0;   // inquiry fell off the oracle table
  std::string oracle_provenance;  // where the oracle tables came from

  friend bool operator==(const BBResult&, const BBResult&) = default;
};

// Maximum halting steps over the n-state machines on input s, swept in
// tree-normal-form order with the given budgets. The tree is grown with
// budgets.sim as its halting horizon, so any halt the pipeline can report
// is inside the horizon the tree was expanded with. `workers` splits the
// classification of each fixed-size chunk across threads; results are
// reduced in enumeration order, so the outcome is identical for any worker
// count. With a store, every record is appended as it is produced and an
// existing campaign under the same key is resumed from its record count.
BBResult compute_bb(std::string_view s, int n,
                    const PipelineBudgets& budgets = {},
                    ResultsStore* store = nullptr, int workers = 1);

// A champion re-proved by an independent route: its run is replayed as a
// string-rewriting derivation and the certificate is checked end to end.
struct ChampionRecord {
  std::string key;
  std::string machine;
  std::uint64_t steps = 0;
  std::uint64_t found_at = 0;
  bool verified = false;
  std::string certificate;  // serialized derivation (empty if tracing failed)
};

ChampionRecord certify_champion(std::string_view s, const std::string& machine,
                                std::uint64_t steps, std::uint64_t found_at);

// Builds the oracle tables for indexes 1..depth by running exhaustive
// order-0 campaigns for 1..depth states on empty input. Every backing value
// must come out exact; depth 0 yields a single empty table (every inquiry
// comes back unresolved); depth > 3 is refused because the order-0 value
// for four or more states is not settled exactly by these budgets.
OracleSet bb_oracle_set(int depth, const PipelineBudgets& budgets = {});

// Best known value for order-1 machines with n states on input s: a sweep
// of the first `sweep_limit` machines in index order, plus any `seeds`
// (machine texts) worth trying beyond the sweep. The result is a certified
// lower bound unless the entire space was swept with nothing Unknown or
// Unresolved — for any interesting n it never is, and `exact` says so.
BBResult compute_bb_higher(std::string_view s, int order, int n,
                           int oracle_depth,
                           const PipelineBudgets& budgets = {},
                           const std::vector<std::string>& seeds = {},
                           std::uint64_t sweep_limit = 200000);

// One comparison row: how b relates to f(a).
struct RatioRow {
  int n = 0;
  std::string f;  // "id", "square", "pow2" for growth rows; "cross"
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  double f_of_a = 0.0;
  double ratio = 0.0;         // f(a) / b
  std::string label;          // always "EVIDENCE": finitely many rows
};

struct RatioReport {
  std::vector<RatioRow> growth;  // b = value at n+1 states, same input
  std::vector<RatioRow> cross;   // b = value at same n, input t
};

// Growth rows for input s over n in [n_lo, n_hi] (each needs n+1 as well)
// and cross rows against input t. Every value involved must come out exact
// under the budgets — a ratio over a lower bound would be noise — else
// throws std::runtime_error. Rows are labeled EVIDENCE: any finite table
// of values is consistent with every eventual growth behaviour.
RatioReport ratio_report(std::string_view s, std::string_view t, int n_lo,
                         int n_hi, const PipelineBudgets& budgets = {});

}  // namespace bblab
