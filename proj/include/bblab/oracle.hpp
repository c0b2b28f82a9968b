#pragma once
// Dual-tape machines that can consult a stack of oracles.
//
// Each state has one entry per (work symbol, oracle symbol) pair. A Move
// entry writes and moves both heads in a single step. An Inquire entry
// reads the oracle tape's visited window as a string alpha, replaces it by
// F(i, alpha) in a single step (head on the first symbol of the result) and
// leaves the work tape alone. Undefined entries halt; discovering one
// counts as the final step, exactly as for the single-tape machines.
//
// Text form: four entries per state for reads (0,0),(0,1),(1,0),(1,1) in
// that order (work symbol first), concatenated; states joined by "_".
// Move: work write digit, work move letter, oracle write digit, oracle move
// letter, next state letter ("1R0LB"). Inquire: "?i>X" with i the 1-based
// oracle index. Undefined: "-----".
//
// Tables are finite truncations, so an inquiry can fall outside the table;
// that is reported as a first-class Unresolved outcome, not an error.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bblab/machine.hpp"

namespace bblab {

// Most-significant-bit-first binary numeral without leading zeros; 0 -> "0".
std::string encode_nat(std::uint64_t v);
// Strict inverse; rejects empty strings, stray characters and leading zeros.
std::uint64_t decode_nat(std::string_view numeral);

struct OracleEntry {
  enum class Kind { Undefined, Move, Inquire };
  Kind kind = Kind::Undefined;
  int next_state = 0;
  Symbol work_write = 0;
  MoveDir work_move = MoveDir::Right;
  Symbol oracle_write = 0;
  MoveDir oracle_move = MoveDir::Right;
  int oracle_index = 1;  // Inquire only, 1-based
  friend bool operator==(const OracleEntry&, const OracleEntry&) = default;
};

class OracleMachineTable {
 public:
  OracleMachineTable() : OracleMachineTable(1, 1) {}
  OracleMachineTable(int states, int order);

  int state_count() const { return states_; }
  int order() const { return order_; }
  int defined_count() const;

  const OracleEntry& entry(int state, Symbol work_read,
                           Symbol oracle_read) const;
  void set_entry(int state, Symbol work_read, Symbol oracle_read,
                 OracleEntry e);

  friend bool operator==(const OracleMachineTable&,
                         const OracleMachineTable&) = default;

 private:
  int states_;
  int order_;
  std::vector<OracleEntry> entries_;  // 4 per state
};

OracleMachineTable parse_oracle_machine(std::string_view text, int order);
std::string format_oracle_machine(const OracleMachineTable& m);
// Largest inquire index appearing in the text (at least 1).
int infer_oracle_order(std::string_view text);

// One finite oracle truncation: alpha -> F(i, alpha).
class OracleTable {
 public:
  OracleTable() = default;
  explicit OracleTable(int index, std::string provenance = "");

  int index() const { return index_; }
  const std::string& provenance() const { return provenance_; }
  std::size_t size() const { return map_.size(); }
  const std::map<std::string, std::string>& entries() const { return map_; }

  void set(const std::string& alpha, const std::string& value);
  std::optional<std::string> lookup(const std::string& alpha) const;

  // Header line "oracle i", then one "alpha<TAB>value" line per entry.
  std::string serialize() const;
  static OracleTable parse(std::string_view text);

 private:
  int index_ = 1;
  std::string provenance_;
  std::map<std::string, std::string> map_;
};

// Position k serves oracle index k + 1.
using OracleSet = std::vector<OracleTable>;

struct DualConfiguration {
  int state = 0;
  Tape work;
  Tape oracle;  // starts all-0, so its window reads "0"
  std::uint64_t steps_taken = 0;
};

bool same_dual_configuration(const DualConfiguration& a,
                             const DualConfiguration& b);
DualConfiguration initial_dual_configuration(std::string_view input);

struct OracleStepOutcome {
  enum class Kind { Applied, Halted, Unresolved };
  Kind kind = Kind::Applied;
  DualConfiguration next;   // Applied
  std::uint64_t steps = 0;  // Halted
  int oracle_index = 0;     // Unresolved
  std::string query;        // Unresolved
};

// Pure single step. The oracle set must cover indexes 1..machine.order().
OracleStepOutcome oracle_step(const OracleMachineTable& m,
                              const DualConfiguration& c,
                              const OracleSet& oracles);

struct OracleRunOutcome {
  enum class Kind { Halted, Unknown, Unresolved };
  Kind kind = Kind::Unknown;
  std::uint64_t steps = 0;   // Halted: includes the final halt step
  std::uint64_t budget = 0;  // Unknown
  int oracle_index = 0;      // Unresolved
  std::string query;         // Unresolved: the alpha that fell off the table

  static OracleRunOutcome halted(std::uint64_t steps);
  static OracleRunOutcome unknown(std::uint64_t budget);
  static OracleRunOutcome unresolved(std::uint64_t steps_taken, int index,
                                     std::string query);
  std::uint64_t steps_taken_at_stop = 0;  // Unresolved: steps before the stop
};

using DualTrace = std::vector<DualConfiguration>;

OracleRunOutcome oracle_run(const OracleMachineTable& m,
                            std::string_view input, std::uint64_t budget,
                            const OracleSet& oracles,
                            DualTrace* trace = nullptr);

// A busy beaver value offered for oracle-table construction.
struct BBValue {
  int n = 0;
  std::uint64_t value = 0;
  bool exact = false;
};

// Table mapping encode_nat(n) -> encode_nat(value at n) for 1 <= n <= max_n.
// `order_k` is the order of the backing values; the result serves oracle
// index order_k + 1. Missing or non-exact values are refused loudly.
// max_n = 0 yields the empty table: every inquiry comes back unresolved.
OracleTable build_bb_oracle(int order_k, const std::vector<BBValue>& values,
                            int max_n, std::string provenance = "");

}  // namespace bblab
