#pragma once
// Two-symbol Turing machines with partial transition tables.
//
// A machine halts when it looks up a (state, symbol) pair whose table entry
// is undefined; discovering that entry counts as the final step. So the
// machine whose table is entirely undefined halts in exactly 1 step.
//
// Text form: one group of two 3-character entries per state (read 0 first,
// then read 1), groups joined by "_". A defined entry is write digit, move
// letter, next state letter ("1RB"); an undefined entry is "---".

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bblab {

using Symbol = std::uint8_t;  // 0 or 1

enum class MoveDir : std::uint8_t { Left, Right };

struct Transition {
  int next_state = 0;
  Symbol write = 0;
  MoveDir move = MoveDir::Right;
  friend bool operator==(const Transition&, const Transition&) = default;
};

using TransitionEntry = std::optional<Transition>;

class MachineTable {
 public:
  MachineTable() : MachineTable(1) {}
  explicit MachineTable(int states);

  int state_count() const { return states_; }
  int defined_count() const;

  const TransitionEntry& entry(int state, Symbol read) const;
  void set_entry(int state, Symbol read, TransitionEntry e);

  friend bool operator==(const MachineTable&, const MachineTable&) = default;

 private:
  int states_;
  std::vector<TransitionEntry> entries_;  // 2 per state, read-0 slot first
};

// Throws std::invalid_argument on malformed entries, dangling state letters
// or wrong group arity. At most 26 states (state letters A..Z).
MachineTable parse_machine(std::string_view text);
std::string format_machine(const MachineTable& m);

// One-sided infinite-in-both-directions tape over {0,1}; unset cells read 0.
// The visited window covers every cell the head has occupied plus the cells
// holding the initial input.
class Tape {
 public:
  Tape() { right_.push_back(0); }
  explicit Tape(std::string_view bits);

  Symbol read() const { return at(head_); }
  Symbol at(std::int64_t cell) const;
  void write(Symbol s) { cell_ref(head_) = s; }
  void move(MoveDir d);

  // Oracle-tape replacement: content becomes `bits` anchored at the left
  // edge of the old window, everything else is cleared, the head lands on
  // the first symbol and the window is exactly the new content.
  void replace_window(std::string_view bits);

  std::int64_t head() const { return head_; }
  std::int64_t min_visited() const { return min_visited_; }
  std::int64_t max_visited() const { return max_visited_; }

  // Content of the visited window, leftmost to rightmost cell.
  std::string window_string() const;

  // Equality as total functions on the integers (padding reads 0).
  bool same_content(const Tape& other) const;

 private:
  Symbol& cell_ref(std::int64_t cell);

  std::vector<Symbol> right_;  // cells 0, 1, 2, ...
  std::vector<Symbol> left_;   // cells -1, -2, ...
  std::int64_t head_ = 0;
  std::int64_t min_visited_ = 0;
  std::int64_t max_visited_ = 0;
};

struct Configuration {
  int state = 0;
  Tape tape;
  std::uint64_t steps_taken = 0;  // applied transitions so far
};

// State, head position and tape content agree (step counters are ignored).
bool same_configuration(const Configuration& a, const Configuration& b);

// Throws on non-binary input characters.
Configuration initial_configuration(std::string_view input);

struct NonHaltProof {
  // HaltUnreachable: no state reachable through defined transitions has an
  // undefined entry, so the run can never discover a halt. A static fact;
  // start_step, period and shift carry nothing and stay zero.
  // BackwardUnreachable: every backward branch from every undefined slot
  // contradicts itself within `period` steps (period holds the search
  // depth; start_step and shift stay zero).
  // RunClosure: the reachable configurations stay inside a finite set of
  // tape shapes made of repeated blocks of `shift` cells, where repeat
  // counts at or above `period` are collapsed together; no shape in the
  // closed set sits on an undefined entry. start_step holds the node cap
  // the closure was computed under.
  // GramClosure: same idea with the tape recoded into blocks of `shift`
  // cells anchored at the origin, each side abstracted by its exact
  // `period`-block near window plus the set of `period`-block windows the
  // deeper side may contain. start_step holds the node cap.
  enum class Kind { Cycler, TranslatedCycler, HaltUnreachable,
                    BackwardUnreachable, RunClosure, GramClosure };
  Kind kind = Kind::Cycler;
  std::uint64_t start_step = 0;
  std::uint64_t period = 0;  // >= 1 for the two dynamic kinds
  std::int64_t shift = 0;    // 0 for cyclers, nonzero for translated cyclers
  std::string machine;       // text form
  std::string input;
};

std::string format_proof(const NonHaltProof& p);

struct RunOutcome {
  enum class Kind { Halted, NonHaltingProven, Unknown };
  Kind kind = Kind::Unknown;
  std::uint64_t steps = 0;   // Halted: count includes the final halt step
  std::uint64_t budget = 0;  // Unknown: the budget that ran out
  std::optional<NonHaltProof> proof;

  static RunOutcome halted(std::uint64_t steps);
  static RunOutcome non_halting(NonHaltProof p);
  static RunOutcome unknown(std::uint64_t budget);
};

struct StepOutcome {
  bool halted = false;
  Configuration next;        // valid when !halted
  std::uint64_t steps = 0;   // valid when halted: steps_taken + 1
};

// Pure single step. Total for every configuration.
StepOutcome step(const MachineTable& m, const Configuration& c);

// In-place step; returns false (leaving c untouched) if the entry is
// undefined, i.e. the machine halts at step c.steps_taken + 1.
bool advance(const MachineTable& m, Configuration& c);

using Trace = std::vector<Configuration>;

// Runs at most `budget` steps (budget >= 1). The trace, when requested,
// records the initial configuration and one entry per applied transition;
// the halt step changes nothing so it adds no entry.
RunOutcome run(const MachineTable& m, std::string_view input,
               std::uint64_t budget, Trace* trace = nullptr);

}  // namespace bblab
