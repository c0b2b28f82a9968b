#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "bblab/machine.hpp"

namespace bblab {

// True when no state reachable through defined transitions has an undefined
// entry, so the run can never discover a halt. The walk starts at the
// target of the forced first transition (the start state's other slot only
// matters if something loops back into it) and ignores tape symbols beyond
// that, an over-approximation. Fully defined tables are the common case.
bool halt_unreachable(const MachineTable& m, std::string_view input);

// Works backwards from every undefined slot: any run about to halt there
// must have arrived by some defined transition, which pins down the
// previous head cell's content twice — once as what was just written, once
// as what the halting context requires. If every backward branch runs into
// such a contradiction within `depth` steps, no halting configuration is
// reachable from anywhere, let alone from the start. Gives up (returns
// false) once a branch survives `depth` steps or the node budget is spent.
bool backward_halt_unreachable(const MachineTable& m, std::uint64_t depth);

// Detects exact configuration repeats with Floyd's two-pointer walk.  Finds
// every loop whose lead-in plus period fits in `budget` steps.  Declines
// (returns nothing) if the machine halts first — proving halting is the
// simulator's job, not a decider's.
std::optional<NonHaltProof> detect_cycler(const MachineTable& m,
                                          std::string_view input,
                                          std::uint64_t budget);

// Detects runs that repeat up to a sideways translation.  A step is a
// right record when the head sits at or beyond everything visited so far;
// two right records in the same state whose tape contents match after the
// shift — compared down to the leftmost cell touched between them — pin the
// run to repeating that stretch forever, drifting further right each time
// (mirrored for left records).  Declines if the machine halts within
// `budget` or the candidate-pair scan exceeds a fixed work cap.
std::optional<NonHaltProof> detect_translated_cycler(const MachineTable& m,
                                                     std::string_view input,
                                                     std::uint64_t budget);

// Abstract-run deciders. Both explore every configuration shape reachable
// from `input` in a finite abstraction of the tape; if the exploration
// completes without touching an undefined entry, the machine can never
// halt. Reaching an undefined entry abstractly, or blowing `node_cap`,
// gives up (false). Soundness rests on the abstractions only ever
// over-approximating the reachable configurations.
//
// run_closure_holds folds each side of the tape into runs of repeated
// `block`-cell words, collapsing repeat counts >= `threshold` into one
// "that many or more" bucket. Good for tapes built from long uniform
// repetitions: sweepers whose crossing behaviour depends on length parity
// need block 2, and so on. Requires block >= 1 and threshold >= 2.
//
// gram_closure_holds recodes the tape into `block`-cell cells anchored at
// the origin and keeps, per side, the exact `window`-cell strip beside the
// head plus the set of `window`-cell substrings the deeper side is allowed
// to contain anywhere. Good for tapes with bounded local structure but
// unbounded mixing, e.g. binary counters, where run folding has nothing to
// fold. Requires block >= 1 and window >= 1.
bool run_closure_holds(const MachineTable& m, std::string_view input,
                       int block, int threshold, std::uint64_t node_cap);
bool gram_closure_holds(const MachineTable& m, std::string_view input,
                        int block, int window, std::uint64_t node_cap);

// Grid search over small (block, threshold) / (block, window) pairs,
// cheapest first; returns a proof recording the first pair that closes.
std::optional<NonHaltProof> detect_run_closure(const MachineTable& m,
                                               std::string_view input,
                                               std::uint64_t node_cap);
std::optional<NonHaltProof> detect_gram_closure(const MachineTable& m,
                                                std::string_view input,
                                                std::uint64_t node_cap);

// Re-simulates from scratch and re-checks every condition the proof claims.
// Shares no state with the detectors above.
bool replay_proof(const NonHaltProof& p);

struct PipelineBudgets {
  std::uint64_t sim = 256;
  std::uint64_t cycler = 1024;
  std::uint64_t translated = 2048;
  std::uint64_t backward = 64;       // search depth; 0 disables the stage
  std::uint64_t closure = 1 << 15;   // node cap per closure attempt;
                                     // 0 disables both closure stages
};

struct Classification {
  RunOutcome outcome;
  // "sim", "halt-unreachable", "cycler", "translated-cycler", "backward",
  // "run-closure", "gram-closure" or "none"
  std::string stage;
};

// Simulation first, then the static check, then the two loop deciders,
// then the backward search, then the two abstract-run closures (costliest
// last).
// Halting is only ever reported by the simulation stage: a halt that hides
// beyond budgets.sim leaves the machine Unknown instead, because values
// discovered beyond the horizon the search tree was expanded with could not
// be trusted as maxima.
Classification classify(const MachineTable& m, std::string_view input,
                        const PipelineBudgets& budgets);

}  // namespace bblab
