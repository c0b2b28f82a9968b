#include "bblab/deciders.hpp"

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

namespace bblab {

namespace {

// Hard ceiling on cells compared while scanning record pairs, so machines
// with many near-miss records (counters, mostly) fail fast instead of
// going quadratic. Hitting the cap means "no proof", never a wrong proof.
constexpr std::uint64_t kPairScanCellCap = std::uint64_t(1) << 22;

NonHaltProof make_proof(NonHaltProof::Kind kind, std::uint64_t start,
                        std::uint64_t period, std::int64_t shift,
                        const MachineTable& m, std::string_view input) {
  NonHaltProof p;
  p.kind = kind;
  p.start_step = start;
  p.period = period;
  p.shift = shift;
  p.machine = format_machine(m);
  p.input = std::string(input);
  return p;
}

struct Record {
  std::uint64_t t;
  Configuration cfg;
};

// Shifted window equality for one candidate pair of records. The window
// runs from the far extreme the head touched between them up to the
// earlier record's head; everything beyond a record's head on its own side
// is unvisited, hence blank on both sides of the comparison.
bool pair_matches(const Record& r, const Configuration& cur, std::int64_t s,
                  const std::vector<std::int64_t>& heads,
                  std::uint64_t current_t, std::uint64_t* work) {
  const auto lo_it = heads.begin() + static_cast<std::ptrdiff_t>(r.t);
  const auto hi_it = heads.begin() + static_cast<std::ptrdiff_t>(current_t) + 1;
  *work += current_t - r.t;
  if (*work > kPairScanCellCap) return false;

  std::int64_t from, to;
  if (s > 0) {  // right records: compare down to the leftmost visited cell
    from = *std::min_element(lo_it, hi_it);
    to = r.cfg.tape.head();
  } else {  // left records: compare up to the rightmost visited cell
    from = r.cfg.tape.head();
    to = *std::max_element(lo_it, hi_it);
  }
  *work += static_cast<std::uint64_t>(to - from + 1);
  if (*work > kPairScanCellCap) return false;
  for (std::int64_t x = from; x <= to; ++x)
    if (r.cfg.tape.at(x) != cur.tape.at(x + s)) return false;
  return true;
}

}  // namespace

bool halt_unreachable(const MachineTable& m, std::string_view input) {
  const Symbol first = !input.empty() && input.front() == '1' ? 1 : 0;
  const TransitionEntry& start = m.entry(0, first);
  if (!start) return false;  // halts at step 1; the simulator's territory
  const int n = m.state_count();
  std::vector<bool> seen(n, false);
  std::vector<int> frontier{start->next_state};
  seen[start->next_state] = true;
  while (!frontier.empty()) {
    int q = frontier.back();
    frontier.pop_back();
    for (Symbol r = 0; r < 2; ++r) {
      const TransitionEntry& e = m.entry(q, r);
      if (!e) return false;  // a reachable state could hit a halt
      if (!seen[e->next_state]) {
        seen[e->next_state] = true;
        frontier.push_back(e->next_state);
      }
    }
  }
  return true;
}

bool backward_halt_unreachable(const MachineTable& m, std::uint64_t depth) {
  struct Node {
    int state;
    std::int64_t head;
    std::map<std::int64_t, Symbol> tape;  // cells pinned at this instant
    std::uint64_t age;
  };
  const int n = m.state_count();
  std::vector<Node> stack;
  for (int q = 0; q < n; ++q)
    for (Symbol s = 0; s < 2; ++s)
      if (!m.entry(q, s))
        stack.push_back(Node{q, 0, {{0, s}}, 0});
  if (stack.empty()) return true;  // fully defined; the static check's case

  constexpr std::uint64_t kNodeCap = std::uint64_t(1) << 16;
  std::uint64_t nodes = 0;
  while (!stack.empty()) {
    Node nd = std::move(stack.back());
    stack.pop_back();
    if (++nodes > kNodeCap) return false;
    if (nd.age >= depth) return false;  // a branch survived: give up
    for (int p = 0; p < n; ++p)
      for (Symbol r = 0; r < 2; ++r) {
        const TransitionEntry& e = m.entry(p, r);
        if (!e || e->next_state != nd.state) continue;
        // The step that led here wrote e->write one cell against its move.
        const std::int64_t at =
            nd.head + (e->move == MoveDir::Right ? -1 : 1);
        auto known = nd.tape.find(at);
        if (known != nd.tape.end() && known->second != e->write)
          continue;  // contradicts what this instant's tape must hold
        Node child{p, at, nd.tape, nd.age + 1};
        child.tape[at] = r;  // before the step, that cell held what was read
        stack.push_back(std::move(child));
      }
    // A node with no consistent predecessor simply dies, which is the goal.
  }
  return true;
}

std::optional<NonHaltProof> detect_cycler(const MachineTable& m,
                                          std::string_view input,
                                          std::uint64_t budget) {
  Configuration slow = initial_configuration(input);
  Configuration fast = slow;
  bool met = false;
  while (slow.steps_taken < budget) {
    if (!advance(m, slow)) return std::nullopt;
    if (!advance(m, fast)) return std::nullopt;
    if (!advance(m, fast)) return std::nullopt;
    if (same_configuration(slow, fast)) {
      met = true;
      break;
    }
  }
  if (!met) return std::nullopt;

  // Equal-speed pointers from the start and the meeting point join exactly
  // where the loop begins; one more lap measures the period. Both walks
  // stay within ground the fast pointer already proved halt-free.
  Configuration a = initial_configuration(input);
  Configuration b = slow;
  while (!same_configuration(a, b)) {
    advance(m, a);
    advance(m, b);
  }
  const std::uint64_t mu = a.steps_taken;

  Configuration c = a;
  std::uint64_t lambda = 0;
  do {
    advance(m, c);
    ++lambda;
  } while (!same_configuration(c, a));

  return make_proof(NonHaltProof::Kind::Cycler, mu, lambda, 0, m, input);
}

std::optional<NonHaltProof> detect_translated_cycler(const MachineTable& m,
                                                     std::string_view input,
                                                     std::uint64_t budget) {
  Configuration cur = initial_configuration(input);
  std::vector<std::int64_t> heads;
  heads.reserve(budget + 1);
  heads.push_back(cur.tape.head());

  // Everything at or past these marks has been visited (or was input).
  std::int64_t hi_water = cur.tape.max_visited();
  std::int64_t lo_water = cur.tape.min_visited();

  std::vector<Record> right, left;
  std::uint64_t work = 0;

  for (std::uint64_t t = 0;; ++t) {
    const std::int64_t h = cur.tape.head();

    if (h >= hi_water) {
      for (const Record& r : right) {
        if (r.cfg.state != cur.state) continue;
        const std::int64_t s = h - r.cfg.tape.head();
        if (s <= 0) continue;
        if (pair_matches(r, cur, s, heads, t, &work))
          return make_proof(NonHaltProof::Kind::TranslatedCycler, r.t,
                            t - r.t, s, m, input);
        if (work > kPairScanCellCap) return std::nullopt;
      }
      right.push_back(Record{t, cur});
    }
    if (h <= lo_water) {
      for (const Record& r : left) {
        if (r.cfg.state != cur.state) continue;
        const std::int64_t s = h - r.cfg.tape.head();
        if (s >= 0) continue;
        if (pair_matches(r, cur, s, heads, t, &work))
          return make_proof(NonHaltProof::Kind::TranslatedCycler, r.t,
                            t - r.t, s, m, input);
        if (work > kPairScanCellCap) return std::nullopt;
      }
      left.push_back(Record{t, cur});
    }

    hi_water = std::max(hi_water, h);
    lo_water = std::min(lo_water, h);

    if (t >= budget) break;
    if (!advance(m, cur)) return std::nullopt;  // it halts: not our call
    heads.push_back(cur.tape.head());
  }
  return std::nullopt;
}

bool replay_proof(const NonHaltProof& p) {
  MachineTable m;
  Configuration cur;
  try {
    m = parse_machine(p.machine);
    cur = initial_configuration(p.input);
  } catch (const std::invalid_argument&) {
    return false;
  }
  if (p.kind == NonHaltProof::Kind::HaltUnreachable)
    return halt_unreachable(m, p.input);
  if (p.kind == NonHaltProof::Kind::BackwardUnreachable)
    return p.period >= 1 && backward_halt_unreachable(m, p.period);
  if (p.kind == NonHaltProof::Kind::RunClosure)
    return run_closure_holds(m, p.input, static_cast<int>(p.shift),
                             static_cast<int>(p.period), p.start_step);
  if (p.kind == NonHaltProof::Kind::GramClosure)
    return gram_closure_holds(m, p.input, static_cast<int>(p.shift),
                              static_cast<int>(p.period), p.start_step);

  if (p.period < 1) return false;
  const std::uint64_t t1 = p.start_step;
  const std::uint64_t t2 = p.start_step + p.period;

  if (p.kind == NonHaltProof::Kind::Cycler) {
    if (p.shift != 0) return false;
    for (std::uint64_t t = 0; t < t1; ++t)
      if (!advance(m, cur)) return false;
    Configuration snapshot = cur;
    for (std::uint64_t t = t1; t < t2; ++t)
      if (!advance(m, cur)) return false;
    return same_configuration(snapshot, cur);
  }

  if (p.shift == 0) return false;
  std::vector<std::int64_t> heads{cur.tape.head()};
  std::int64_t hi_water = cur.tape.max_visited();
  std::int64_t lo_water = cur.tape.min_visited();
  std::optional<Configuration> first;
  bool rec1 = false, rec2 = false;

  for (std::uint64_t t = 0; t <= t2; ++t) {
    const std::int64_t h = cur.tape.head();
    const bool is_record = p.shift > 0 ? h >= hi_water : h <= lo_water;
    if (t == t1) {
      first = cur;
      rec1 = is_record;
    }
    if (t == t2) {
      rec2 = is_record;
      break;
    }
    hi_water = std::max(hi_water, h);
    lo_water = std::min(lo_water, h);
    if (!advance(m, cur)) return false;
    heads.push_back(cur.tape.head());
  }
  if (!rec1 || !rec2 || !first) return false;
  if (cur.state != first->state) return false;
  if (cur.tape.head() - first->tape.head() != p.shift) return false;

  const auto lo_it = heads.begin() + static_cast<std::ptrdiff_t>(t1);
  const auto hi_it = heads.begin() + static_cast<std::ptrdiff_t>(t2) + 1;
  std::int64_t from, to;
  if (p.shift > 0) {
    from = *std::min_element(lo_it, hi_it);
    to = first->tape.head();
  } else {
    from = first->tape.head();
    to = *std::max_element(lo_it, hi_it);
  }
  for (std::int64_t x = from; x <= to; ++x)
    if (first->tape.at(x) != cur.tape.at(x + p.shift)) return false;
  return true;
}

Classification classify(const MachineTable& m, std::string_view input,
                        const PipelineBudgets& budgets) {
  RunOutcome sim = run(m, input, budgets.sim);
  if (sim.kind == RunOutcome::Kind::Halted) return {std::move(sim), "sim"};
  if (halt_unreachable(m, input))
    return {RunOutcome::non_halting(make_proof(
                NonHaltProof::Kind::HaltUnreachable, 0, 0, 0, m, input)),
            "halt-unreachable"};
  if (auto p = detect_cycler(m, input, budgets.cycler))
    return {RunOutcome::non_halting(std::move(*p)), "cycler"};
  if (auto p = detect_translated_cycler(m, input, budgets.translated))
    return {RunOutcome::non_halting(std::move(*p)), "translated-cycler"};
  if (budgets.backward >= 1 && backward_halt_unreachable(m, budgets.backward))
    return {RunOutcome::non_halting(
                make_proof(NonHaltProof::Kind::BackwardUnreachable, 0,
                           budgets.backward, 0, m, input)),
            "backward"};
  if (budgets.closure >= 1) {
    if (auto p = detect_run_closure(m, input, budgets.closure))
      return {RunOutcome::non_halting(std::move(*p)), "run-closure"};
    if (auto p = detect_gram_closure(m, input, budgets.closure))
      return {RunOutcome::non_halting(std::move(*p)), "gram-closure"};
  }
  return {RunOutcome::unknown(budgets.sim), "none"};
}

}  // namespace bblab
