#include "bblab/machine.hpp"

#include <algorithm>
#include <stdexcept>

namespace bblab {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument(what);
}

}  // namespace

MachineTable::MachineTable(int states) : states_(states) {
  if (states < 1 || states > 26) fail("state count must be in 1..26");
  entries_.resize(2 * static_cast<std::size_t>(states));
}

int MachineTable::defined_count() const {
  int k = 0;
  for (const auto& e : entries_)
    if (e) ++k;
  return k;
}

const TransitionEntry& MachineTable::entry(int state, Symbol read) const {
  return entries_[2 * static_cast<std::size_t>(state) + (read ? 1 : 0)];
}

void MachineTable::set_entry(int state, Symbol read, TransitionEntry e) {
  if (e && (e->next_state < 0 || e->next_state >= states_))
    fail("transition targets a state outside the table");
  if (e && e->write > 1) fail("write symbol must be 0 or 1");
  entries_[2 * static_cast<std::size_t>(state) + (read ? 1 : 0)] = e;
}

MachineTable parse_machine(std::string_view text) {
  std::vector<std::string_view> groups;
  std::size_t start = 0;
  while (true) {
    std::size_t us = text.find('_', start);
    if (us == std::string_view::npos) {
      groups.push_back(text.substr(start));
      break;
    }
    groups.push_back(text.substr(start, us - start));
    start = us + 1;
  }
  if (groups.size() > 26) fail("too many states (limit 26)");
  int n = static_cast<int>(groups.size());
  MachineTable m(n);
  for (int q = 0; q < n; ++q) {
    std::string_view g = groups[q];
    if (g.size() != 6)
      fail("state group '" + std::string(g) + "' must be 6 characters");
    for (Symbol r = 0; r < 2; ++r) {
      std::string_view e = g.substr(3 * r, 3);
      if (e == "---") continue;
      if (e[0] != '0' && e[0] != '1')
        fail("bad write symbol in entry '" + std::string(e) + "'");
      if (e[1] != 'L' && e[1] != 'R')
        fail("bad move letter in entry '" + std::string(e) + "'");
      if (e[2] < 'A' || e[2] > 'Z')
        fail("bad state letter in entry '" + std::string(e) + "'");
      int target = e[2] - 'A';
      if (target >= n)
        fail("entry '" + std::string(e) + "' targets a missing state");
      Transition t;
      t.write = e[0] == '1';
      t.move = e[1] == 'R' ? MoveDir::Right : MoveDir::Left;
      t.next_state = target;
      m.set_entry(q, r, t);
    }
  }
  return m;
}

std::string format_machine(const MachineTable& m) {
  std::string out;
  for (int q = 0; q < m.state_count(); ++q) {
    if (q) out += '_';
    for (Symbol r = 0; r < 2; ++r) {
      const TransitionEntry& e = m.entry(q, r);
      if (!e) {
        out += "---";
      } else {
        out += e->write ? '1' : '0';
        out += e->move == MoveDir::Right ? 'R' : 'L';
        out += static_cast<char>('A' + e->next_state);
      }
    }
  }
  return out;
}

Tape::Tape(std::string_view bits) {
  if (bits.empty()) {
    right_.push_back(0);
    return;
  }
  for (char c : bits) {
    if (c != '0' && c != '1')
      fail("tape input must be a binary string");
    right_.push_back(c == '1');
  }
  max_visited_ = static_cast<std::int64_t>(bits.size()) - 1;
}

Symbol Tape::at(std::int64_t cell) const {
  if (cell >= 0) {
    auto i = static_cast<std::size_t>(cell);
    return i < right_.size() ? right_[i] : 0;
  }
  auto i = static_cast<std::size_t>(-cell) - 1;
  return i < left_.size() ? left_[i] : 0;
}

Symbol& Tape::cell_ref(std::int64_t cell) {
  if (cell >= 0) {
    auto i = static_cast<std::size_t>(cell);
    if (i >= right_.size()) right_.resize(i + 1, 0);
    return right_[i];
  }
  auto i = static_cast<std::size_t>(-cell) - 1;
  if (i >= left_.size()) left_.resize(i + 1, 0);
  return left_[i];
}

void Tape::move(MoveDir d) {
  head_ += d == MoveDir::Right ? 1 : -1;
  cell_ref(head_);
  min_visited_ = std::min(min_visited_, head_);
  max_visited_ = std::max(max_visited_, head_);
}

void Tape::replace_window(std::string_view bits) {
  if (bits.empty()) fail("replacement content must be nonempty");
  std::int64_t anchor = min_visited_;
  left_.clear();
  right_.clear();
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1')
      fail("replacement content must be a binary string");
    cell_ref(anchor + static_cast<std::int64_t>(i)) = bits[i] == '1';
  }
  head_ = anchor;
  min_visited_ = anchor;
  max_visited_ = anchor + static_cast<std::int64_t>(bits.size()) - 1;
}

std::string Tape::window_string() const {
  std::string out;
  out.reserve(static_cast<std::size_t>(max_visited_ - min_visited_ + 1));
  for (std::int64_t c = min_visited_; c <= max_visited_; ++c)
    out += static_cast<char>('0' + at(c));
  return out;
}

bool Tape::same_content(const Tape& other) const {
  std::int64_t lo = std::min(min_visited_, other.min_visited_);
  std::int64_t hi = std::max(max_visited_, other.max_visited_);
  for (std::int64_t c = lo; c <= hi; ++c)
    if (at(c) != other.at(c)) return false;
  return true;
}

bool same_configuration(const Configuration& a, const Configuration& b) {
  return a.state == b.state && a.tape.head() == b.tape.head() &&
         a.tape.same_content(b.tape);
}

Configuration initial_configuration(std::string_view input) {
  Configuration c;
  c.tape = Tape(input);
  return c;
}

std::string format_proof(const NonHaltProof& p) {
  if (p.kind == NonHaltProof::Kind::HaltUnreachable) return "halt-unreachable";
  if (p.kind == NonHaltProof::Kind::BackwardUnreachable)
    return "backward-unreachable:depth=" + std::to_string(p.period);
  if (p.kind == NonHaltProof::Kind::RunClosure)
    return "run-closure:block=" + std::to_string(p.shift) +
           ";threshold=" + std::to_string(p.period);
  if (p.kind == NonHaltProof::Kind::GramClosure)
    return "gram-closure:block=" + std::to_string(p.shift) +
           ";window=" + std::to_string(p.period);
  std::string kind =
      p.kind == NonHaltProof::Kind::Cycler ? "cycler" : "translated-cycler";
  return kind + ":start=" + std::to_string(p.start_step) +
         ";period=" + std::to_string(p.period) +
         ";shift=" + std::to_string(p.shift);
}

RunOutcome RunOutcome::halted(std::uint64_t steps) {
  RunOutcome o;
  o.kind = Kind::Halted;
  o.steps = steps;
  return o;
}

RunOutcome RunOutcome::non_halting(NonHaltProof p) {
  RunOutcome o;
  o.kind = Kind::NonHaltingProven;
  o.proof = std::move(p);
  return o;
}

RunOutcome RunOutcome::unknown(std::uint64_t budget) {
  RunOutcome o;
  o.kind = Kind::Unknown;
  o.budget = budget;
  return o;
}

StepOutcome step(const MachineTable& m, const Configuration& c) {
  StepOutcome out;
  const TransitionEntry& e = m.entry(c.state, c.tape.read());
  if (!e) {
    out.halted = true;
    out.steps = c.steps_taken + 1;
    return out;
  }
  out.next = c;
  out.next.tape.write(e->write);
  out.next.tape.move(e->move);
  out.next.state = e->next_state;
  out.next.steps_taken = c.steps_taken + 1;
  return out;
}

bool advance(const MachineTable& m, Configuration& c) {
  const TransitionEntry& e = m.entry(c.state, c.tape.read());
  if (!e) return false;
  c.tape.write(e->write);
  c.tape.move(e->move);
  c.state = e->next_state;
  ++c.steps_taken;
  return true;
}

RunOutcome run(const MachineTable& m, std::string_view input,
               std::uint64_t budget, Trace* trace) {
  if (budget < 1) fail("run budget must be at least 1");
  Configuration c = initial_configuration(input);
  if (trace) {
    trace->clear();
    trace->push_back(c);
  }
  for (std::uint64_t i = 1; i <= budget; ++i) {
    if (!advance(m, c)) return RunOutcome::halted(c.steps_taken + 1);
    if (trace) trace->push_back(c);
  }
  return RunOutcome::unknown(budget);
}

}  // namespace bblab
