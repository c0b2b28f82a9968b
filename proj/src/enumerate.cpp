#include "bblab/enumerate.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace bblab {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument(msg);
}

void check_states(int n) {
  if (n < 1 || n > 26) fail("state count must be between 1 and 26");
}

BigInt ipow(int base, int exp) {
  BigInt r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

// Digits run in text order: 0 is the undefined entry, then the defined ones
// with write major, move (L before R) and next state minor.
int digit_of(const TransitionEntry& e, int n) {
  if (!e) return 0;
  int dir = e->move == MoveDir::Right ? 1 : 0;
  return 1 + (e->write * 2 + dir) * n + e->next_state;
}

TransitionEntry entry_of(int digit, int n) {
  if (digit == 0) return std::nullopt;
  int e = digit - 1;
  Transition t;
  t.write = static_cast<Symbol>(e / (2 * n));
  t.move = (e % (2 * n)) / n == 0 ? MoveDir::Left : MoveDir::Right;
  t.next_state = e % n;
  return t;
}

// Same scheme for dual-tape entries: undefined, then the moves ordered by
// (work write, work move, oracle write, oracle move, next state), then the
// inquiries ordered by (index, next state).
int oracle_digit_of(const OracleEntry& e, int n) {
  switch (e.kind) {
    case OracleEntry::Kind::Undefined:
      return 0;
    case OracleEntry::Kind::Move: {
      int wm = e.work_move == MoveDir::Right ? 1 : 0;
      int om = e.oracle_move == MoveDir::Right ? 1 : 0;
      int code = ((e.work_write * 2 + wm) * 2 + e.oracle_write) * 2 + om;
      return 1 + code * n + e.next_state;
    }
    case OracleEntry::Kind::Inquire:
      return 1 + 16 * n + (e.oracle_index - 1) * n + e.next_state;
  }
  fail("corrupt oracle entry");
}

OracleEntry oracle_entry_of(int digit, int n) {
  OracleEntry oe;
  if (digit == 0) return oe;
  if (digit <= 16 * n) {
    int e = digit - 1;
    oe.kind = OracleEntry::Kind::Move;
    oe.next_state = e % n;
    int code = e / n;  // (ww, wm, ow, om) packed big-endian
    oe.oracle_move = code & 1 ? MoveDir::Right : MoveDir::Left;
    oe.oracle_write = static_cast<Symbol>((code >> 1) & 1);
    oe.work_move = (code >> 2) & 1 ? MoveDir::Right : MoveDir::Left;
    oe.work_write = static_cast<Symbol>((code >> 3) & 1);
    return oe;
  }
  int e = digit - 1 - 16 * n;
  oe.kind = OracleEntry::Kind::Inquire;
  oe.oracle_index = e / n + 1;
  oe.next_state = e % n;
  return oe;
}

void check_order(int order) {
  // Two-digit inquire indexes would break the fixed-width text order.
  if (order < 1 || order > 9) fail("oracle order must be between 1 and 9");
}

}  // namespace

BigInt space_size(int n) {
  check_states(n);
  return ipow(4 * n + 1, 2 * n);
}

BigInt oracle_space_size(int order, int n) {
  check_states(n);
  check_order(order);
  return ipow(1 + 16 * n + order * n, 4 * n);
}

MachineTable machine_at_index(int n, const BigInt& index) {
  if (index < 0 || index >= space_size(n)) fail("table index out of range");
  const int k = 4 * n + 1;
  MachineTable m(n);
  BigInt rest = index;
  for (int slot = 2 * n - 1; slot >= 0; --slot) {
    int digit = (rest % k).convert_to<int>();
    rest /= k;
    m.set_entry(slot / 2, static_cast<Symbol>(slot % 2), entry_of(digit, n));
  }
  return m;
}

BigInt machine_index(const MachineTable& m) {
  const int n = m.state_count();
  const int k = 4 * n + 1;
  BigInt index = 0;
  for (int slot = 0; slot < 2 * n; ++slot) {
    const TransitionEntry& e = m.entry(slot / 2, static_cast<Symbol>(slot % 2));
    index = index * k + digit_of(e, n);
  }
  return index;
}

OracleMachineTable oracle_machine_at_index(int order, int n,
                                           const BigInt& index) {
  if (index < 0 || index >= oracle_space_size(order, n))
    fail("table index out of range");
  const int k = 1 + 16 * n + order * n;
  OracleMachineTable m(n, order);
  BigInt rest = index;
  for (int slot = 4 * n - 1; slot >= 0; --slot) {
    int digit = (rest % k).convert_to<int>();
    rest /= k;
    m.set_entry(slot / 4, static_cast<Symbol>((slot % 4) / 2),
                static_cast<Symbol>(slot % 2), oracle_entry_of(digit, n));
  }
  return m;
}

BigInt oracle_machine_index(const OracleMachineTable& m) {
  const int n = m.state_count();
  const int k = 1 + 16 * n + m.order() * n;
  BigInt index = 0;
  for (int slot = 0; slot < 4 * n; ++slot) {
    const OracleEntry& e = m.entry(slot / 4, static_cast<Symbol>((slot % 4) / 2),
                                   static_cast<Symbol>(slot % 2));
    index = index * k + oracle_digit_of(e, n);
  }
  return index;
}

RawEnumerator::RawEnumerator(int n, BigInt start)
    : n_(n), cursor_(std::move(start)), size_(space_size(n)) {
  if (cursor_ < 0 || cursor_ > size_) fail("enumeration cursor out of range");
}

std::optional<MachineTable> RawEnumerator::next() {
  if (done()) return std::nullopt;
  MachineTable m = machine_at_index(n_, cursor_);
  ++cursor_;
  return m;
}

OracleEnumerator::OracleEnumerator(int order, int n, BigInt start,
                                   std::optional<BigInt> limit)
    : order_(order), n_(n), cursor_(std::move(start)) {
  BigInt size = oracle_space_size(order, n);
  if (cursor_ < 0 || cursor_ > size) fail("enumeration cursor out of range");
  stop_ = size;
  if (limit) {
    if (*limit < 0) fail("enumeration limit must not be negative");
    stop_ = std::min(stop_, BigInt(cursor_ + *limit));
  }
}

std::optional<OracleMachineTable> OracleEnumerator::next() {
  if (done()) return std::nullopt;
  OracleMachineTable m = oracle_machine_at_index(order_, n_, cursor_);
  ++cursor_;
  return m;
}

TnfEnumerator::TnfEnumerator(int n, std::string_view input,
                             std::uint64_t sim_budget)
    : n_(n), input_(input), budget_(sim_budget) {
  check_states(n);
  if (budget_ < 1) fail("sim budget must be at least 1");
  for (char ch : input_)
    if (ch != '0' && ch != '1') fail("input must be a binary string");
  stack_.push_back(Node{MachineTable(n), initial_configuration(input_)});
}

std::optional<MachineTable> TnfEnumerator::next() {
  if (stack_.empty()) return std::nullopt;
  Node nd = std::move(stack_.back());
  stack_.pop_back();
  ++emitted_;

  Configuration cur = std::move(nd.at);
  bool hit = false;
  while (cur.steps_taken < budget_) {
    if (!advance(nd.m, cur)) {
      hit = true;
      break;
    }
  }

  if (hit && nd.m.defined_count() + 1 < 2 * n_) {
    const int q = cur.state;
    const Symbol s = cur.tape.read();
    const bool first = nd.m.defined_count() == 0;

    int max_used = 0;
    for (int st = 0; st < n_; ++st)
      for (Symbol r = 0; r < 2; ++r)
        if (const TransitionEntry& e = nd.m.entry(st, r)) {
          max_used = std::max(max_used, st);
          max_used = std::max(max_used, e->next_state);
        }
    const int hi = std::min(max_used + 1, n_ - 1);
    const int lo = first && input_.empty() ? hi : 0;

    std::vector<MoveDir> dirs;
    if (first && input_.size() <= 1)
      dirs = {MoveDir::Right};
    else
      dirs = {MoveDir::Left, MoveDir::Right};

    std::vector<Node> kids;
    for (Symbol w = 0; w < 2; ++w)
      for (MoveDir d : dirs)
        for (int t = lo; t <= hi; ++t) {
          MachineTable child = nd.m;
          child.set_entry(q, s, Transition{t, w, d});
          kids.push_back(Node{std::move(child), cur});
        }
    for (auto it = kids.rbegin(); it != kids.rend(); ++it)
      stack_.push_back(std::move(*it));
  }

  return std::move(nd.m);
}

void TnfEnumerator::skip(std::uint64_t count) {
  while (count-- > 0)
    if (!next()) return;
}

}  // namespace bblab
