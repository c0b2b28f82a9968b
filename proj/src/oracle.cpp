#include "bblab/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace bblab {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument(what);
}

std::size_t slot_of(int state, Symbol work, Symbol oracle) {
  return 4 * static_cast<std::size_t>(state) + 2 * (work ? 1 : 0) +
         (oracle ? 1 : 0);
}

}  // namespace

std::string encode_nat(std::uint64_t v) {
  if (v == 0) return "0";
  std::string out;
  while (v) {
    out += static_cast<char>('0' + (v & 1));
    v >>= 1;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::uint64_t decode_nat(std::string_view numeral) {
  if (numeral.empty()) fail("empty numeral");
  if (numeral.size() > 1 && numeral[0] == '0')
    fail("numeral has a leading zero: " + std::string(numeral));
  if (numeral.size() > 64) fail("numeral too wide");
  std::uint64_t v = 0;
  for (char c : numeral) {
    if (c != '0' && c != '1') fail("numeral must be binary");
    v = (v << 1) | static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

OracleMachineTable::OracleMachineTable(int states, int order)
    : states_(states), order_(order) {
  if (states < 1 || states > 26) fail("state count must be in 1..26");
  if (order < 1 || order > 9) fail("oracle order must be in 1..9");
  entries_.resize(4 * static_cast<std::size_t>(states));
}

int OracleMachineTable::defined_count() const {
  int k = 0;
  for (const auto& e : entries_)
    if (e.kind != OracleEntry::Kind::Undefined) ++k;
  return k;
}

const OracleEntry& OracleMachineTable::entry(int state, Symbol work_read,
                                             Symbol oracle_read) const {
  return entries_[slot_of(state, work_read, oracle_read)];
}

void OracleMachineTable::set_entry(int state, Symbol work_read,
                                   Symbol oracle_read, OracleEntry e) {
  if (e.kind != OracleEntry::Kind::Undefined &&
      (e.next_state < 0 || e.next_state >= states_))
    fail("entry targets a state outside the table");
  if (e.kind == OracleEntry::Kind::Inquire &&
      (e.oracle_index < 1 || e.oracle_index > order_))
    fail("inquire index outside 1..order");
  entries_[slot_of(state, work_read, oracle_read)] = e;
}

OracleMachineTable parse_oracle_machine(std::string_view text, int order) {
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
  OracleMachineTable m(n, order);
  for (int q = 0; q < n; ++q) {
    std::string_view g = groups[q];
    std::size_t pos = 0;
    for (int slot = 0; slot < 4; ++slot) {
      if (pos >= g.size()) fail("state group ends early");
      OracleEntry e;
      if (g[pos] == '-') {
        if (g.substr(pos, 5) != "-----") fail("bad undefined entry");
        pos += 5;
      } else if (g[pos] == '?') {
        std::size_t gt = g.find('>', pos);
        if (gt == std::string_view::npos || gt == pos + 1)
          fail("bad inquire entry");
        int idx = 0;
        for (std::size_t i = pos + 1; i < gt; ++i) {
          if (g[i] < '0' || g[i] > '9') fail("bad inquire index");
          idx = idx * 10 + (g[i] - '0');
        }
        if (gt + 1 >= g.size()) fail("inquire entry ends early");
        char st = g[gt + 1];
        if (st < 'A' || st > 'Z') fail("bad state letter in inquire entry");
        e.kind = OracleEntry::Kind::Inquire;
        e.oracle_index = idx;
        e.next_state = st - 'A';
        pos = gt + 2;
      } else {
        std::string_view s = g.substr(pos, 5);
        if (s.size() != 5) fail("move entry ends early");
        auto digit = [&](char c) -> Symbol {
          if (c != '0' && c != '1') fail("bad write symbol");
          return c == '1';
        };
        auto dir = [&](char c) -> MoveDir {
          if (c != 'L' && c != 'R') fail("bad move letter");
          return c == 'R' ? MoveDir::Right : MoveDir::Left;
        };
        if (s[4] < 'A' || s[4] > 'Z') fail("bad state letter in move entry");
        e.kind = OracleEntry::Kind::Move;
        e.work_write = digit(s[0]);
        e.work_move = dir(s[1]);
        e.oracle_write = digit(s[2]);
        e.oracle_move = dir(s[3]);
        e.next_state = s[4] - 'A';
        pos += 5;
      }
      if (e.kind != OracleEntry::Kind::Undefined && e.next_state >= n)
        fail("entry targets a missing state");
      Symbol work = slot >= 2;
      Symbol orac = slot & 1;
      m.set_entry(q, work, orac, e);
    }
    if (pos != g.size()) fail("trailing characters in state group");
  }
  return m;
}

std::string format_oracle_machine(const OracleMachineTable& m) {
  std::string out;
  for (int q = 0; q < m.state_count(); ++q) {
    if (q) out += '_';
    for (int slot = 0; slot < 4; ++slot) {
      const OracleEntry& e = m.entry(q, slot >= 2, slot & 1);
      switch (e.kind) {
        case OracleEntry::Kind::Undefined:
          out += "-----";
          break;
        case OracleEntry::Kind::Move:
          out += e.work_write ? '1' : '0';
          out += e.work_move == MoveDir::Right ? 'R' : 'L';
          out += e.oracle_write ? '1' : '0';
          out += e.oracle_move == MoveDir::Right ? 'R' : 'L';
          out += static_cast<char>('A' + e.next_state);
          break;
        case OracleEntry::Kind::Inquire:
          out += '?';
          out += std::to_string(e.oracle_index);
          out += '>';
          out += static_cast<char>('A' + e.next_state);
          break;
      }
    }
  }
  return out;
}

int infer_oracle_order(std::string_view text) {
  int best = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '?') continue;
    int idx = 0;
    std::size_t j = i + 1;
    while (j < text.size() && text[j] >= '0' && text[j] <= '9')
      idx = idx * 10 + (text[j++] - '0');
    best = std::max(best, idx);
  }
  return best;
}

OracleTable::OracleTable(int index, std::string provenance)
    : index_(index), provenance_(std::move(provenance)) {
  if (index < 1) fail("oracle index must be positive");
}

void OracleTable::set(const std::string& alpha, const std::string& value) {
  if (alpha.empty() || value.empty()) fail("oracle entries must be nonempty");
  for (char c : alpha + value)
    if (c != '0' && c != '1') fail("oracle entries must be binary strings");
  map_[alpha] = value;
}

std::optional<std::string> OracleTable::lookup(
    const std::string& alpha) const {
  auto it = map_.find(alpha);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

std::string OracleTable::serialize() const {
  std::string out = "oracle " + std::to_string(index_) + "\n";
  for (const auto& [alpha, value] : map_) out += alpha + "\t" + value + "\n";
  return out;
}

OracleTable OracleTable::parse(std::string_view text) {
  std::size_t eol = text.find('\n');
  std::string_view header = text.substr(0, eol);
  if (header.substr(0, 7) != "oracle ") fail("missing oracle header");
  int idx = 0;
  for (char c : header.substr(7)) {
    if (c < '0' || c > '9') fail("bad oracle index in header");
    idx = idx * 10 + (c - '0');
  }
  OracleTable t(idx);
  std::size_t pos = eol == std::string_view::npos ? text.size() : eol + 1;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) fail("oracle line missing tab");
    t.set(std::string(line.substr(0, tab)), std::string(line.substr(tab + 1)));
  }
  return t;
}

bool same_dual_configuration(const DualConfiguration& a,
                             const DualConfiguration& b) {
  return a.state == b.state && a.work.head() == b.work.head() &&
         a.oracle.head() == b.oracle.head() && a.work.same_content(b.work) &&
         a.oracle.same_content(b.oracle);
}

DualConfiguration initial_dual_configuration(std::string_view input) {
  DualConfiguration c;
  c.work = Tape(input);
  return c;
}

OracleStepOutcome oracle_step(const OracleMachineTable& m,
                              const DualConfiguration& c,
                              const OracleSet& oracles) {
  if (static_cast<int>(oracles.size()) < m.order())
    fail("oracle set must cover indexes 1..order");
  OracleStepOutcome out;
  const OracleEntry& e = m.entry(c.state, c.work.read(), c.oracle.read());
  switch (e.kind) {
    case OracleEntry::Kind::Undefined:
      out.kind = OracleStepOutcome::Kind::Halted;
      out.steps = c.steps_taken + 1;
      return out;
    case OracleEntry::Kind::Move:
      out.kind = OracleStepOutcome::Kind::Applied;
      out.next = c;
      out.next.work.write(e.work_write);
      out.next.work.move(e.work_move);
      out.next.oracle.write(e.oracle_write);
      out.next.oracle.move(e.oracle_move);
      out.next.state = e.next_state;
      out.next.steps_taken = c.steps_taken + 1;
      return out;
    case OracleEntry::Kind::Inquire: {
      std::string alpha = c.oracle.window_string();
      std::optional<std::string> answer =
          oracles[static_cast<std::size_t>(e.oracle_index) - 1].lookup(alpha);
      if (!answer) {
        out.kind = OracleStepOutcome::Kind::Unresolved;
        out.oracle_index = e.oracle_index;
        out.query = std::move(alpha);
        return out;
      }
      out.kind = OracleStepOutcome::Kind::Applied;
      out.next = c;
      out.next.oracle.replace_window(*answer);
      out.next.state = e.next_state;
      out.next.steps_taken = c.steps_taken + 1;
      return out;
    }
  }
  fail("unreachable oracle entry kind");
}

OracleRunOutcome OracleRunOutcome::halted(std::uint64_t steps) {
  OracleRunOutcome o;
  o.kind = Kind::Halted;
  o.steps = steps;
  return o;
}

OracleRunOutcome OracleRunOutcome::unknown(std::uint64_t budget) {
  OracleRunOutcome o;
  o.kind = Kind::Unknown;
  o.budget = budget;
  return o;
}

OracleRunOutcome OracleRunOutcome::unresolved(std::uint64_t steps_taken,
                                              int index, std::string query) {
  OracleRunOutcome o;
  o.kind = Kind::Unresolved;
  o.steps_taken_at_stop = steps_taken;
  o.oracle_index = index;
  o.query = std::move(query);
  return o;
}

OracleRunOutcome oracle_run(const OracleMachineTable& m,
                            std::string_view input, std::uint64_t budget,
                            const OracleSet& oracles, DualTrace* trace) {
  if (budget < 1) fail("run budget must be at least 1");
  DualConfiguration c = initial_dual_configuration(input);
  if (trace) {
    trace->clear();
    trace->push_back(c);
  }
  for (std::uint64_t i = 1; i <= budget; ++i) {
    OracleStepOutcome s = oracle_step(m, c, oracles);
    switch (s.kind) {
      case OracleStepOutcome::Kind::Halted:
        return OracleRunOutcome::halted(s.steps);
      case OracleStepOutcome::Kind::Unresolved:
        return OracleRunOutcome::unresolved(c.steps_taken, s.oracle_index,
                                            std::move(s.query));
      case OracleStepOutcome::Kind::Applied:
        c = std::move(s.next);
        if (trace) trace->push_back(c);
        break;
    }
  }
  return OracleRunOutcome::unknown(budget);
}

OracleTable build_bb_oracle(int order_k, const std::vector<BBValue>& values,
                            int max_n, std::string provenance) {
  if (order_k < 0) fail("order must be nonnegative");
  if (max_n < 0) fail("max_n must be nonnegative");
  OracleTable t(order_k + 1, std::move(provenance));
  for (int n = 1; n <= max_n; ++n) {
    const BBValue* found = nullptr;
    for (const BBValue& v : values)
      if (v.n == n) found = &v;
    if (!found)
      fail("no value supplied for n=" + std::to_string(n));
    if (!found->exact)
      fail("refusing to build an oracle from a non-exact value at n=" +
           std::to_string(n));
    t.set(encode_nat(static_cast<std::uint64_t>(n)),
          encode_nat(found->value));
  }
  return t;
}

}  // namespace bblab
