// Abstract-run closure deciders: explore every tape shape reachable in a
// finite over-approximation of the configuration space and report success
// only when the whole closed set avoids undefined entries.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bblab/deciders.hpp"
#include "bblab/machine.hpp"

namespace bblab {

namespace {

constexpr int kSideRunCap = 64;  // runs per side before a run closure quits

// ---- run closure: sides as runs of repeated block-words ----
//
// A side is a list of runs nearest-the-head first; each run repeats a word
// of at most `block` cells. count >= 1 is exact, count == 0 means "at least
// `threshold` repeats". The blank sea beyond the last run is implicit, so
// all-zero trailing runs are dropped. Ragged sub-block fragments only ever
// sit nearest the head; folding carves full blocks from the fragment's far
// end so alignment against the compressed region never drifts.

struct Run {
  std::string word;
  int count;  // 0 = threshold or more
};
using Side = std::vector<Run>;

struct RunAbs {
  int state;
  Symbol center;
  Side left, right;
};

std::string run_key(const RunAbs& a) {
  std::string k;
  k += char('A' + a.state);
  k += char('0' + a.center);
  for (int s = 0; s < 2; ++s) {
    k += '|';
    for (const Run& r : s ? a.right : a.left) {
      k += r.word;
      k += char('a' + r.count);
    }
  }
  return k;
}

bool all_zero(const std::string& w) {
  return w.find('1') == std::string::npos;
}

void run_canon(Side& s, int block, int threshold) {
  std::string buf;
  std::size_t i = 0;
  while (i < s.size() && s[i].count == 1 && (int)s[i].word.size() <= block)
    buf += s[i++].word;
  Side rest(s.begin() + i, s.end());
  Side carved;
  while ((int)buf.size() >= block) {
    carved.insert(carved.begin(), Run{buf.substr(buf.size() - block), 1});
    buf.resize(buf.size() - block);
  }
  Side out;
  if (!buf.empty()) out.push_back(Run{buf, 1});
  for (Run& r : carved) out.push_back(std::move(r));
  for (Run& r : rest) out.push_back(std::move(r));
  Side folded;
  for (Run& r : out) {
    if (!folded.empty() && folded.back().word == r.word &&
        (int)r.word.size() == block) {
      int& c = folded.back().count;
      if (c == 0 || r.count == 0) {
        c = 0;
        continue;
      }
      c += r.count;
      if (c >= threshold) c = 0;
      continue;
    }
    folded.push_back(std::move(r));
  }
  while (!folded.empty() && all_zero(folded.back().word)) folded.pop_back();
  s = std::move(folded);
}

void run_push(Side& s, Symbol w, int block, int threshold) {
  s.insert(s.begin(), Run{std::string(1, char('0' + w)), 1});
  run_canon(s, block, threshold);
}

// Every way the near cell can read, with the side that remains. Popping
// from an "at least threshold" run branches into "exactly threshold" and
// "more than threshold".
std::vector<std::pair<Symbol, Side>> run_pop(const Side& s, int block,
                                             int threshold) {
  std::vector<std::pair<Symbol, Side>> out;
  if (s.empty()) {
    out.push_back({0, s});
    return out;
  }
  const Run& r0 = s.front();
  if (r0.count == 1) {
    Symbol sym = r0.word[0] == '1';
    Side rest = s;
    if (r0.word.size() > 1)
      rest.front().word.erase(0, 1);
    else
      rest.erase(rest.begin());
    run_canon(rest, block, threshold);
    out.push_back({sym, std::move(rest)});
    return out;
  }
  std::vector<Side> variants;
  if (r0.count == 0) {
    Side a = s;
    a.front().count = threshold - 1;
    a.insert(a.begin(), Run{r0.word, 1});
    variants.push_back(std::move(a));
    Side b = s;
    b.insert(b.begin(), Run{r0.word, 1});
    variants.push_back(std::move(b));
  } else {
    Side a = s;
    if (--a.front().count == 0) a.erase(a.begin());
    a.insert(a.begin(), Run{r0.word, 1});
    variants.push_back(std::move(a));
  }
  for (Side& v : variants) {
    Symbol sym = v.front().word[0] == '1';
    if (v.front().word.size() > 1)
      v.front().word.erase(0, 1);
    else
      v.erase(v.begin());
    run_canon(v, block, threshold);
    out.push_back({sym, std::move(v)});
  }
  return out;
}

// ---- gram closure: origin-anchored block recoding + window sets ----
//
// The tape is cut into `block`-cell cells anchored at the origin; a macro
// state couples the machine state with the side the head entered its cell
// from. While the head stays inside one cell the machine is deterministic
// and finite, so the inner run either exits, halts, or provably loops.

struct MacroStep {
  enum Kind { Exit, Halt, Loop } kind;
  int state;
  int cell;  // rewritten cell value
  bool exit_right;
};

struct Macro {
  const MachineTable* m;
  int block;
  std::map<int, MacroStep> memo;

  // macro_state = machine state * 2 + (entered from the right ? 1 : 0)
  MacroStep step(int macro_state, int cell) {
    const int key = (macro_state << (block + 1)) | cell;
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    int q = macro_state / 2;
    std::vector<Symbol> cells(block);
    for (int i = 0; i < block; ++i)
      cells[i] = (cell >> (block - 1 - i)) & 1;
    int pos = macro_state % 2 ? block - 1 : 0;
    std::set<int> inner_seen;
    MacroStep out{};
    for (;;) {
      int cfg = (q * block + pos) << block;
      for (int i = 0; i < block; ++i) cfg |= cells[i] << i;
      if (!inner_seen.insert(cfg).second) {
        out = MacroStep{MacroStep::Loop, 0, 0, false};
        break;
      }
      const TransitionEntry& e = m->entry(q, cells[pos]);
      if (!e) {
        out = MacroStep{MacroStep::Halt, 0, 0, false};
        break;
      }
      cells[pos] = e->write;
      q = e->next_state;
      pos += e->move == MoveDir::Right ? 1 : -1;
      if (pos < 0 || pos >= block) {
        int nc = 0;
        for (int i = 0; i < block; ++i) nc = nc * 2 + cells[i];
        out = MacroStep{MacroStep::Exit, q, nc, pos >= block};
        break;
      }
    }
    memo[key] = out;
    return out;
  }
};

struct GramAbs {
  int ms;  // macro state
  int center;
  std::string l, r;  // exact near windows, one char per macro cell
};

std::string gram_key(const GramAbs& a) {
  std::string k;
  k += char('A' + a.ms);
  k += char('0' + a.center);
  k += a.l;
  k += '|';
  k += a.r;
  return k;
}

}  // namespace

bool run_closure_holds(const MachineTable& m, std::string_view input,
                       int block, int threshold, std::uint64_t node_cap) {
  if (block < 1 || threshold < 2 || node_cap < 1) return false;
  RunAbs init{0, 0, {}, {}};
  if (!input.empty()) {
    init.center = input[0] == '1';
    for (std::size_t i = 1; i < input.size(); ++i)
      init.right.push_back(Run{std::string(1, input[i]), 1});
    run_canon(init.right, block, threshold);
  }
  std::set<std::string> seen{run_key(init)};
  std::vector<RunAbs> work{init};
  while (!work.empty()) {
    RunAbs a = std::move(work.back());
    work.pop_back();
    const TransitionEntry& e = m.entry(a.state, a.center);
    if (!e) return false;
    const bool right = e->move == MoveDir::Right;
    Side pushed = right ? a.left : a.right;
    run_push(pushed, e->write, block, threshold);
    if ((int)pushed.size() > kSideRunCap) return false;
    for (auto& [sym, rest] : run_pop(right ? a.right : a.left, block,
                                     threshold)) {
      RunAbs nxt{e->next_state, sym, {}, {}};
      nxt.left = right ? pushed : rest;
      nxt.right = right ? std::move(rest) : pushed;
      if ((int)nxt.left.size() > kSideRunCap ||
          (int)nxt.right.size() > kSideRunCap)
        return false;
      if (seen.insert(run_key(nxt)).second) {
        if (seen.size() > node_cap) return false;
        work.push_back(std::move(nxt));
      }
    }
  }
  return true;
}

bool gram_closure_holds(const MachineTable& m, std::string_view input,
                        int block, int window, std::uint64_t node_cap) {
  if (block < 1 || window < 1 || node_cap < 1) return false;
  Macro mac{&m, block, {}};
  const std::string sea(window, '0');

  // Recode the input into macro cells: cell j covers tape cells
  // [j*block, j*block + block), absent cells read 0.
  auto cell_at = [&](std::size_t j) {
    int v = 0;
    for (int i = 0; i < block; ++i) {
      std::size_t pos = j * block + i;
      v = v * 2 + (pos < input.size() && input[pos] == '1');
    }
    return v;
  };
  GramAbs init{0, cell_at(0), sea, ""};
  std::string right_cells;
  for (std::size_t j = 1; j * block < input.size() + block; ++j)
    right_cells += char('0' + cell_at(j));
  right_cells += sea;
  init.r = right_cells.substr(0, window);
  std::set<std::string> lset{sea}, rset{sea};
  for (std::size_t i = 0; i + window <= right_cells.size(); ++i)
    rset.insert(right_cells.substr(i, window));

  std::set<std::string> seen{gram_key(init)};
  std::vector<GramAbs> work{init};
  std::size_t watermark = lset.size() + rset.size();
  while (!work.empty()) {
    GramAbs a = std::move(work.back());
    work.pop_back();
    MacroStep st = mac.step(a.ms, a.center);
    if (st.kind == MacroStep::Halt) return false;
    if (st.kind == MacroStep::Loop) continue;  // branch never leaves its cell
    const char wc = char('0' + st.cell);
    std::string near = wc + (st.exit_right ? a.l : a.r).substr(0, window - 1);
    (st.exit_right ? lset : rset).insert(near);
    const std::string& far = st.exit_right ? a.r : a.l;
    const std::set<std::string>& far_set = st.exit_right ? rset : lset;
    for (int x = 0; x < (1 << block); ++x) {
      std::string probe = far.substr(1) + char('0' + x);
      if (!far_set.count(probe)) continue;
      GramAbs nxt{st.state * 2 + (st.exit_right ? 0 : 1), far[0] - '0', "",
                  ""};
      nxt.l = st.exit_right ? near : probe;
      nxt.r = st.exit_right ? probe : near;
      if (seen.insert(gram_key(nxt)).second) {
        if (seen.size() > node_cap) return false;
        work.push_back(std::move(nxt));
      }
    }
    if (lset.size() + rset.size() != watermark) {
      // Grown sets can unlock reads for shapes already processed; rewalk
      // everything. Sets only grow, so this terminates.
      watermark = lset.size() + rset.size();
      work.clear();
      for (const std::string& k : seen) {
        GramAbs b;
        b.ms = k[0] - 'A';
        b.center = k[1] - '0';
        const auto bar = k.find('|', 2);
        b.l = k.substr(2, bar - 2);
        b.r = k.substr(bar + 1);
        work.push_back(std::move(b));
      }
    }
  }
  return true;
}

namespace {

constexpr int kClosureMaxBlock = 4;
constexpr int kRunMaxThreshold = 4;
constexpr int kGramMaxWindow = 4;

NonHaltProof closure_proof(NonHaltProof::Kind kind, std::uint64_t node_cap,
                           std::uint64_t param, int block,
                           const MachineTable& m, std::string_view input) {
  NonHaltProof p;
  p.kind = kind;
  p.start_step = node_cap;
  p.period = param;
  p.shift = block;
  p.machine = format_machine(m);
  p.input = input;
  return p;
}

}  // namespace

std::optional<NonHaltProof> detect_run_closure(const MachineTable& m,
                                               std::string_view input,
                                               std::uint64_t node_cap) {
  for (int block = 1; block <= kClosureMaxBlock; ++block)
    for (int threshold = 2; threshold <= kRunMaxThreshold; ++threshold)
      if (run_closure_holds(m, input, block, threshold, node_cap))
        return closure_proof(NonHaltProof::Kind::RunClosure, node_cap,
                             threshold, block, m, input);
  return std::nullopt;
}

std::optional<NonHaltProof> detect_gram_closure(const MachineTable& m,
                                                std::string_view input,
                                                std::uint64_t node_cap) {
  for (int block = 1; block <= kClosureMaxBlock; ++block)
    for (int window = 1; window <= kGramMaxWindow; ++window)
      if (gram_closure_holds(m, input, block, window, node_cap))
        return closure_proof(NonHaltProof::Kind::GramClosure, node_cap,
                             window, block, m, input);
  return std::nullopt;
}

}  // namespace bblab
