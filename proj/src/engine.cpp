#include <bblab/engine.hpp>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <bblab/deciders.hpp>
#include <bblab/enumerate.hpp>
#include <bblab/machine.hpp>
#include <bblab/oracle.hpp>
#include <bblab/rewrite.hpp>
#include <bblab/store.hpp>

namespace bblab {

namespace {

// Records are appended (and checkpoints cut) in fixed-size chunks so a
// resumed campaign replays the same boundaries regardless of worker count.
constexpr std::size_t kChunk = 1024;

void require_binary(std::string_view s) {
  for (char c : s)
    if (c != '0' && c != '1')
      throw std::invalid_argument("input must be a string over {0,1}");
}

// Order-sensitive reduction: positions are 1-based enumeration order, so a
// replayed store and a live sweep fold identically.
void reduce(BBResult& r, std::uint64_t position, const std::string& machine,
            StoreRecord::Status status, std::uint64_t steps) {
  switch (status) {
    case StoreRecord::Status::Halt:
      ++r.halted;
      if (steps > r.value ||
          (steps == r.value && (r.champion.empty() || machine < r.champion))) {
        r.value = steps;
        r.champion = machine;
        r.champion_at = position;
      }
      break;
    case StoreRecord::Status::NonHalt:
      break;
    case StoreRecord::Status::Unknown:
      ++r.unknown;
      break;
    case StoreRecord::Status::Unresolved:
      ++r.unresolved;
      break;
  }
}

StoreRecord to_record(const std::string& key, const MachineTable& m,
                      const Classification& c) {
  StoreRecord rec;
  rec.key = key;
  rec.machine = format_machine(m);
  switch (c.outcome.kind) {
    case RunOutcome::Kind::Halted:
      rec.status = StoreRecord::Status::Halt;
      rec.steps = c.outcome.steps;
      rec.stage = c.stage;
      rec.blob = "-";
      break;
    case RunOutcome::Kind::NonHaltingProven:
      rec.status = StoreRecord::Status::NonHalt;
      rec.steps = 0;
      rec.stage = c.stage;
      rec.blob = format_proof(*c.outcome.proof);
      break;
    case RunOutcome::Kind::Unknown:
      rec.status = StoreRecord::Status::Unknown;
      rec.steps = 0;
      rec.stage = "none";
      rec.blob = "-";
      break;
  }
  return rec;
}

void classify_chunk(const std::vector<MachineTable>& chunk, std::string_view s,
                    const PipelineBudgets& budgets, int workers,
                    std::vector<Classification>& out) {
  out.resize(chunk.size());
  if (workers <= 1 || chunk.size() < 2) {
    for (std::size_t i = 0; i < chunk.size(); ++i)
      out[i] = classify(chunk[i], s, budgets);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < chunk.size();)
      out[i] = classify(chunk[i], s, budgets);
  };
  std::size_t count =
      std::min<std::size_t>(static_cast<std::size_t>(workers), chunk.size());
  std::vector<std::thread> pool;
  pool.reserve(count);
  for (std::size_t t = 0; t < count; ++t) pool.emplace_back(drain);
  for (auto& th : pool) th.join();
}

Campaign snapshot(const std::string& key, std::uint64_t cursor,
                  const BBResult& r) {
  return Campaign{key, cursor, r.value,
                  r.champion.empty() ? "-" : r.champion};
}

// The tree-normal-form sweep prunes mirrors and unreachable fill; it must
// agree with the raw space on the value. Cheap enough to re-check every
// time for the two smallest spaces.
void raw_cross_check(std::string_view s, int n, const PipelineBudgets& budgets,
                     const BBResult& r) {
  std::uint64_t best = 0;
  std::uint64_t unknown = 0;
  RawEnumerator walk(n);
  while (auto m = walk.next()) {
    Classification c = classify(*m, s, budgets);
    if (c.outcome.kind == RunOutcome::Kind::Halted)
      best = std::max(best, c.outcome.steps);
    else if (c.outcome.kind == RunOutcome::Kind::Unknown)
      ++unknown;
  }
  if (best != r.value || (unknown == 0) != r.exact)
    throw std::logic_error(
        "tree and raw enumeration disagree on the " + std::to_string(n) +
        "-state value: raw " + std::to_string(best) + " (unknown " +
        std::to_string(unknown) + "), tree " + std::to_string(r.value));
}

}  // namespace

BBResult compute_bb(std::string_view s, int n, const PipelineBudgets& budgets,
                    ResultsStore* store, int workers) {
  if (n < 1) throw std::invalid_argument("state count must be at least 1");
  if (workers < 1)
    throw std::invalid_argument("worker count must be at least 1");
  require_binary(s);

  const std::string key = query_key(s, 0, n);
  BBResult r;
  std::uint64_t cursor = 0;
  if (store) {
    for (const auto& rec : store->records()) {
      if (rec.key != key) continue;
      ++cursor;
      reduce(r, cursor, rec.machine, rec.status, rec.steps);
    }
  }

  TnfEnumerator walk(n, s, budgets.sim);
  if (cursor > 0) walk.skip(cursor);

  std::vector<MachineTable> chunk;
  std::vector<Classification> settled;
  chunk.reserve(kChunk);
  bool done = false;
  while (!done) {
    chunk.clear();
    while (chunk.size() < kChunk) {
      auto m = walk.next();
      if (!m) {
        done = true;
        break;
      }
      chunk.push_back(std::move(*m));
    }
    if (chunk.empty()) break;
    classify_chunk(chunk, s, budgets, workers, settled);
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      ++cursor;
      StoreRecord rec = to_record(key, chunk[i], settled[i]);
      if (store) store->append(rec);
      reduce(r, cursor, rec.machine, rec.status, rec.steps);
    }
    if (store) store->checkpoint(snapshot(key, cursor, r));
  }

  r.classified = cursor;
  r.exact = r.unknown == 0 && r.unresolved == 0;
  if (store) store->checkpoint(snapshot(key, cursor, r));
  if (n <= 2) raw_cross_check(s, n, budgets, r);
  return r;
}

ChampionRecord certify_champion(std::string_view s, const std::string& machine,
                                std::uint64_t steps, std::uint64_t found_at) {
  ChampionRecord rec;
  rec.machine = machine;
  rec.steps = steps;
  rec.found_at = found_at;
  MachineTable m = parse_machine(machine);
  rec.key = query_key(s, 0, m.state_count());
  DerivationCertificate d;
  try {
    d = trace_certificate(m, s, steps);
  } catch (const std::exception&) {
    return rec;  // did not halt within its claimed steps: not verified
  }
  rec.certificate = serialize_certificate(d);
  RuleSet rules = compile_rules(m);
  rec.verified = d.steps.size() == steps &&
                 static_cast<bool>(
                     check_deriv(rules, d, std::string(s), d.output));
  return rec;
}

OracleSet bb_oracle_set(int depth, const PipelineBudgets& budgets) {
  if (depth < 0)
    throw std::invalid_argument("oracle depth must not be negative");
  if (depth > 3)
    throw std::invalid_argument(
        "the four-state value is not settled exactly here; refusing to back "
        "an oracle with a lower bound");
  if (depth == 0)
    return {build_bb_oracle(0, {}, 0,
                            "empty truncation: every inquiry unresolved")};
  std::vector<BBValue> values;
  for (int k = 1; k <= depth; ++k) {
    BBResult r = compute_bb("", k, budgets);
    if (!r.exact)
      throw std::runtime_error("the " + std::to_string(k) +
                               "-state value did not come out exact under "
                               "these budgets; cannot build the table");
    values.push_back({k, r.value, true});
  }
  return {build_bb_oracle(0, values, depth,
                          "exhaustive order-0 campaigns on empty input, 1.." +
                              std::to_string(depth) + " states")};
}

BBResult compute_bb_higher(std::string_view s, int order, int n,
                           int oracle_depth, const PipelineBudgets& budgets,
                           const std::vector<std::string>& seeds,
                           std::uint64_t sweep_limit) {
  if (order != 1)
    throw std::invalid_argument(
        "only order-1 campaigns are supported: an order-k campaign needs "
        "exact order-(k-1) values, which stop at the table horizon");
  if (n < 1) throw std::invalid_argument("state count must be at least 1");
  require_binary(s);

  OracleSet oracles = bb_oracle_set(oracle_depth, budgets);
  BBResult r;
  r.oracle_provenance = oracles.front().provenance();

  const BigInt space = oracle_space_size(order, n);
  const bool full = BigInt(sweep_limit) >= space;
  std::uint64_t position = 0;
  auto fold = [&](const OracleMachineTable& m) {
    ++position;
    OracleRunOutcome out = oracle_run(m, s, budgets.sim, oracles);
    switch (out.kind) {
      case OracleRunOutcome::Kind::Halted:
        reduce(r, position, format_oracle_machine(m), StoreRecord::Status::Halt,
               out.steps);
        break;
      case OracleRunOutcome::Kind::Unknown:
        reduce(r, position, format_oracle_machine(m),
               StoreRecord::Status::Unknown, 0);
        break;
      case OracleRunOutcome::Kind::Unresolved:
        reduce(r, position, format_oracle_machine(m),
               StoreRecord::Status::Unresolved, 0);
        break;
    }
  };

  OracleEnumerator walk(order, n, 0, BigInt(sweep_limit));
  while (auto m = walk.next()) fold(*m);
  for (const auto& text : seeds) {
    OracleMachineTable m = parse_oracle_machine(text, order);
    if (m.state_count() != n)
      throw std::invalid_argument("seed \"" + text + "\" has " +
                                  std::to_string(m.state_count()) +
                                  " states, campaign wants " +
                                  std::to_string(n));
    fold(m);
  }

  r.classified = position;
  r.exact = full && r.unknown == 0 && r.unresolved == 0;
  return r;
}

RatioReport ratio_report(std::string_view s, std::string_view t, int n_lo,
                         int n_hi, const PipelineBudgets& budgets) {
  RatioReport rep;
  if (n_lo > n_hi) return rep;
  if (n_lo < 1) throw std::invalid_argument("state counts start at 1");

  std::map<std::pair<std::string, int>, std::uint64_t> memo;
  auto value = [&](std::string_view input, int n) {
    auto key = std::make_pair(std::string(input), n);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    BBResult r = compute_bb(input, n, budgets);
    if (!r.exact)
      throw std::runtime_error(
          "value for \"" + key.first + "\" at " + std::to_string(n) +
          " states is not exact under these budgets; a ratio over a lower "
          "bound would be noise");
    memo.emplace(key, r.value);
    return r.value;
  };

  for (int n = n_lo; n <= n_hi; ++n) {
    const std::uint64_t a = value(s, n);
    const std::uint64_t b = value(s, n + 1);
    auto push = [&](const char* f, double f_of_a) {
      rep.growth.push_back({n, f, a, b, f_of_a,
                            f_of_a / static_cast<double>(b), "EVIDENCE"});
    };
    push("id", static_cast<double>(a));
    push("square", static_cast<double>(a) * static_cast<double>(a));
    push("pow2", std::pow(2.0, static_cast<double>(a)));
    const std::uint64_t c = value(t, n);
    rep.cross.push_back({n, "cross", a, c, static_cast<double>(a),
                         static_cast<double>(a) / static_cast<double>(c),
                         "EVIDENCE"});
  }
  return rep;
}

}  // namespace bblab
