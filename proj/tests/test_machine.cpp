#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "bblab/machine.hpp"
#include "support/naive.hpp"

using namespace bblab;

namespace {

// Frozen by the brute-force oracle below: largest halting step count over
// the full 1-state and 2-state spaces on the all-0 tape.
constexpr std::uint64_t kBestSteps1 = 1;
constexpr std::uint64_t kBestSteps2 = 6;
const char* const kChampion2 = "1RB1LB_1LA---";

}  // namespace

TEST_CASE("text form round trips") {
  for (const char* text :
       {"------", "1RA---", "1RB1LB_1LA---", "0RB---_0LA---",
        "1RB1RB_1LB0RB", "1LC---_0RA1RC_1RB0LA"}) {
    MachineTable m = parse_machine(text);
    CHECK(format_machine(m) == text);
  }
}

TEST_CASE("parse rejects malformed text") {
  CHECK_THROWS_AS(parse_machine("1RZ---"), std::invalid_argument);
  CHECK_THROWS_AS(parse_machine("1RB1LB"), std::invalid_argument);
  CHECK_THROWS_AS(parse_machine("1R----"), std::invalid_argument);
  CHECK_THROWS_AS(parse_machine("2RA---"), std::invalid_argument);
  CHECK_THROWS_AS(parse_machine("1XA---"), std::invalid_argument);
  CHECK_THROWS_AS(parse_machine("1RA--"), std::invalid_argument);
  CHECK_THROWS_AS(parse_machine(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_machine("1RA---_"), std::invalid_argument);
}

TEST_CASE("initial configuration and input validation") {
  Configuration c = initial_configuration("");
  CHECK(c.state == 0);
  CHECK(c.tape.head() == 0);
  CHECK(c.tape.window_string() == "0");

  Configuration d = initial_configuration("101");
  CHECK(d.tape.read() == 1);
  CHECK(d.tape.window_string() == "101");
  CHECK(d.tape.min_visited() == 0);
  CHECK(d.tape.max_visited() == 2);

  CHECK_THROWS_AS(initial_configuration("102"), std::invalid_argument);
  MachineTable m = parse_machine("1RA---");
  CHECK_THROWS_AS(run(m, "abc", 10), std::invalid_argument);
  CHECK_THROWS_AS(run(m, "", 0), std::invalid_argument);
}

TEST_CASE("halting on an undefined entry counts as the final step") {
  MachineTable empty = parse_machine("------");
  Configuration c = initial_configuration("");
  StepOutcome s = step(empty, c);
  CHECK(s.halted);
  CHECK(s.steps == 1);

  RunOutcome o = run(empty, "", 1);
  CHECK(o.kind == RunOutcome::Kind::Halted);
  CHECK(o.steps == 1);
}

TEST_CASE("step applies write, move and state change") {
  MachineTable m = parse_machine("1RA---");
  Configuration c = initial_configuration("");
  StepOutcome s = step(m, c);
  REQUIRE(!s.halted);
  CHECK(s.next.state == 0);
  CHECK(s.next.tape.head() == 1);
  CHECK(s.next.tape.at(0) == 1);
  CHECK(s.next.steps_taken == 1);
  CHECK(s.next.tape.window_string() == "10");
}

TEST_CASE("two-state champion halts in 6 steps with four 1s") {
  MachineTable m = parse_machine(kChampion2);
  Trace trace;
  RunOutcome o = run(m, "", 100, &trace);
  REQUIRE(o.kind == RunOutcome::Kind::Halted);
  CHECK(o.steps == kBestSteps2);
  // Five applied transitions plus the initial configuration.
  REQUIRE(trace.size() == 6);
  const Configuration& last = trace.back();
  CHECK(last.state == 1);
  CHECK(last.tape.head() == -1);
  CHECK(last.tape.read() == 1);
  CHECK(last.tape.window_string() == "1111");
  StepOutcome s = step(m, last);
  CHECK(s.halted);
  CHECK(s.steps == kBestSteps2);
}

TEST_CASE("budget semantics") {
  MachineTable m = parse_machine(kChampion2);
  RunOutcome small = run(m, "", 5);
  CHECK(small.kind == RunOutcome::Kind::Unknown);
  CHECK(small.budget == 5);
  RunOutcome tight = run(m, "", 6);
  CHECK(tight.kind == RunOutcome::Kind::Halted);
  CHECK(tight.steps == 6);
  RunOutcome loose = run(m, "", 100000);
  CHECK(loose.steps == 6);
}

TEST_CASE("trace entries differ by exactly one applied step") {
  MachineTable m = parse_machine(kChampion2);
  Trace trace;
  run(m, "", 100, &trace);
  for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
    StepOutcome s = step(m, trace[i]);
    REQUIRE(!s.halted);
    CHECK(same_configuration(s.next, trace[i + 1]));
    CHECK(trace[i + 1].steps_taken == trace[i].steps_taken + 1);
  }
}

TEST_CASE("runs are deterministic") {
  std::mt19937 rng(20240817);
  std::vector<std::string> space = naive::all_machines(2);
  for (int trial = 0; trial < 50; ++trial) {
    const std::string& text = space[rng() % space.size()];
    MachineTable m = parse_machine(text);
    Trace t1, t2;
    RunOutcome a = run(m, "", 128, &t1);
    RunOutcome b = run(m, "", 128, &t2);
    CHECK(a.kind == b.kind);
    CHECK(a.steps == b.steps);
    REQUIRE(t1.size() == t2.size());
    for (std::size_t i = 0; i < t1.size(); ++i)
      CHECK(same_configuration(t1[i], t2[i]));
  }
}

TEST_CASE("simulator agrees with the reference simulator on T(1)") {
  std::uint64_t best = 0;
  for (const std::string& text : naive::all_machines(1)) {
    naive::Result ref = naive::simulate(text, "", 200);
    RunOutcome o = run(parse_machine(text), "", 200);
    CHECK((o.kind == RunOutcome::Kind::Halted) == ref.halted);
    if (ref.halted) {
      CHECK(o.steps == ref.steps);
      best = std::max(best, ref.steps);
    }
  }
  CHECK(best == kBestSteps1);
}

TEST_CASE("simulator agrees with the reference simulator on T(2)") {
  std::uint64_t best = 0;
  std::vector<std::string> champions;
  for (const std::string& text : naive::all_machines(2)) {
    naive::Result ref = naive::simulate(text, "", 200);
    RunOutcome o = run(parse_machine(text), "", 200);
    CHECK((o.kind == RunOutcome::Kind::Halted) == ref.halted);
    if (ref.halted) {
      CHECK(o.steps == ref.steps);
      if (ref.steps > best) {
        best = ref.steps;
        champions.clear();
      }
      if (ref.steps == best) champions.push_back(text);
    }
  }
  CHECK(best == kBestSteps2);
  bool has_champion = false;
  for (const std::string& c : champions) has_champion |= c == kChampion2;
  CHECK(has_champion);
}

TEST_CASE("tape window bookkeeping") {
  Tape t;
  CHECK(t.min_visited() == 0);
  CHECK(t.max_visited() == 0);
  t.write(1);
  t.move(MoveDir::Left);
  CHECK(t.min_visited() == -1);
  CHECK(t.max_visited() == 0);
  CHECK(t.window_string() == "01");
  t.move(MoveDir::Right);
  t.move(MoveDir::Right);
  CHECK(t.window_string() == "010");
  CHECK(t.at(5) == 0);

  Tape a, b;
  a.write(1);
  b.write(1);
  CHECK(a.same_content(b));
  b.move(MoveDir::Right);
  CHECK(a.same_content(b));  // moving writes nothing
  b.write(1);
  CHECK(!a.same_content(b));
}

TEST_CASE("replace_window anchors at the old left edge") {
  Tape t;
  t.write(1);
  t.move(MoveDir::Left);  // window now [-1, 0] = "01"
  t.replace_window("110");
  CHECK(t.min_visited() == -1);
  CHECK(t.max_visited() == 1);
  CHECK(t.head() == -1);
  CHECK(t.window_string() == "110");
  CHECK(t.at(2) == 0);

  // Shrinking replacement clears the stale cells.
  Tape u;
  u.write(1);
  u.move(MoveDir::Right);
  u.write(1);
  u.move(MoveDir::Right);  // window [0, 2]
  u.replace_window("1");
  CHECK(u.window_string() == "1");
  CHECK(u.at(1) == 0);
  CHECK(u.at(2) == 0);
}
