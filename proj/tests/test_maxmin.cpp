#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "bblab/maxmin.hpp"
#include "support/naive.hpp"

using namespace bblab;

namespace {

const EvalBudget kRoomy{64, 64, 256};

std::uint64_t value_of(const EvalOutcome& o) {
  REQUIRE(o.kind == EvalOutcome::Kind::Value);
  return o.value;
}

// Brute-force halting-step set for every machine of the space on one input.
std::set<std::uint64_t> halt_step_set(int n, const std::string& input) {
  std::set<std::uint64_t> steps;
  for (const std::string& text : naive::all_machines(n)) {
    naive::Result r = naive::simulate(text, input, 100);
    if (r.halted) steps.insert(r.steps);
  }
  return steps;
}

Expr literal(std::uint64_t v) {
  Expr e;
  e.kind = Expr::Kind::Literal;
  e.arity = -1;
  e.literal = v;
  return e;
}

Expr projection(int i, int j) {
  Expr e;
  e.kind = Expr::Kind::Proj;
  e.arity = j;
  e.i = i;
  e.j = j;
  return e;
}

// Random total expression of the requested arity: projections, literals,
// comparisons, and successor compositions. No search operators, so every
// evaluation is a Value.
Expr random_total_expr(int arity, int depth, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coin(0, depth > 0 ? 3 : 1);
  switch (coin(rng)) {
    case 0:
      return projection(
          std::uniform_int_distribution<int>(1, arity)(rng), arity);
    case 1:
      return literal(std::uniform_int_distribution<int>(0, 5)(rng));
    case 2: {
      Expr succ;
      succ.kind = Expr::Kind::Succ;
      succ.arity = 1;
      Expr e;
      e.kind = Expr::Kind::Comp;
      e.arity = arity;
      e.children.push_back(succ);
      e.children.push_back(random_total_expr(arity, depth - 1, rng));
      return e;
    }
    default: {
      Expr e;
      e.kind = Expr::Kind::Builtin;
      e.arity = arity;
      const char* names[] = {"eq", "le", "ge"};
      e.name = names[std::uniform_int_distribution<int>(0, 2)(rng)];
      e.children.push_back(random_total_expr(arity, depth - 1, rng));
      e.children.push_back(random_total_expr(arity, depth - 1, rng));
      return e;
    }
  }
}

}  // namespace

TEST_CASE("expression text round trips") {
  const char* texts[] = {
      "(zero)",
      "(succ)",
      "5",
      "(proj 2 3)",
      "(comp (succ) (zero))",
      "(primrec (proj 1 1) (comp (succ) (proj 2 3)))",
      "(min (ge (proj 1 1) 3))",
      "(max (le (proj 1 1) 4))",
      "(eq (proj 1 2) (proj 2 2))",
      "(step-pred 0 2)",
      "(max (step-pred 0 1))",
      "(comp (le (proj 1 2) (proj 2 2)) (succ) (zero))",
  };
  for (const char* text : texts) {
    Expr e = parse_expr(text);
    CHECK(format_expr(e) == text);
    CHECK(parse_expr(format_expr(e)) == e);
  }

  // Bare atoms are the same functions as their parenthesized forms.
  CHECK(parse_expr("zero") == parse_expr("(zero)"));
  CHECK(parse_expr("succ") == parse_expr("(succ)"));
  CHECK(parse_expr(" (min\n (ge (proj 1 1) 3))\t") ==
        parse_expr("(min (ge (proj 1 1) 3))"));

  CHECK(parse_expr("(comp (succ) (zero))").arity == 1);
  CHECK(parse_expr("(primrec (proj 1 1) (comp (succ) (proj 2 3)))").arity ==
        2);
  CHECK(parse_expr("(min (ge (proj 1 1) 3))").arity == 0);
  CHECK(parse_expr("(step-pred 0 2)").arity == 2);
  CHECK(parse_expr("7").arity == -1);
}

TEST_CASE("malformed expressions are refused with a position") {
  const char* bad[] = {
      "",
      "(min (proj 1 1)",      // unbalanced
      "(proj 2 1)",           // index outside its arguments
      "(proj 0 1)",
      "(comp (succ))",        // no inner functions
      "(comp (succ) (proj 1 2) (proj 2 2))",  // outer arity mismatch
      "(primrec (proj 1 1) (succ))",          // step function shape
      "(primrec 3 4)",        // recursion arity not inferrable
      "(eq (proj 1 1) (proj 1 2))",           // mixed argument counts
      "(min 3)",              // search body without the search variable
      "(frob 1)",
      "(zero) trailing",
      "()",
      ")",
      "99999999999999999999999",
      "(step-pred 1 1)",      // oracle order unsupported
      "(step-pred 0 3)",      // space over the evaluation cap
      "(step-pred 0 0)",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse_expr(text), std::invalid_argument);
    try {
      parse_expr(text);
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("offset") != std::string::npos);
    }
  }
}

TEST_CASE("base functions and composition follow their equations") {
  CHECK(eval(parse_expr("(zero)"), {9}, kRoomy) == EvalOutcome::of(0));
  CHECK(eval(parse_expr("(succ)"), {9}, kRoomy) == EvalOutcome::of(10));
  CHECK(eval(parse_expr("(proj 2 3)"), {4, 5, 6}, kRoomy) ==
        EvalOutcome::of(5));
  CHECK(eval(parse_expr("41"), {1, 2}, kRoomy) == EvalOutcome::of(41));
  CHECK(eval(parse_expr("(comp (succ) (zero))"), {5}, kRoomy) ==
        EvalOutcome::of(1));

  CHECK(eval(parse_expr("(eq (proj 1 2) (proj 2 2))"), {3, 3}, kRoomy) ==
        EvalOutcome::of(1));
  CHECK(eval(parse_expr("(eq (proj 1 2) (proj 2 2))"), {3, 4}, kRoomy) ==
        EvalOutcome::of(0));
  CHECK(eval(parse_expr("(le (proj 1 1) 4)"), {4}, kRoomy) ==
        EvalOutcome::of(1));
  CHECK(eval(parse_expr("(le (proj 1 1) 4)"), {5}, kRoomy) ==
        EvalOutcome::of(0));
  CHECK(eval(parse_expr("(ge (proj 1 1) 4)"), {5}, kRoomy) ==
        EvalOutcome::of(1));

  CHECK_THROWS_AS(eval(parse_expr("(succ)"), {1, 2}, kRoomy),
                  std::invalid_argument);
  CHECK_THROWS_AS(eval(parse_expr("(zero)"), {}, kRoomy),
                  std::invalid_argument);
}

TEST_CASE("primitive recursion satisfies its two equations") {
  Expr add = parse_expr("(primrec (proj 1 1) (comp (succ) (proj 2 3)))");
  CHECK(eval(add, {2, 3}, kRoomy) == EvalOutcome::of(5));
  CHECK(eval(add, {0, 7}, kRoomy) == EvalOutcome::of(7));
  CHECK(eval(add, {19, 4}, kRoomy) == EvalOutcome::of(23));

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::uint64_t> arg(0, 20);
  for (int sample = 0; sample < 60; ++sample) {
    const int j = 1 + sample % 2;
    Expr g = random_total_expr(j, 2, rng);
    Expr h = random_total_expr(j + 2, 2, rng);
    Expr f;
    f.kind = Expr::Kind::PrimRec;
    f.arity = j + 1;
    f.children = {g, h};

    std::vector<std::uint64_t> rest;
    for (int k = 0; k < j; ++k) rest.push_back(arg(rng));

    // f(0, rest) = g(rest)
    std::vector<std::uint64_t> zero_args = {0};
    zero_args.insert(zero_args.end(), rest.begin(), rest.end());
    CHECK(eval(f, zero_args, kRoomy) == eval(g, rest, kRoomy));

    // f(k+1, rest) = h(k, f(k, rest), rest)
    for (std::uint64_t k = 0; k < 9; ++k) {
      std::vector<std::uint64_t> at_k = {k};
      at_k.insert(at_k.end(), rest.begin(), rest.end());
      std::vector<std::uint64_t> at_k1 = {k + 1};
      at_k1.insert(at_k1.end(), rest.begin(), rest.end());
      std::vector<std::uint64_t> h_args = {k,
                                           value_of(eval(f, at_k, kRoomy))};
      h_args.insert(h_args.end(), rest.begin(), rest.end());
      CHECK(eval(f, at_k1, kRoomy) == eval(h, h_args, kRoomy));
    }
  }
}

TEST_CASE("least witness search is minimal") {
  CHECK(eval(parse_expr("(min (ge (proj 1 1) 3))"), {}, kRoomy) ==
        EvalOutcome::of(3));

  for (std::uint64_t c = 0; c <= 10; ++c) {
    for (const char* op : {"ge", "eq"}) {
      Expr p = parse_expr("(" + std::string(op) + " (proj 1 1) " +
                          std::to_string(c) + ")");
      Expr search;
      search.kind = Expr::Kind::Min;
      search.arity = 0;
      search.children = {p};
      EvalOutcome o = eval(search, {}, kRoomy);
      REQUIRE(o == EvalOutcome::of(c));
      // Minimality: the predicate holds at the answer and nowhere below.
      CHECK(value_of(eval(p, {o.value}, kRoomy)) != 0);
      for (std::uint64_t u = 0; u < o.value; ++u)
        CHECK(value_of(eval(p, {u}, kRoomy)) == 0);
    }
  }

  // Out of reach within the horizon: that is a budget story, never a
  // proof of undefinedness.
  EvalOutcome out = eval(parse_expr("(min (ge (proj 1 1) 100))"), {},
                         {10, 10, 64});
  CHECK(out == EvalOutcome::budget_exceeded(10));

  // A predicate that is false everywhere is the other way around.
  CHECK(eval(parse_expr("(min (zero))"), {}, kRoomy) ==
        EvalOutcome::undefined());
  CHECK(eval(parse_expr("(max (zero))"), {}, kRoomy) ==
        EvalOutcome::undefined());
}

TEST_CASE("greatest witness search verifies its window") {
  CHECK(eval(parse_expr("(max (le (proj 1 1) 4))"), {}, {10, 2, 64}) ==
        EvalOutcome::of(4));
  CHECK(eval(parse_expr("(max (le (proj 1 1) 4))"), {}, {10, 0, 64}) ==
        EvalOutcome::of(4));
  CHECK(eval(parse_expr("(max (eq (proj 1 1) 7))"), {}, {20, 5, 64}) ==
        EvalOutcome::of(7));

  // The witness itself fits under the horizon but keeps holding past it:
  // the greatest one found is not maximal, so no value is returned.
  CHECK(eval(parse_expr("(max (le (proj 1 1) 12))"), {}, {5, 20, 64}) ==
        EvalOutcome::budget_exceeded(5));

  // Maximality within the verified window, checked against the predicate.
  for (std::uint64_t c = 0; c <= 8; ++c) {
    Expr p = parse_expr("(le (proj 1 1) " + std::to_string(c) + ")");
    Expr search;
    search.kind = Expr::Kind::Max;
    search.arity = 0;
    search.children = {p};
    const EvalBudget budget{12, 6, 64};
    EvalOutcome o = eval(search, {}, budget);
    REQUIRE(o == EvalOutcome::of(c));
    CHECK(value_of(eval(p, {o.value}, kRoomy)) != 0);
    for (std::uint64_t u = o.value + 1; u <= budget.horizon + budget.verify;
         ++u)
      CHECK(value_of(eval(p, {u}, kRoomy)) == 0);
  }
}

TEST_CASE("budgets only ever unlock answers") {
  std::vector<std::pair<Expr, std::vector<std::uint64_t>>> cases;
  for (std::uint64_t c : {0, 3, 7})
    cases.push_back({parse_expr("(min (ge (proj 1 1) " + std::to_string(c) +
                                "))"),
                     {}});
  for (std::uint64_t c : {2, 5})
    cases.push_back({parse_expr("(max (le (proj 1 1) " + std::to_string(c) +
                                "))"),
                     {}});
  cases.push_back({bb_expression(0, 1), {0}});
  cases.push_back({bb_expression(0, 2), {0}});

  const EvalBudget tight{8, 4, 64};
  for (const auto& [e, args] : cases) {
    EvalOutcome small = eval(e, args, tight);
    if (small.kind != EvalOutcome::Kind::Value) continue;
    CHECK(eval(e, args, {15, 4, 64}) == small);
    CHECK(eval(e, args, {8, 13, 64}) == small);
    CHECK(eval(e, args, {40, 40, 300}) == small);
  }

  // And a budget that was too small flips to the same value, never to a
  // different one.
  EvalOutcome starved = eval(bb_expression(0, 2), {0}, {5, 20, 256});
  CHECK(starved == EvalOutcome::budget_exceeded(5));
  CHECK(eval(bb_expression(0, 2), {0}, {20, 20, 256}) == EvalOutcome::of(6));
}

TEST_CASE("the step predicate matches brute force") {
  for (int n : {1, 2}) {
    for (const std::string& input : {std::string(""), std::string("1")}) {
      const std::set<std::uint64_t> expected = halt_step_set(n, input);
      Expr step = parse_expr("(step-pred 0 " + std::to_string(n) + ")");
      const std::uint64_t code = code_from_input(input);
      for (std::uint64_t t = 0; t <= 12; ++t) {
        CAPTURE(n);
        CAPTURE(input);
        CAPTURE(t);
        CHECK(eval(step, {t, code}, {64, 64, 100}) ==
              EvalOutcome::of(expected.count(t) ? 1 : 0));
      }
    }
  }

  // Below the simulation budget a miss is a definite no even while larger
  // step counts are still unsettled; above it the answer is honest about
  // the budget.
  Expr step2 = parse_expr("(step-pred 0 2)");
  CHECK(eval(step2, {2, 0}, {64, 64, 3}) == EvalOutcome::of(1));
  CHECK(eval(step2, {5, 0}, {64, 64, 3}) ==
        EvalOutcome::budget_exceeded(3));
  CHECK(eval(step2, {5, 0}, {64, 64, 6}) == EvalOutcome::of(1));
  CHECK(eval(step2, {7, 0}, {64, 64, 6}) == EvalOutcome::of(0));
}

TEST_CASE("busy beaver values come out of the search expression") {
  for (int n : {1, 2}) {
    Expr bb = bb_expression(0, n);
    CHECK(bb.arity == 1);
    for (const std::string& input :
         {std::string(""), std::string("0"), std::string("1"),
          std::string("11")}) {
      const std::set<std::uint64_t> steps = halt_step_set(n, input);
      REQUIRE(!steps.empty());
      const std::uint64_t expected = *steps.rbegin();
      CAPTURE(n);
      CAPTURE(input);
      CHECK(eval(bb, {code_from_input(input)}, {20, 20, 100}) ==
            EvalOutcome::of(expected));
      if (expected > 0)
        CHECK(eval(bb, {code_from_input(input)}, {expected - 1, 20, 100}) ==
              EvalOutcome::budget_exceeded(expected - 1));
    }
  }

  // The frozen desk values, for the record.
  CHECK(eval(bb_expression(0, 1), {0}, {10, 10, 64}) == EvalOutcome::of(1));
  CHECK(eval(bb_expression(0, 1), {2}, {10, 10, 64}) == EvalOutcome::of(2));
  CHECK(eval(bb_expression(0, 2), {0}, {20, 20, 256}) == EvalOutcome::of(6));

  CHECK_THROWS_AS(bb_expression(1, 1), std::invalid_argument);
  CHECK_THROWS_AS(bb_expression(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(bb_expression(0, 0), std::invalid_argument);
}

TEST_CASE("input codes are a bijection") {
  CHECK(input_from_code(0) == "");
  CHECK(input_from_code(1) == "0");
  CHECK(input_from_code(2) == "1");
  CHECK(input_from_code(3) == "00");
  CHECK(input_from_code(4) == "01");
  CHECK(input_from_code(5) == "10");
  CHECK(input_from_code(6) == "11");
  CHECK(input_from_code(7) == "000");

  CHECK(code_from_input("") == 0);
  CHECK(code_from_input("10") == 5);
  for (std::uint64_t c = 0; c < 2000; ++c)
    CHECK(code_from_input(input_from_code(c)) == c);

  CHECK_THROWS_AS(code_from_input("2"), std::invalid_argument);
  CHECK_THROWS_AS(code_from_input(std::string(64, '0')),
                  std::invalid_argument);
  CHECK_THROWS_AS(input_from_code(UINT64_MAX), std::invalid_argument);
}
