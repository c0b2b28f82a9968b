#pragma once
// Bounded evaluator for the max-min function class: base functions,
// composition, primitive recursion, and least/greatest-witness search
// operators, written as s-expressions. The busy-beaver step predicate is a
// builtin backed by the simulator and the non-halting deciders, which is
// what lets a greatest-witness search over halting step counts come back
// as a definite value: once every machine in the space is settled, "no
// machine halts at exactly t" is known for every larger t at once.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bblab {

struct Expr {
  enum class Kind {
    Zero,     // one argument, always 0
    Succ,     // one argument, n + 1
    Proj,     // (proj i j): the i-th of j arguments, 1-based
    Comp,     // children = {h, g1..gk}: h(g1(args)..gk(args))
    PrimRec,  // children = {g, h}: f(0,v)=g(v), f(k+1,v)=h(k,f(k,v),v)
    Min,      // children = {p}: least t with p(t, args) != 0
    Max,      // children = {p}: greatest t with p(t, args) != 0
    Literal,  // a natural number, usable at any arity
    Builtin,  // eq / le / ge over two children, or the step predicate
  };

  Kind kind = Kind::Zero;
  // Declared argument count; -1 for literals (and literal-only builtins),
  // which fit any context.
  int arity = 1;
  int i = 0, j = 0;  // Proj indices; machine space (order, states) for
                     // the step predicate
  std::uint64_t literal = 0;
  std::string name;  // Builtin: "eq", "le", "ge", "step-pred"
  std::vector<Expr> children;

  friend bool operator==(const Expr&, const Expr&) = default;
};

struct EvalBudget {
  std::uint64_t horizon = 64;  // highest t the search operators try
  std::uint64_t verify = 64;   // extra window confirming a greatest witness
  std::uint64_t steps = 256;   // simulation budget inside the step predicate
};

struct EvalOutcome {
  // Undefined is only reported with a finiteness argument in hand: the
  // predicate is constant false, or the step predicate's machine space is
  // fully settled and the remaining t can never hold. A search that merely
  // runs out of budget is BudgetExceeded, never Undefined.
  enum class Kind { Value, Undefined, BudgetExceeded };
  Kind kind = Kind::Value;
  std::uint64_t value = 0;    // Value
  std::uint64_t horizon = 0;  // BudgetExceeded: the budget that ran out

  static EvalOutcome of(std::uint64_t v) {
    return {Kind::Value, v, 0};
  }
  static EvalOutcome undefined() { return {Kind::Undefined, 0, 0}; }
  static EvalOutcome budget_exceeded(std::uint64_t h) {
    return {Kind::BudgetExceeded, 0, h};
  }
  friend bool operator==(const EvalOutcome&, const EvalOutcome&) = default;
};

// S-expression reader: atoms `zero`, `succ` (bare or in parens), natural
// literals, and forms (proj i j), (comp h g1 ... gk), (primrec g h),
// (min p), (max p), (eq a b), (le a b), (ge a b), (step-pred m n).
// Arity-checks the result. Throws std::invalid_argument with the offending
// position on syntax or arity errors.
Expr parse_expr(std::string_view text);

// Canonical text form; parse_expr(format_expr(e)) == e.
std::string format_expr(const Expr& e);

// Evaluates e on args (|args| must match e.arity; literals accept any).
// Search operators scan t = 0..horizon and verify a greatest witness up to
// horizon+verify; outcomes are three-valued as above. Throws
// std::invalid_argument on an argument-count mismatch.
EvalOutcome eval(const Expr& e, const std::vector<std::uint64_t>& args,
                 const EvalBudget& budget);

// Bijection between naturals and binary strings used to pass tape inputs
// as numbers: 0 <-> "", 1 <-> "0", 2 <-> "1", 3 <-> "00", ... (the number
// plus one written in binary, with the leading 1 dropped).
std::string input_from_code(std::uint64_t code);
std::uint64_t code_from_input(std::string_view input);

// The busy-beaver value as a search expression: the greatest t such that
// some machine of the given space halts on the input at exactly step t.
// Arity 1; the argument is the input string's code. Evaluating it with a
// sufficient horizon equals the enumerative engine's answer. Refuses
// nonzero oracle order (the step predicate would itself need oracle
// answers) and spaces larger than kMaxStepSpace tables.
Expr bb_expression(int order, int states);

inline constexpr std::uint64_t kMaxStepSpace = 10000;

}  // namespace bblab
