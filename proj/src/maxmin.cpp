#include "bblab/maxmin.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "bblab/deciders.hpp"
#include "bblab/enumerate.hpp"
#include "bblab/machine.hpp"

namespace bblab {

namespace {

[[noreturn]] void fail_at(const std::string& what, std::size_t pos) {
  throw std::invalid_argument(what + " at offset " + std::to_string(pos));
}

struct Token {
  enum class Kind { LParen, RParen, Symbol, Number, End };
  Kind kind = Kind::End;
  std::string text;
  std::uint64_t number = 0;
  std::size_t pos = 0;
};

struct Lexer {
  std::string_view text;
  std::size_t at = 0;

  Token next() {
    while (at < text.size() &&
           (text[at] == ' ' || text[at] == '\t' || text[at] == '\n' ||
            text[at] == '\r'))
      ++at;
    if (at >= text.size()) return {Token::Kind::End, "", 0, at};
    const std::size_t start = at;
    if (text[at] == '(') {
      ++at;
      return {Token::Kind::LParen, "(", 0, start};
    }
    if (text[at] == ')') {
      ++at;
      return {Token::Kind::RParen, ")", 0, start};
    }
    std::string word;
    while (at < text.size() && text[at] != '(' && text[at] != ')' &&
           text[at] != ' ' && text[at] != '\t' && text[at] != '\n' &&
           text[at] != '\r')
      word += text[at++];
    bool digits = !word.empty();
    for (char c : word)
      if (c < '0' || c > '9') digits = false;
    if (digits) {
      std::uint64_t v = 0;
      for (char c : word) {
        if (v > (UINT64_MAX - 9) / 10) fail_at("number too large", start);
        v = v * 10 + static_cast<std::uint64_t>(c - '0');
      }
      return {Token::Kind::Number, word, v, start};
    }
    return {Token::Kind::Symbol, word, 0, start};
  }
};

// The one concrete arity among xs, or -1 when every entry is a literal.
int common_arity(const std::vector<Expr>& xs, std::size_t from,
                 std::size_t pos) {
  int found = -1;
  for (std::size_t k = from; k < xs.size(); ++k) {
    if (xs[k].arity < 0) continue;
    if (found >= 0 && found != xs[k].arity)
      fail_at("mixed argument counts", pos);
    found = xs[k].arity;
  }
  return found;
}

void validate_step_space(int order, int states, std::size_t pos) {
  if (order != 0)
    fail_at("step predicates over oracle machines are not supported", pos);
  if (states < 1) fail_at("step predicate needs at least one state", pos);
  if (space_size(states) > BigInt(kMaxStepSpace))
    fail_at("machine space too large for expression evaluation", pos);
}

struct Parser {
  Lexer lex;
  Token look;

  explicit Parser(std::string_view text) : lex{text} { look = lex.next(); }

  Token take() {
    Token t = look;
    look = lex.next();
    return t;
  }

  std::uint64_t number(const char* what) {
    if (look.kind != Token::Kind::Number) fail_at(what, look.pos);
    return take().number;
  }

  Expr atom(const Token& t) {
    Expr e;
    if (t.kind == Token::Kind::Number) {
      e.kind = Expr::Kind::Literal;
      e.arity = -1;
      e.literal = t.number;
      return e;
    }
    if (t.text == "zero") {
      e.kind = Expr::Kind::Zero;
      e.arity = 1;
      return e;
    }
    if (t.text == "succ") {
      e.kind = Expr::Kind::Succ;
      e.arity = 1;
      return e;
    }
    fail_at("unknown name '" + t.text + "'", t.pos);
  }

  Expr node() {
    Token t = take();
    if (t.kind == Token::Kind::End) fail_at("unexpected end", t.pos);
    if (t.kind == Token::Kind::RParen) fail_at("unexpected ')'", t.pos);
    if (t.kind != Token::Kind::LParen) return atom(t);

    Token head = take();
    if (head.kind != Token::Kind::Symbol)
      fail_at("expected an operator name", head.pos);
    Expr e;

    if (head.text == "zero" || head.text == "succ") {
      e = atom(head);
    } else if (head.text == "proj") {
      e.kind = Expr::Kind::Proj;
      e.i = static_cast<int>(number("expected the projection index"));
      e.j = static_cast<int>(number("expected the argument count"));
      if (e.i < 1 || e.j < 1 || e.i > e.j)
        fail_at("projection index outside its arguments", head.pos);
      e.arity = e.j;
    } else if (head.text == "comp") {
      e.kind = Expr::Kind::Comp;
      e.children.push_back(node());
      while (look.kind != Token::Kind::RParen &&
             look.kind != Token::Kind::End)
        e.children.push_back(node());
      if (e.children.size() < 2)
        fail_at("composition needs inner functions", head.pos);
      const int k = static_cast<int>(e.children.size()) - 1;
      if (e.children[0].arity >= 0 && e.children[0].arity != k)
        fail_at("outer function expects " +
                    std::to_string(e.children[0].arity) + " arguments, got " +
                    std::to_string(k),
                head.pos);
      e.arity = common_arity(e.children, 1, head.pos);
    } else if (head.text == "primrec") {
      e.kind = Expr::Kind::PrimRec;
      e.children.push_back(node());
      e.children.push_back(node());
      const int ga = e.children[0].arity;
      const int ha = e.children[1].arity;
      int j;
      if (ga >= 0)
        j = ga;
      else if (ha >= 2)
        j = ha - 2;
      else
        fail_at("cannot infer the recursion arity", head.pos);
      if (ha >= 0 && ha != j + 2)
        fail_at("step function must take recursion counter, previous value, "
                "then the arguments",
                head.pos);
      e.arity = j + 1;
    } else if (head.text == "min" || head.text == "max") {
      e.kind = head.text == "min" ? Expr::Kind::Min : Expr::Kind::Max;
      e.children.push_back(node());
      if (e.children[0].arity < 1)
        fail_at("search body needs the search variable first", head.pos);
      e.arity = e.children[0].arity - 1;
    } else if (head.text == "eq" || head.text == "le" || head.text == "ge") {
      e.kind = Expr::Kind::Builtin;
      e.name = head.text;
      e.children.push_back(node());
      e.children.push_back(node());
      e.arity = common_arity(e.children, 0, head.pos);
    } else if (head.text == "step-pred") {
      e.kind = Expr::Kind::Builtin;
      e.name = "step-pred";
      e.i = static_cast<int>(number("expected the oracle order"));
      e.j = static_cast<int>(number("expected the state count"));
      validate_step_space(e.i, e.j, head.pos);
      e.arity = 2;
    } else {
      fail_at("unknown operator '" + head.text + "'", head.pos);
    }

    Token close = take();
    if (close.kind != Token::Kind::RParen)
      fail_at("expected ')'", close.pos);
    return e;
  }
};

}  // namespace

Expr parse_expr(std::string_view text) {
  Parser p(text);
  Expr e = p.node();
  if (p.look.kind != Token::Kind::End)
    fail_at("trailing text", p.look.pos);
  return e;
}

std::string format_expr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Zero:
      return "(zero)";
    case Expr::Kind::Succ:
      return "(succ)";
    case Expr::Kind::Proj:
      return "(proj " + std::to_string(e.i) + " " + std::to_string(e.j) + ")";
    case Expr::Kind::Literal:
      return std::to_string(e.literal);
    case Expr::Kind::Comp: {
      std::string out = "(comp";
      for (const Expr& c : e.children) out += " " + format_expr(c);
      return out + ")";
    }
    case Expr::Kind::PrimRec:
      return "(primrec " + format_expr(e.children[0]) + " " +
             format_expr(e.children[1]) + ")";
    case Expr::Kind::Min:
      return "(min " + format_expr(e.children[0]) + ")";
    case Expr::Kind::Max:
      return "(max " + format_expr(e.children[0]) + ")";
    case Expr::Kind::Builtin:
      if (e.name == "step-pred")
        return "(step-pred " + std::to_string(e.i) + " " +
               std::to_string(e.j) + ")";
      return "(" + e.name + " " + format_expr(e.children[0]) + " " +
             format_expr(e.children[1]) + ")";
  }
  throw std::logic_error("unhandled expression kind");
}

std::string input_from_code(std::uint64_t code) {
  if (code == UINT64_MAX)
    throw std::invalid_argument("input code out of range");
  std::uint64_t v = code + 1;
  std::string bits;
  while (v > 0) {
    bits += static_cast<char>('0' + (v & 1));
    v >>= 1;
  }
  // bits is written low-to-high; the top bit is the dropped leading 1.
  std::string out;
  for (std::size_t k = bits.size() - 1; k-- > 0;)
    out += bits[k];
  return out;
}

std::uint64_t code_from_input(std::string_view input) {
  if (input.size() >= 64)
    throw std::invalid_argument("input too long to code");
  std::uint64_t v = 1;
  for (char c : input) {
    if (c != '0' && c != '1')
      throw std::invalid_argument("input must be a binary string");
    v = v * 2 + static_cast<std::uint64_t>(c == '1');
  }
  return v - 1;
}

Expr bb_expression(int order, int states) {
  validate_step_space(order, states, 0);
  Expr step;
  step.kind = Expr::Kind::Builtin;
  step.name = "step-pred";
  step.arity = 2;
  step.i = order;
  step.j = states;
  Expr out;
  out.kind = Expr::Kind::Max;
  out.arity = 1;
  out.children.push_back(std::move(step));
  return out;
}

namespace {

// One settled machine space: every halting step count observed within the
// simulation budget, and whether every table was classified (halted or
// proven non-halting). Complete means halting at any step not in the set
// is impossible, which is the finiteness certificate the search operators
// consume.
struct SettledSpace {
  bool complete = false;
  std::uint64_t sim_budget = 0;
  std::uint64_t max_halt = 0;
  std::set<std::uint64_t> halt_steps;
};

const SettledSpace& settle_space(int states, const std::string& input,
                                 std::uint64_t sim_budget) {
  static std::mutex lock;
  static std::map<std::string, SettledSpace> cache;
  std::lock_guard<std::mutex> hold(lock);
  const std::string key = std::to_string(states) + "|" + input + "|" +
                          std::to_string(sim_budget);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  SettledSpace s;
  s.complete = true;
  s.sim_budget = sim_budget;
  PipelineBudgets budgets;
  budgets.sim = sim_budget;
  RawEnumerator walk(states);
  while (auto m = walk.next()) {
    Classification c = classify(*m, input, budgets);
    if (c.outcome.kind == RunOutcome::Kind::Halted) {
      s.halt_steps.insert(c.outcome.steps);
      s.max_halt = std::max(s.max_halt, c.outcome.steps);
    } else if (c.outcome.kind == RunOutcome::Kind::Unknown) {
      s.complete = false;
    }
  }
  return cache.emplace(key, std::move(s)).first->second;
}

// Evaluation result with the extra fact a settled step predicate can
// provide: the predicate is false here and at every larger first argument.
struct Tri {
  enum class K { Value, Undefined, Budget };
  K k = K::Value;
  std::uint64_t v = 0;
  std::uint64_t horizon = 0;
  bool false_forever = false;
};

Tri tri_value(std::uint64_t v, bool ff = false) {
  return {Tri::K::Value, v, 0, ff};
}

bool constant_false(const Expr& e) {
  return e.kind == Expr::Kind::Zero ||
         (e.kind == Expr::Kind::Literal && e.literal == 0);
}

Tri eval_rec(const Expr& e, const std::vector<std::uint64_t>& args,
             const EvalBudget& budget);

Tri eval_search(const Expr& e, const std::vector<std::uint64_t>& args,
                const EvalBudget& budget) {
  const Expr& p = e.children[0];
  // A predicate that cannot mention the search variable and is false is
  // false at every t: the one syntactic finiteness argument we accept.
  if (constant_false(p)) return {Tri::K::Undefined, 0, 0, false};

  std::vector<std::uint64_t> inner;
  inner.reserve(args.size() + 1);
  inner.push_back(0);
  inner.insert(inner.end(), args.begin(), args.end());

  auto probe = [&](std::uint64_t t) {
    inner[0] = t;
    return eval_rec(p, inner, budget);
  };

  if (e.kind == Expr::Kind::Min) {
    for (std::uint64_t t = 0; t <= budget.horizon; ++t) {
      Tri r = probe(t);
      if (r.k != Tri::K::Value) return r;
      if (r.v != 0) return tri_value(t);
      if (r.false_forever) return {Tri::K::Undefined, 0, 0, false};
    }
    return {Tri::K::Budget, 0, budget.horizon, false};
  }

  // Max: the greatest witness at or below the horizon, verified against
  // the window above it.
  std::optional<std::uint64_t> best;
  bool provably_empty = false;
  for (std::uint64_t t = 0; t <= budget.horizon; ++t) {
    Tri r = probe(t);
    if (r.k != Tri::K::Value) return r;
    if (r.v != 0) best = t;
    if (r.false_forever) {
      provably_empty = !best.has_value();
      break;
    }
  }
  if (!best.has_value()) {
    if (provably_empty) return {Tri::K::Undefined, 0, 0, false};
    return {Tri::K::Budget, 0, budget.horizon, false};
  }
  for (std::uint64_t u = *best + 1; u <= budget.horizon + budget.verify;
       ++u) {
    Tri r = probe(u);
    if (r.k != Tri::K::Value) return r;
    if (r.v != 0)
      return {Tri::K::Budget, 0, budget.horizon, false};
    if (r.false_forever) break;  // certified false from here on
  }
  return tri_value(*best);
}

Tri eval_step_pred(const Expr& e, const std::vector<std::uint64_t>& args,
                   const EvalBudget& budget) {
  const std::uint64_t t = args[0];
  const std::string input = input_from_code(args[1]);
  const SettledSpace& s = settle_space(e.j, input, budget.steps);
  if (s.halt_steps.count(t)) return tri_value(1);
  // Halting at t within the simulation budget would have been observed, so
  // a miss below the budget is a definite no even with unknowns left.
  if (s.complete) return tri_value(0, t > s.max_halt);
  if (t <= s.sim_budget) return tri_value(0);
  return {Tri::K::Budget, 0, budget.steps, false};
}

Tri eval_rec(const Expr& e, const std::vector<std::uint64_t>& args,
             const EvalBudget& budget) {
  switch (e.kind) {
    case Expr::Kind::Zero:
      return tri_value(0);
    case Expr::Kind::Succ:
      return tri_value(args.at(0) + 1);
    case Expr::Kind::Literal:
      return tri_value(e.literal);
    case Expr::Kind::Proj: {
      const std::size_t i = static_cast<std::size_t>(e.i);
      if (i > args.size())
        throw std::invalid_argument("projection outside its arguments");
      return tri_value(args[i - 1]);
    }
    case Expr::Kind::Comp: {
      std::vector<std::uint64_t> vals;
      vals.reserve(e.children.size() - 1);
      for (std::size_t k = 1; k < e.children.size(); ++k) {
        Tri r = eval_rec(e.children[k], args, budget);
        if (r.k != Tri::K::Value) return r;
        vals.push_back(r.v);
      }
      return eval_rec(e.children[0], vals, budget);
    }
    case Expr::Kind::PrimRec: {
      const std::uint64_t count = args.at(0);
      std::vector<std::uint64_t> rest(args.begin() + 1, args.end());
      Tri acc = eval_rec(e.children[0], rest, budget);
      if (acc.k != Tri::K::Value) return acc;
      std::vector<std::uint64_t> step(rest.size() + 2);
      std::copy(rest.begin(), rest.end(), step.begin() + 2);
      for (std::uint64_t k = 0; k < count; ++k) {
        step[0] = k;
        step[1] = acc.v;
        acc = eval_rec(e.children[1], step, budget);
        if (acc.k != Tri::K::Value) return acc;
      }
      return tri_value(acc.v);
    }
    case Expr::Kind::Min:
    case Expr::Kind::Max:
      return eval_search(e, args, budget);
    case Expr::Kind::Builtin: {
      if (e.name == "step-pred") return eval_step_pred(e, args, budget);
      Tri a = eval_rec(e.children[0], args, budget);
      if (a.k != Tri::K::Value) return a;
      Tri b = eval_rec(e.children[1], args, budget);
      if (b.k != Tri::K::Value) return b;
      bool truth;
      if (e.name == "eq")
        truth = a.v == b.v;
      else if (e.name == "le")
        truth = a.v <= b.v;
      else if (e.name == "ge")
        truth = a.v >= b.v;
      else
        throw std::invalid_argument("unknown builtin '" + e.name + "'");
      return tri_value(truth ? 1 : 0);
    }
  }
  throw std::logic_error("unhandled expression kind");
}

}  // namespace

EvalOutcome eval(const Expr& e, const std::vector<std::uint64_t>& args,
                 const EvalBudget& budget) {
  if (e.arity >= 0 && args.size() != static_cast<std::size_t>(e.arity))
    throw std::invalid_argument(
        "expression takes " + std::to_string(e.arity) + " arguments, got " +
        std::to_string(args.size()));
  Tri r = eval_rec(e, args, budget);
  switch (r.k) {
    case Tri::K::Value:
      return EvalOutcome::of(r.v);
    case Tri::K::Undefined:
      return EvalOutcome::undefined();
    case Tri::K::Budget:
      return EvalOutcome::budget_exceeded(r.horizon);
  }
  throw std::logic_error("unhandled outcome");
}

}  // namespace bblab
