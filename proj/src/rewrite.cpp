#include "bblab/rewrite.hpp"

#include <cassert>
#include <stdexcept>
#include <utility>

namespace bblab {

namespace {

std::string marker(int state) {
  return std::string("[") + char('A' + state) + "]";
}

// Rewrites s by lhs -> rhs aligned at s's marker. Patterns may hang over
// either end of s onto blank cells (the extension becomes part of the
// result, as the simulator's window would have grown); a result whose
// marker ends up at the right end gains one blank for the head to read.
std::optional<std::string> rewrite_marked(const std::string& s,
                                          const std::string& lhs,
                                          const std::string& rhs,
                                          bool extend) {
  const std::size_t p = s.find('[');
  const std::size_t q = lhs.find('[');
  if (p == std::string::npos || q == std::string::npos) return std::nullopt;
  std::string padded = s;
  std::size_t at = p;
  if (q > at) {
    const std::size_t missing = q - at;
    if (!extend) return std::nullopt;
    if (lhs.compare(0, missing, std::string(missing, '0')) != 0)
      return std::nullopt;
    padded.insert(0, std::string(missing, '0'));
    at += missing;
  }
  const std::size_t start = at - q;
  if (start + lhs.size() > padded.size()) {
    const std::size_t missing = start + lhs.size() - padded.size();
    if (!extend) return std::nullopt;
    if (lhs.compare(lhs.size() - missing, missing,
                    std::string(missing, '0')) != 0)
      return std::nullopt;
    padded.append(missing, '0');
  }
  if (padded.compare(start, lhs.size(), lhs) != 0) return std::nullopt;
  std::string out = padded.substr(0, start) + rhs +
                    padded.substr(start + lhs.size());
  if (extend && out.back() == ']') out += '0';
  return out;
}

// The symbol cases a move pattern needs on one tape: right moves rewrite
// in place, left moves consume one cell of left context.
struct MoveCase {
  std::string lhs, rhs;
};

std::vector<MoveCase> move_cases(int state, Symbol read, int next,
                                 Symbol write, MoveDir dir) {
  const char r = char('0' + read);
  const char w = char('0' + write);
  std::vector<MoveCase> out;
  if (dir == MoveDir::Right) {
    out.push_back({marker(state) + r, w + marker(next)});
  } else {
    for (char t : {'0', '1'})
      out.push_back({t + marker(state) + r, marker(next) + t + w});
  }
  return out;
}

bool reads(const Marked& m, Symbol s) {
  return (m.content[m.head] == '1') == (s == 1);
}

// Structural match only; an inquire rule's oracle lookup happens at
// application time.
bool rule_matches(const Rule& r, const ConfigString& c, bool extend) {
  if (r.kind == Rule::Kind::Inquire) {
    auto w = split_marker(c.work);
    auto o = c.oracle ? split_marker(*c.oracle) : std::nullopt;
    if (!w || !o || w->state != o->state) return false;
    return w->state == r.state && reads(*w, r.work_read) &&
           reads(*o, r.oracle_read);
  }
  if (!rewrite_marked(c.work, r.work_lhs, r.work_rhs, extend)) return false;
  if (r.oracle_lhs.empty()) return !c.oracle;
  return c.oracle &&
         rewrite_marked(*c.oracle, r.oracle_lhs, r.oracle_rhs, extend)
             .has_value();
}

}  // namespace

std::optional<Marked> split_marker(std::string_view s) {
  const std::size_t open = s.find('[');
  if (open == std::string_view::npos || open + 2 >= s.size()) return {};
  if (s[open + 2] != ']') return {};
  const char letter = s[open + 1];
  if (letter < 'A' || letter > 'Z') return {};
  Marked m;
  m.state = letter - 'A';
  m.head = open;
  m.content = std::string(s.substr(0, open)) +
              std::string(s.substr(open + 3));
  if (m.head >= m.content.size()) return {};  // nothing under the head
  for (char ch : m.content)
    if (ch != '0' && ch != '1') return {};
  if (m.content.find('[') != std::string::npos ||
      m.content.find(']') != std::string::npos)
    return {};
  return m;
}

std::string join_marker(const Marked& m) {
  return m.content.substr(0, m.head) + marker(m.state) +
         m.content.substr(m.head);
}

ConfigString initial_config_string(std::string_view x, bool dual) {
  ConfigString c;
  c.work = marker(0) + (x.empty() ? "0" : std::string(x));
  if (dual) c.oracle = marker(0) + "0";
  return c;
}

ConfigString to_config_string(const Configuration& c) {
  Marked m;
  m.state = c.state;
  m.head = static_cast<std::size_t>(c.tape.head() - c.tape.min_visited());
  m.content = c.tape.window_string();
  return {join_marker(m), std::nullopt};
}

ConfigString to_config_string(const DualConfiguration& c) {
  Marked w{c.state,
           static_cast<std::size_t>(c.work.head() - c.work.min_visited()),
           c.work.window_string()};
  Marked o{c.state,
           static_cast<std::size_t>(c.oracle.head() - c.oracle.min_visited()),
           c.oracle.window_string()};
  return {join_marker(w), join_marker(o)};
}

RuleSet compile_rules(const MachineTable& m) {
  RuleSet rs;
  rs.machine = format_machine(m);
  rs.dual = false;
  for (int q = 0; q < m.state_count(); ++q)
    for (Symbol s : {Symbol{0}, Symbol{1}}) {
      const TransitionEntry& e = m.entry(q, s);
      if (!e) continue;
      for (MoveCase& mc :
           move_cases(q, s, e->next_state, e->write, e->move)) {
        Rule r;
        r.kind = Rule::Kind::Move;
        r.work_lhs = std::move(mc.lhs);
        r.work_rhs = std::move(mc.rhs);
        r.state = q;
        rs.rules.push_back(std::move(r));
      }
    }
  return rs;
}

RuleSet compile_rules(const OracleMachineTable& m) {
  RuleSet rs;
  rs.machine = format_oracle_machine(m);
  rs.dual = true;
  for (int q = 0; q < m.state_count(); ++q)
    for (Symbol ws : {Symbol{0}, Symbol{1}})
      for (Symbol os : {Symbol{0}, Symbol{1}}) {
        const OracleEntry& e = m.entry(q, ws, os);
        if (e.kind == OracleEntry::Kind::Undefined) continue;
        if (e.kind == OracleEntry::Kind::Inquire) {
          Rule r;
          r.kind = Rule::Kind::Inquire;
          r.state = q;
          r.work_read = ws;
          r.oracle_read = os;
          r.oracle_index = e.oracle_index;
          r.next_state = e.next_state;
          rs.rules.push_back(std::move(r));
          continue;
        }
        for (MoveCase& wc :
             move_cases(q, ws, e.next_state, e.work_write, e.work_move))
          for (MoveCase& oc : move_cases(q, os, e.next_state,
                                         e.oracle_write, e.oracle_move)) {
            Rule r;
            r.kind = Rule::Kind::Move;
            r.state = q;
            r.work_lhs = wc.lhs;
            r.work_rhs = wc.rhs;
            r.oracle_lhs = oc.lhs;
            r.oracle_rhs = oc.rhs;
            rs.rules.push_back(std::move(r));
          }
      }
  return rs;
}

std::optional<std::size_t> matching_rule(const RuleSet& rules,
                                         const ConfigString& c) {
  std::optional<std::size_t> found;
  for (std::size_t i = 0; i < rules.rules.size(); ++i) {
    if (!rule_matches(rules.rules[i], c, rules.boundary_extension)) continue;
    assert(!found && "rule sets compiled from machines are deterministic");
    found = i;
  }
  return found;
}

std::optional<ConfigString> apply_rule(const RuleSet& rules, std::size_t i,
                                       const ConfigString& c,
                                       const OracleSet& oracles) {
  const Rule& r = rules.rules.at(i);
  if (!rule_matches(r, c, rules.boundary_extension)) return std::nullopt;
  if (r.kind == Rule::Kind::Inquire) {
    auto o = split_marker(*c.oracle);
    if (r.oracle_index < 1 ||
        static_cast<std::size_t>(r.oracle_index) > oracles.size())
      return std::nullopt;
    auto value = oracles[r.oracle_index - 1].lookup(o->content);
    if (!value || value->empty()) return std::nullopt;  // stuck, not terminal
    auto w = split_marker(c.work);
    w->state = r.next_state;
    ConfigString out;
    out.work = join_marker(*w);
    out.oracle = marker(r.next_state) + *value;
    return out;
  }
  ConfigString out;
  auto work = rewrite_marked(c.work, r.work_lhs, r.work_rhs,
                             rules.boundary_extension);
  if (!work) return std::nullopt;
  out.work = std::move(*work);
  if (!r.oracle_lhs.empty()) {
    if (!c.oracle) return std::nullopt;
    auto orc = rewrite_marked(*c.oracle, r.oracle_lhs, r.oracle_rhs,
                              rules.boundary_extension);
    if (!orc) return std::nullopt;
    out.oracle = std::move(*orc);
  }
  return out;
}

bool derives_one(const RuleSet& rules, std::size_t i, const ConfigString& c1,
                 const ConfigString& c2, const OracleSet& oracles) {
  auto next = apply_rule(rules, i, c1, oracles);
  return next && *next == c2;
}

bool derives_any(const RuleSet& rules, const ConfigString& c1,
                 const ConfigString& c2, const OracleSet& oracles) {
  auto i = matching_rule(rules, c1);
  return i && derives_one(rules, *i, c1, c2, oracles);
}

namespace {

CertCheck malformed(std::string detail) {
  return {CertCheck::Kind::Malformed, std::move(detail)};
}

CertCheck broken(std::string detail) {
  return {CertCheck::Kind::Broken, std::move(detail)};
}

bool config_well_formed(const ConfigString& c, bool dual) {
  auto w = split_marker(c.work);
  if (!w) return false;
  if (!dual) return !c.oracle;
  if (!c.oracle) return false;
  auto o = split_marker(*c.oracle);
  return o && o->state == w->state;
}

}  // namespace

CertCheck check_deriv(const RuleSet& rules, const DerivationCertificate& d,
                      std::string_view x, std::string_view y,
                      const OracleSet& oracles) {
  if (d.machine != rules.machine)
    return malformed("certificate names a different machine");
  if (d.configs.size() < 2) return malformed("fewer than two configurations");
  if (d.steps.size() + 1 != d.configs.size())
    return malformed("step count does not bracket the configurations");
  for (const ConfigString& c : d.configs)
    if (!config_well_formed(c, rules.dual))
      return malformed("bad configuration string");
  for (std::size_t j = 0; j + 1 < d.steps.size(); ++j)
    if (d.steps[j] < 0 ||
        static_cast<std::size_t>(d.steps[j]) >= rules.rules.size())
      return malformed("rule index out of range");
  if (d.steps.back() != -1)
    return malformed("final step must be the halt discovery");
  if (d.input != x) return broken("certificate input differs from x");
  if (d.configs.front() != initial_config_string(x, rules.dual))
    return broken("first configuration does not encode the input");
  for (std::size_t j = 0; j + 1 < d.steps.size(); ++j)
    if (!derives_one(rules, d.steps[j], d.configs[j], d.configs[j + 1],
                     oracles))
      return broken("step " + std::to_string(j) + " does not derive");
  const ConfigString& last = d.configs.back();
  if (d.configs[d.configs.size() - 2] != last)
    return broken("halt step changed the configuration");
  if (matching_rule(rules, last))
    return broken("a rule still applies to the final configuration");
  if (split_marker(last.work)->content != y)
    return broken("final configuration does not decode to y");
  if (d.output != y) return broken("certificate output differs from y");
  return {};
}

namespace {

// Fills in steps by re-deriving each consecutive pair.
DerivationCertificate seal_certificate(const RuleSet& rules,
                                       std::string_view input,
                                       std::vector<ConfigString> configs,
                                       const OracleSet& oracles) {
  DerivationCertificate d;
  d.machine = rules.machine;
  d.input = input;
  configs.push_back(configs.back());  // the halt step changes nothing
  for (std::size_t j = 0; j + 2 < configs.size(); ++j) {
    auto i = matching_rule(rules, configs[j]);
    if (!i || !derives_one(rules, *i, configs[j], configs[j + 1], oracles))
      throw std::logic_error("simulator trace is not a derivation chain");
    d.steps.push_back(static_cast<int>(*i));
  }
  d.steps.push_back(-1);
  d.output = split_marker(configs.back().work)->content;
  d.configs = std::move(configs);
  return d;
}

}  // namespace

DerivationCertificate trace_certificate(const MachineTable& m,
                                        std::string_view x,
                                        std::uint64_t budget) {
  Trace trace;
  RunOutcome out = run(m, x, budget, &trace);
  if (out.kind != RunOutcome::Kind::Halted)
    throw std::invalid_argument("machine did not halt within budget");
  std::vector<ConfigString> configs;
  configs.reserve(trace.size() + 1);
  for (const Configuration& c : trace) configs.push_back(to_config_string(c));
  return seal_certificate(compile_rules(m), x, std::move(configs), {});
}

DerivationCertificate trace_certificate(const OracleMachineTable& m,
                                        std::string_view x,
                                        std::uint64_t budget,
                                        const OracleSet& oracles) {
  DualTrace trace;
  OracleRunOutcome out = oracle_run(m, x, budget, oracles, &trace);
  if (out.kind != OracleRunOutcome::Kind::Halted)
    throw std::invalid_argument("machine did not halt within budget");
  std::vector<ConfigString> configs;
  configs.reserve(trace.size() + 1);
  for (const DualConfiguration& c : trace)
    configs.push_back(to_config_string(c));
  return seal_certificate(compile_rules(m), x, std::move(configs), oracles);
}

std::string serialize_certificate(const DerivationCertificate& d) {
  std::string out = "machine: " + d.machine + "\n";
  out += "input:";
  if (!d.input.empty()) out += " " + d.input;
  out += "\n";
  for (std::size_t j = 0; j < d.configs.size(); ++j) {
    out += d.configs[j].work;
    out += " | ";
    out += d.configs[j].oracle ? *d.configs[j].oracle : "-";
    out += " | ";
    // the rule that produced this line's configuration
    const int produced = j == 0 ? -1 : d.steps[j - 1];
    out += produced < 0 ? "-" : std::to_string(produced);
    out += "\n";
  }
  return out;
}

DerivationCertificate parse_certificate(std::string_view text) {
  DerivationCertificate d;
  std::vector<std::string> lines;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    lines.push_back(std::string(text.substr(0, nl)));
    text = nl == std::string_view::npos ? std::string_view{}
                                        : text.substr(nl + 1);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.size() < 4 || lines[0].rfind("machine: ", 0) != 0 ||
      (lines[1] != "input:" && lines[1].rfind("input: ", 0) != 0))
    throw std::invalid_argument("bad certificate header");
  d.machine = lines[0].substr(9);
  d.input = lines[1].size() > 6 ? lines[1].substr(7) : "";
  // Canonical decimal only, so no serialized text has don't-care symbols.
  auto plain_number = [](const std::string& s) {
    if (s.empty() || s.size() > 9 || (s.size() > 1 && s[0] == '0'))
      return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  for (std::size_t j = 2; j < lines.size(); ++j) {
    const std::string& line = lines[j];
    const std::size_t a = line.find(" | ");
    const std::size_t b = a == std::string::npos
                              ? std::string::npos
                              : line.find(" | ", a + 3);
    if (b == std::string::npos)
      throw std::invalid_argument("bad certificate line");
    ConfigString c;
    c.work = line.substr(0, a);
    std::string orc = line.substr(a + 3, b - a - 3);
    if (orc != "-") c.oracle = std::move(orc);
    std::string produced = line.substr(b + 3);
    if (j == 2) {
      // Nothing produces the initial configuration.
      if (produced != "-")
        throw std::invalid_argument("bad certificate line");
    } else if (produced == "-") {
      d.steps.push_back(-1);
    } else if (plain_number(produced)) {
      d.steps.push_back(std::stoi(produced));
    } else {
      throw std::invalid_argument("bad certificate line");
    }
    d.configs.push_back(std::move(c));
  }
  if (d.configs.size() >= 2)
    if (auto w = split_marker(d.configs.back().work)) d.output = w->content;
  return d;
}

namespace {

template <typename Machine>
std::optional<std::string> deriv_chain(const Machine& m, std::string_view x,
                                       std::uint64_t search_budget,
                                       const OracleSet& oracles) {
  RuleSet rules = compile_rules(m);
  ConfigString c = initial_config_string(x, rules.dual);
  for (std::uint64_t len = 0; len <= search_budget; ++len) {
    auto i = matching_rule(rules, c);
    if (!i) return split_marker(c.work)->content;  // terminal: this is y
    auto next = apply_rule(rules, *i, c, oracles);
    if (!next) return std::nullopt;  // stuck on an unresolved oracle query
    c = std::move(*next);
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> compute_via_deriv(const MachineTable& m,
                                             std::string_view x,
                                             std::uint64_t search_budget) {
  return deriv_chain(m, x, search_budget, {});
}

std::optional<std::string> compute_via_deriv(const OracleMachineTable& m,
                                             std::string_view x,
                                             std::uint64_t search_budget,
                                             const OracleSet& oracles) {
  return deriv_chain(m, x, search_budget, oracles);
}

}  // namespace bblab
