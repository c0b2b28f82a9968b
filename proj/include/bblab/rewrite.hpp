#pragma once
// String-rewriting view of machine runs.
//
// A configuration is rendered as the visited tape window with the state
// marker ("[A]", "[B]", ...) embedded directly before the cell under the
// head. Each defined table entry compiles to one or more local rewrite
// rules; running the machine is then repeated rule application, a halting
// run is a finite derivation, and a derivation can be checked by someone
// who never saw the simulator. Dual-tape machines carry a second marked
// string for the oracle tape; plain machines leave it absent.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bblab/machine.hpp"
#include "bblab/oracle.hpp"

namespace bblab {

struct ConfigString {
  std::string work;                   // marked, e.g. "11[B]01"
  std::optional<std::string> oracle;  // absent for plain machines
  friend bool operator==(const ConfigString&, const ConfigString&) = default;
};

// A marked string taken apart: state letter, head cell index, bare content.
struct Marked {
  int state = 0;
  std::size_t head = 0;
  std::string content;
  friend bool operator==(const Marked&, const Marked&) = default;
};

// Requires exactly one "[X]" marker (X in A..Z), binary symbols everywhere
// else, and at least one symbol after the marker (the head always has a
// cell to read). Returns nothing otherwise.
std::optional<Marked> split_marker(std::string_view s);
std::string join_marker(const Marked& m);

// The initial configuration string of input x: marker in state A before
// the first input symbol, or before a single blank when x is empty.
ConfigString initial_config_string(std::string_view x, bool dual);

// Render a simulator configuration as its marked visited window.
ConfigString to_config_string(const Configuration& c);
ConfigString to_config_string(const DualConfiguration& c);

struct Rule {
  enum class Kind { Move, Inquire };
  Kind kind = Kind::Move;
  // Move: marked patterns, rewritten in place at the marker; the oracle
  // pair stays empty for plain machines. Left moves need one cell of left
  // context, so each such entry compiles to one rule per context symbol.
  std::string work_lhs, work_rhs;
  std::string oracle_lhs, oracle_rhs;
  // Inquire: fires in `state` when the heads read (work_read, oracle_read);
  // the oracle string becomes the marker in `next_state` followed by the
  // table value for the bare oracle content. The work content is untouched.
  int state = 0;
  Symbol work_read = 0;
  Symbol oracle_read = 0;
  int oracle_index = 1;
  int next_state = 0;
};

struct RuleSet {
  std::string machine;  // text form of the compiled machine
  bool dual = false;
  // Convention: a pattern may reach past an end of the string onto blank
  // cells, and a rewrite that strands the marker at the right end grows the
  // string by one blank; both mirror how the simulator's visited window
  // grows.
  bool boundary_extension = true;
  std::vector<Rule> rules;
};

RuleSet compile_rules(const MachineTable& m);
RuleSet compile_rules(const OracleMachineTable& m);

// The unique rule whose patterns (and, for inquire rules, whose head reads)
// match c. Machines are deterministic, so at most one can match; nothing
// means c is terminal.
std::optional<std::size_t> matching_rule(const RuleSet& rules,
                                         const ConfigString& c);

// Applies rule i to c. Nothing when the rule does not match — or, for an
// inquire rule, when the oracle set has no value for the queried string,
// which leaves the configuration stuck rather than terminal.
// Throws std::out_of_range on a rule index outside the set.
std::optional<ConfigString> apply_rule(const RuleSet& rules, std::size_t i,
                                       const ConfigString& c,
                                       const OracleSet& oracles);

// One derivation step by the named rule / by whichever rule matches.
bool derives_one(const RuleSet& rules, std::size_t i, const ConfigString& c1,
                 const ConfigString& c2, const OracleSet& oracles);
bool derives_any(const RuleSet& rules, const ConfigString& c1,
                 const ConfigString& c2, const OracleSet& oracles);

// A halting run, spelled out. configs runs from the initial configuration
// to the halting one, whose final entry appears twice: discovering the
// undefined entry is a step that changes nothing. steps names the rule
// applied between consecutive configs, -1 for that final halt step.
struct DerivationCertificate {
  std::string machine;
  std::string input;
  std::string output;  // bare work content of the halting configuration
  std::vector<ConfigString> configs;
  std::vector<int> steps;
};

struct CertCheck {
  // Malformed: the certificate is not even shaped right (marker syntax,
  // size mismatches, rule indices out of range, machine mismatch).
  // Broken: well-shaped but wrong somewhere (initial config, a derivation
  // step, terminality, or the claimed output).
  enum class Kind { Valid, Malformed, Broken };
  Kind kind = Kind::Valid;
  std::string detail;
  explicit operator bool() const { return kind == Kind::Valid; }
};

CertCheck check_deriv(const RuleSet& rules, const DerivationCertificate& d,
                      std::string_view x, std::string_view y,
                      const OracleSet& oracles = {});

// Runs the machine and spells the run out as a certificate; the config
// count is the halting step count plus one. Throws std::invalid_argument
// when the run does not halt within budget.
DerivationCertificate trace_certificate(const MachineTable& m,
                                        std::string_view x,
                                        std::uint64_t budget);
DerivationCertificate trace_certificate(const OracleMachineTable& m,
                                        std::string_view x,
                                        std::uint64_t budget,
                                        const OracleSet& oracles);

// Header lines "machine: ..." and "input: ...", then one line per config:
// "work | oracle | rule", oracle "-" for plain machines, rule the index
// that produced the line's config ("-" on the initial and terminal lines).
std::string serialize_certificate(const DerivationCertificate& d);
// Throws std::invalid_argument on malformed text.
DerivationCertificate parse_certificate(std::string_view text);

// Searches derivations in increasing length and returns the decoded output
// of the first terminal one; the deterministic rule set makes this the
// unique chain from the initial configuration. Nothing when the chain is
// still unfinished (or stuck on an unresolved oracle query) after
// search_budget applications.
std::optional<std::string> compute_via_deriv(const MachineTable& m,
                                             std::string_view x,
                                             std::uint64_t search_budget);
std::optional<std::string> compute_via_deriv(const OracleMachineTable& m,
                                             std::string_view x,
                                             std::uint64_t search_budget,
                                             const OracleSet& oracles);

}  // namespace bblab
