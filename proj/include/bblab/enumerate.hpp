#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bblab/machine.hpp"
#include "bblab/oracle.hpp"

namespace bblab {

using BigInt = boost::multiprecision::cpp_int;

// (4n+1)^(2n): every n-state table, each of the 2n slots undefined or one of
// the 4n defined transitions.
BigInt space_size(int n);

// (1 + 16n + order*n)^(4n) for dual-tape tables of the given oracle order.
BigInt oracle_space_size(int order, int n);

// Bijection between [0, space_size(n)) and tables, in increasing text order.
MachineTable machine_at_index(int n, const BigInt& index);
BigInt machine_index(const MachineTable& m);

OracleMachineTable oracle_machine_at_index(int order, int n,
                                           const BigInt& index);
BigInt oracle_machine_index(const OracleMachineTable& m);

// Walks the whole space in text order. `start` resumes mid-stream.
class RawEnumerator {
 public:
  explicit RawEnumerator(int n, BigInt start = 0);
  std::optional<MachineTable> next();
  const BigInt& cursor() const { return cursor_; }  // index of the next table
  bool done() const { return cursor_ >= size_; }

 private:
  int n_;
  BigInt cursor_;
  BigInt size_;
};

class OracleEnumerator {
 public:
  OracleEnumerator(int order, int n, BigInt start = 0,
                   std::optional<BigInt> limit = std::nullopt);
  std::optional<OracleMachineTable> next();
  const BigInt& cursor() const { return cursor_; }
  bool done() const { return cursor_ >= stop_; }

 private:
  int order_;
  int n_;
  BigInt cursor_;
  BigInt stop_;
};

// Tree-shaped walk over the tables that matter for one input: each node is
// emitted, then refined at the first undefined slot its run reaches.  A node
// whose run exhausts `sim_budget` without reaching an undefined slot is a
// leaf; so is one whose refinement would leave no undefined slot at all
// (such a child could never halt, hence never set a record).
//
// Determinism contract: the emitted sequence is a pure function of
// (n, input, sim_budget); children are ordered write 0 before 1, move L
// before R, next state ascending.  The first filled transition is pinned to
// a right move when the input fits in one cell (the mirror image of any
// table behaves identically), and on empty input its target must be a fresh
// state (a first self-loop just walks off the tape).
class TnfEnumerator {
 public:
  TnfEnumerator(int n, std::string_view input, std::uint64_t sim_budget);
  std::optional<MachineTable> next();
  std::uint64_t emitted() const { return emitted_; }
  // Re-walks `count` nodes from the current position, discarding them.
  void skip(std::uint64_t count);

 private:
  struct Node {
    MachineTable m;
    Configuration at;  // run continues here; steps_taken counts from step 0
  };

  int n_;
  std::string input_;
  std::uint64_t budget_;
  std::uint64_t emitted_ = 0;
  std::vector<Node> stack_;
};

}  // namespace bblab
