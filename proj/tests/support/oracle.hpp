#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "reqc/ast.hpp"
#include "reqc/dictionary.hpp"
#include "reqc/timing.hpp"
#include "reqc/trace.hpp"
#include "reqc/value.hpp"

// Test-side reference evaluators, written against the definitions rather
// than the library's implementation.
namespace reqc::testing {

struct OracleFault : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Operator application with 128-bit intermediate ints; throws OracleFault on
/// overflow, division by zero or a bit index outside 0..63.
Value oracle_apply(Op op, const std::vector<Value>& args);

/// Recursive pointwise evaluation of `e` at step t. Steps before 0 read the
/// pre-history: signals at their initial value, calibratables at their step-0
/// value.
Value oracle_eval(const Expr& e, const Trace& trace, const VariableDictionary& dict, std::int64_t t);

struct OracleVerdict {
  std::set<std::int64_t> failing;  // anchors
  std::int64_t pending = 0;
  bool fault = false;
};

/// The event is evaluated at every step before judging; any fault sets
/// `fault` and leaves the rest empty.
OracleVerdict oracle_invariant(Scope scope, const Expr& e, const Trace& trace, const VariableDictionary& dict);

/// Brute force over all anchors of the bounded-response definition.
OracleVerdict oracle_response(Scope scope, const NormalizedResponse& nr, const Trace& trace,
                              const VariableDictionary& dict);

}  // namespace reqc::testing
