#pragma once

#include <stdexcept>
#include <string>

#include "reqc/ast.hpp"
#include "reqc/value.hpp"

namespace reqc::ops {

/// Raised for arithmetic faults; callers attach step and subterm.
struct Fault : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Applies a non-leaf, non-temporal operator. `args` holds arity(op) values
/// already checked by the type checker.
Value apply(Op op, const Value* args);

}  // namespace reqc::ops
