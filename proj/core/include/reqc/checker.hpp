#pragma once

#include <optional>
#include <vector>

#include "reqc/ast.hpp"
#include "reqc/diagnostic.hpp"
#include "reqc/dictionary.hpp"
#include "reqc/timing.hpp"

namespace reqc {

struct CheckOptions {
  /// When set, durations must also be whole multiples of the step size.
  std::optional<StepConfig> step;
};

/// Type of `e`, or nullopt when it does not type-check. Problems are appended
/// to `diags` when given; errors are reported once, at the innermost node.
///
///  - and/or/implies/not take bool operands
///  - '=' compares two bools or two numbers; <, <=, >, >= compare numbers
///  - arithmetic promotes int to float; int / int stays int (truncating)
///  - bit i of x takes int i and int x
///  - last keeps the operand type
std::optional<ScalarType> infer_type(const Expr& e, const VariableDictionary& dict,
                                     std::vector<Diagnostic>* diags = nullptr);

/// Full static check of a requirement; no errors in the result means it can be
/// evaluated, simulated and exported.
std::vector<Diagnostic> check(const Requirement& req, const VariableDictionary& dict,
                              const CheckOptions& opts = {});

}  // namespace reqc
