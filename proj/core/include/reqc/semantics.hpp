#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reqc/ast.hpp"
#include "reqc/dictionary.hpp"
#include "reqc/timing.hpp"
#include "reqc/trace.hpp"

namespace reqc {

/// Evaluation fault (division by zero, overflow, bit index out of range,
/// unbound variable) at a given step in a given subterm.
class EvalError : public Error {
 public:
  EvalError(std::int64_t step, std::string subterm, const std::string& what);
  std::int64_t step() const { return step_; }
  const std::string& subterm() const { return subterm_; }

 private:
  std::int64_t step_;
  std::string subterm_;
};

/// Values of `e` at every step of `trace`. Variables read their trace column
/// when present; constants and calibratables otherwise read their dictionary
/// value. `last` reaching before step 0 sees the pre-history environment:
/// signals at their `initial`, constants at their value, calibratables at
/// their step-0 value. Evaluation is strict: a fault at any step throws.
std::vector<Value> eval_series(const Expr& e, const Trace& trace, const VariableDictionary& dict);

/// Single step of eval_series.
Value eval_event(const Expr& e, const Trace& trace, const VariableDictionary& dict, std::int64_t t);

/// Value of `e` in the pre-history environment.
Value eval_prehistory(const Expr& e, const Trace& trace, const VariableDictionary& dict);

enum class Status { Pass, Fail, PassWithPending };

std::string_view to_string(Status s);

struct Violation {
  std::int64_t anchor_step = 0;  // first step of the trigger window (invariants: the failing step)
  std::int64_t check_step = 0;   // step at which the failure is observed
  std::string explanation;
};

struct Verdict {
  Status status = Status::Pass;
  std::vector<Violation> violations;
  std::int64_t pending = 0;  // instances whose outcome depends on steps past the end
};

/// Initially: only step 0 is checked. Globally: every step t >= 1.
Verdict eval_invariant(Scope scope, const Expr& e, const Trace& trace, const VariableDictionary& dict);

/// Anchored reading. An instance anchored at a (a >= 1 for Globally, a = 0
/// for Initially) has trigger window [a, a+t_p-1] and obligation window
/// [a+t_p+t_d, a+shift-1]. It fails when the trigger window lies inside the
/// trace, holds throughout, and some obligation step inside the trace is
/// false; it is pending when its outcome depends on steps past the end.
Verdict eval_response_future(Scope scope, const NormalizedResponse& nr, const Trace& trace,
                             const VariableDictionary& dict);

/// Shifted reading. At evaluation step u the check is "trigger held for the
/// t_p steps ending at u-t_d-t_q implies response held for the t_q steps
/// ending at u", using three-valued logic for steps past the end.
/// Globally evaluates u in [shift, T+shift-2]; Initially only u = shift-1.
/// A failure at u is reported with anchor u-shift+1.
Verdict eval_response_past(Scope scope, const NormalizedResponse& nr, const Trace& trace,
                           const VariableDictionary& dict);

enum class Form { Future, Past };

/// Dispatches on the pattern. Throws DurationError or EvalError.
Verdict evaluate(const Requirement& req, const Trace& trace, const VariableDictionary& dict,
                 const StepConfig& cfg, Form form = Form::Future);

}  // namespace reqc
