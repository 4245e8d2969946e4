#include "reqc/semantics.hpp"

#include <algorithm>

#include "ops.hpp"
#include "reqc/render.hpp"

namespace reqc {

EvalError::EvalError(std::int64_t step, std::string subterm, const std::string& what)
    : Error("step " + std::to_string(step) + ": " + what + " in '" + subterm + "'"),
      step_(step),
      subterm_(std::move(subterm)) {}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::PassWithPending: return "pass_with_pending";
  }
  return "?";
}

namespace {

class SeriesEvaluator {
 public:
  SeriesEvaluator(const Trace& trace, const VariableDictionary& dict) : trace_(trace), dict_(dict) {}

  std::vector<Value> series(const Expr& e) {
    const std::size_t n = trace_.length;
    switch (e.op) {
      case Op::BoolConst:
      case Op::IntConst:
      case Op::FloatConst:
        return std::vector<Value>(n, e.literal);
      case Op::Var: {
        if (const auto* col = trace_.find(e.name)) return *col;
        return std::vector<Value>(n, fixed_value(e));
      }
      case Op::LastUnary:
      case Op::LastN: {
        std::vector<Value> inner = series(e.args[0]);
        Value init = prehistory(e.args[0]);
        auto k = static_cast<std::size_t>(e.op == Op::LastN ? e.steps : 1);
        std::vector<Value> out(n, init);
        for (std::size_t t = k; t < n; ++t) out[t] = inner[t - k];
        return out;
      }
      default:
        break;
    }
    std::vector<std::vector<Value>> args;
    for (const Expr& a : e.args) args.push_back(series(a));
    std::vector<Value> out;
    out.reserve(n);
    Value buf[2];
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t i = 0; i < args.size(); ++i) buf[i] = args[i][t];
      out.push_back(apply(e, buf, static_cast<std::int64_t>(t)));
    }
    return out;
  }

  Value prehistory(const Expr& e) {
    switch (e.op) {
      case Op::BoolConst:
      case Op::IntConst:
      case Op::FloatConst:
        return e.literal;
      case Op::Var: {
        const VariableDecl* d = dict_.find(e.name);
        if (!d) throw EvalError(-1, e.name, "unknown variable");
        if (d->kind == VariableKind::Signal) return d->initial_value();
        if (d->kind == VariableKind::Calibratable) {
          if (const auto* col = trace_.find(e.name); col && !col->empty()) return col->front();
        }
        return d->default_value();
      }
      case Op::LastUnary:
      case Op::LastN:
        return prehistory(e.args[0]);
      default:
        break;
    }
    Value buf[2];
    for (std::size_t i = 0; i < e.args.size(); ++i) buf[i] = prehistory(e.args[i]);
    return apply(e, buf, -1);
  }

 private:
  Value fixed_value(const Expr& e) {
    const VariableDecl* d = dict_.find(e.name);
    if (!d) throw EvalError(0, e.name, "unknown variable");
    if (d->kind == VariableKind::Signal) throw EvalError(0, e.name, "signal has no trace column");
    return d->default_value();
  }

  static Value apply(const Expr& e, const Value* args, std::int64_t t) {
    try {
      return ops::apply(e.op, args);
    } catch (const ops::Fault& f) {
      throw EvalError(t, render_event(e), f.what());
    }
  }

  const Trace& trace_;
  const VariableDictionary& dict_;
};

// Prefix counts of false entries, for O(1) window queries.
class FalseCounter {
 public:
  explicit FalseCounter(const std::vector<Value>& bools) : prefix_(bools.size() + 1, 0) {
    for (std::size_t i = 0; i < bools.size(); ++i) prefix_[i + 1] = prefix_[i] + (bools[i].as_bool() ? 0 : 1);
  }

  std::int64_t length() const { return static_cast<std::int64_t>(prefix_.size()) - 1; }

  // False entries in [lo, hi] ∩ [0, length).
  std::int64_t count(std::int64_t lo, std::int64_t hi) const {
    lo = std::max<std::int64_t>(lo, 0);
    hi = std::min(hi, length() - 1);
    if (lo > hi) return 0;
    return prefix_[static_cast<std::size_t>(hi + 1)] - prefix_[static_cast<std::size_t>(lo)];
  }

 private:
  std::vector<std::int64_t> prefix_;
};

enum class K { False, Unknown, True };

// Conjunction over [lo, hi] with steps past the trace end unknown.
K window(const FalseCounter& c, std::int64_t lo, std::int64_t hi) {
  if (c.count(lo, hi) > 0) return K::False;
  return hi >= c.length() ? K::Unknown : K::True;
}

K implies(K a, K b) {
  if (a == K::False || b == K::True) return K::True;
  if (a == K::True && b == K::False) return K::False;
  return K::Unknown;
}

void finish(Verdict& v) {
  if (!v.violations.empty()) {
    v.status = Status::Fail;
  } else {
    v.status = v.pending > 0 ? Status::PassWithPending : Status::Pass;
  }
}

std::vector<Value> bool_series(const Expr& e, const Trace& trace, const VariableDictionary& dict) {
  std::vector<Value> s = eval_series(e, trace, dict);
  for (const Value& v : s) {
    if (!v.is_bool()) throw EvalError(0, render_event(e), "event is not bool");
  }
  return s;
}

std::string window_text(std::int64_t lo, std::int64_t hi) {
  return lo == hi ? "step " + std::to_string(lo) : "steps " + std::to_string(lo) + ".." + std::to_string(hi);
}

}  // namespace

std::vector<Value> eval_series(const Expr& e, const Trace& trace, const VariableDictionary& dict) {
  return SeriesEvaluator(trace, dict).series(e);
}

Value eval_event(const Expr& e, const Trace& trace, const VariableDictionary& dict, std::int64_t t) {
  if (t < 0 || static_cast<std::size_t>(t) >= trace.length) {
    throw Error("step " + std::to_string(t) + " is outside the trace");
  }
  return eval_series(e, trace, dict)[static_cast<std::size_t>(t)];
}

Value eval_prehistory(const Expr& e, const Trace& trace, const VariableDictionary& dict) {
  return SeriesEvaluator(trace, dict).prehistory(e);
}

Verdict eval_invariant(Scope scope, const Expr& e, const Trace& trace, const VariableDictionary& dict) {
  std::vector<Value> s = bool_series(e, trace, dict);
  Verdict v;
  std::int64_t first = scope == Scope::Initially ? 0 : 1;
  std::int64_t last = scope == Scope::Initially ? 0 : static_cast<std::int64_t>(s.size()) - 1;
  for (std::int64_t t = first; t <= last && t < static_cast<std::int64_t>(s.size()); ++t) {
    if (!s[static_cast<std::size_t>(t)].as_bool()) {
      v.violations.push_back({t, t, "event is false at step " + std::to_string(t)});
    }
  }
  finish(v);
  return v;
}

Verdict eval_response_future(Scope scope, const NormalizedResponse& nr, const Trace& trace,
                             const VariableDictionary& dict) {
  FalseCounter p(bool_series(nr.trigger, trace, dict));
  std::vector<Value> q_values = bool_series(nr.response, trace, dict);
  FalseCounter q(q_values);
  const std::int64_t T = p.length();
  Verdict v;
  std::int64_t first = scope == Scope::Initially ? 0 : 1;
  std::int64_t last = scope == Scope::Initially ? 0 : T - 1;
  for (std::int64_t a = first; a <= last; ++a) {
    std::int64_t trig_end = a + nr.t_p - 1;
    if (p.count(a, trig_end) > 0) continue;
    bool complete = trig_end < T;
    std::int64_t ob_lo = a + nr.t_p + nr.t_d;
    std::int64_t ob_hi = a + nr.shift() - 1;
    if (complete && q.count(ob_lo, ob_hi) > 0) {
      std::int64_t s = ob_lo;
      while (q_values[static_cast<std::size_t>(s)].as_bool()) ++s;
      v.violations.push_back({a, s,
                              "trigger held at " + window_text(a, trig_end) + " but response is false at step " +
                                  std::to_string(s) + " (required at " + window_text(ob_lo, ob_hi) + ")"});
    } else if (!complete || ob_hi >= T) {
      ++v.pending;
    }
  }
  finish(v);
  return v;
}

Verdict eval_response_past(Scope scope, const NormalizedResponse& nr, const Trace& trace,
                           const VariableDictionary& dict) {
  FalseCounter p(bool_series(nr.trigger, trace, dict));
  FalseCounter q(bool_series(nr.response, trace, dict));
  const std::int64_t T = p.length();
  const std::int64_t shift = nr.shift();
  Verdict v;
  std::int64_t first = scope == Scope::Initially ? shift - 1 : shift;
  std::int64_t last = scope == Scope::Initially ? shift - 1 : T + shift - 2;
  for (std::int64_t u = first; u <= last; ++u) {
    std::int64_t p_hi = u - nr.t_d - nr.t_q;
    std::int64_t p_lo = p_hi - nr.t_p + 1;
    std::int64_t q_lo = u - nr.t_q + 1;
    K r = implies(window(p, p_lo, p_hi), window(q, q_lo, u));
    if (r == K::False) {
      v.violations.push_back({u - shift + 1, u,
                              "at step " + std::to_string(u) + ": trigger held at " + window_text(p_lo, p_hi) +
                                  " but response did not hold at " + window_text(q_lo, u)});
    } else if (r == K::Unknown) {
      ++v.pending;
    }
  }
  finish(v);
  return v;
}

Verdict evaluate(const Requirement& req, const Trace& trace, const VariableDictionary& dict, const StepConfig& cfg,
                 Form form) {
  if (req.is_invariant()) return eval_invariant(req.scope, req.invariant().event, trace, dict);
  NormalizedResponse nr = normalize(req.response(), cfg);
  return form == Form::Future ? eval_response_future(req.scope, nr, trace, dict)
                              : eval_response_past(req.scope, nr, trace, dict);
}

}  // namespace reqc
