#include "reqc/checker.hpp"

#include "reqc/render.hpp"

namespace reqc {

namespace {

bool numeric(ScalarType t) { return t != ScalarType::Bool; }

ScalarType promote(ScalarType a, ScalarType b) {
  return a == ScalarType::Int && b == ScalarType::Int ? ScalarType::Int : ScalarType::Float;
}

class TypeChecker {
 public:
  TypeChecker(const VariableDictionary& dict, std::vector<Diagnostic>* diags) : dict_(dict), diags_(diags) {}

  std::optional<ScalarType> type(const Expr& e) {
    switch (e.op) {
      case Op::BoolConst: return ScalarType::Bool;
      case Op::IntConst: return ScalarType::Int;
      case Op::FloatConst: return ScalarType::Float;
      case Op::Var: return variable(e);
      default: break;
    }
    std::vector<ScalarType> args;
    bool ok = true;
    for (const Expr& a : e.args) {
      auto t = type(a);
      if (!t) {
        ok = false;
        continue;
      }
      args.push_back(*t);
    }
    if (!ok) return std::nullopt;

    switch (e.op) {
      case Op::Not:
        if (args[0] != ScalarType::Bool) return fail(e, "operand of 'not' must be bool");
        return ScalarType::Bool;
      case Op::And:
      case Op::Or:
      case Op::Implies:
        if (args[0] != ScalarType::Bool || args[1] != ScalarType::Bool) {
          return fail(e, "operands of '" + std::string(op_name(e.op)) + "' must be bool");
        }
        return ScalarType::Bool;
      case Op::Eq:
        if (numeric(args[0]) != numeric(args[1])) {
          return fail(e, "cannot compare " + std::string(to_string(args[0])) + " with " +
                             std::string(to_string(args[1])));
        }
        if (args[0] == ScalarType::Float || args[1] == ScalarType::Float) {
          warn(e, "exact equality on float values");
        }
        return ScalarType::Bool;
      case Op::Lt:
      case Op::Le:
      case Op::Gt:
      case Op::Ge:
        if (!numeric(args[0]) || !numeric(args[1])) return fail(e, "relational operands must be numeric");
        return ScalarType::Bool;
      case Op::Add:
      case Op::Sub:
      case Op::Mul:
      case Op::Div:
      case Op::Min:
      case Op::Max:
        if (!numeric(args[0]) || !numeric(args[1])) {
          return fail(e, "operands of '" + std::string(op_name(e.op)) + "' must be numeric");
        }
        if (e.op == Op::Div && is_zero_literal(e.args[1])) warn(e, "division by constant zero");
        return promote(args[0], args[1]);
      case Op::Plus:
      case Op::Neg:
      case Op::Abs:
        if (!numeric(args[0])) return fail(e, "operand of '" + std::string(op_name(e.op)) + "' must be numeric");
        return args[0];
      case Op::LastUnary:
        return args[0];
      case Op::LastN:
        if (e.steps < 1) return fail(e, "step count of 'last' must be at least 1");
        return args[0];
      case Op::ExtractBit:
        if (args[0] != ScalarType::Int || args[1] != ScalarType::Int) {
          return fail(e, "bit extraction needs an int index and an int value");
        }
        if (e.args[0].op == Op::IntConst && e.args[0].literal.as_int() > 63) {
          return fail(e, "bit index " + std::to_string(e.args[0].literal.as_int()) + " is outside 0..63");
        }
        if (e.args[0].op == Op::Neg && e.args[0].args[0].op == Op::IntConst &&
            e.args[0].args[0].literal.as_int() != 0) {
          return fail(e, "bit index must not be negative");
        }
        return ScalarType::Bool;
      default:
        return std::nullopt;
    }
  }

 private:
  static bool is_zero_literal(const Expr& e) {
    return (e.op == Op::IntConst && e.literal.as_int() == 0) ||
           (e.op == Op::FloatConst && e.literal.as_float() == 0.0);
  }

  std::optional<ScalarType> variable(const Expr& e) {
    const VariableDecl* d = dict_.find(e.name);
    if (!d) return fail(e, "unknown identifier '" + e.name + "'");
    if (!d->is_scalar()) {
      return fail(e, "'" + e.name + "' is a " + std::to_string(d->rows) + "x" + std::to_string(d->cols) +
                         " array and cannot be used in an event");
    }
    return d->data_type;
  }

  std::nullopt_t fail(const Expr& e, std::string msg) {
    if (diags_) diags_->push_back(make_error(std::move(msg), e.loc));
    return std::nullopt;
  }

  void warn(const Expr& e, std::string msg) {
    if (diags_) diags_->push_back(make_warning(std::move(msg), e.loc));
  }

  const VariableDictionary& dict_;
  std::vector<Diagnostic>* diags_;
};

void check_event(const Expr& e, const VariableDictionary& dict, std::vector<Diagnostic>& out) {
  auto t = infer_type(e, dict, &out);
  if (t && *t != ScalarType::Bool) {
    out.push_back(make_error("event must be bool, found " + std::string(to_string(*t)), e.loc));
  }
}

void check_duration(const Duration& d, const char* what, bool allow_zero, const CheckOptions& opts,
                    std::vector<Diagnostic>& out) {
  if (d.magnitude == 0 && !allow_zero) {
    out.push_back(make_error(std::string(what) + " must be at least 1", d.loc));
    return;
  }
  if (opts.step && !try_to_steps(d, *opts.step)) {
    out.push_back(make_error("duration '" + render_duration(d) + "' is not a multiple of the " +
                                 std::to_string(opts.step->step_ms) + " ms step",
                             d.loc));
  }
}

}  // namespace

std::optional<ScalarType> infer_type(const Expr& e, const VariableDictionary& dict, std::vector<Diagnostic>* diags) {
  return TypeChecker(dict, diags).type(e);
}

std::vector<Diagnostic> check(const Requirement& req, const VariableDictionary& dict, const CheckOptions& opts) {
  std::vector<Diagnostic> out;
  if (opts.step && opts.step->step_ms < 1) {
    out.push_back(make_error("step size must be at least 1 ms", req.loc));
    return out;
  }
  if (req.is_invariant()) {
    check_event(req.invariant().event, dict, out);
    return out;
  }
  const Response& r = req.response();
  check_event(r.trigger, dict, out);
  check_duration(r.trigger_duration, "trigger duration", false, opts, out);
  check_duration(r.delay, "delay", true, opts, out);
  check_event(r.response, dict, out);
  check_duration(r.response_duration, "response duration", false, opts, out);
  return out;
}

}  // namespace reqc
