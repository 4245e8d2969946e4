#include "reqc/render.hpp"

namespace reqc {

namespace {

// Binding strength of the construct a node renders as; larger binds tighter.
enum Level : int {
  kImplies = 1,
  kOr = 2,
  kAnd = 3,
  kEquality = 4,
  kRelational = 5,
  kAdditive = 6,
  kMultiplicative = 7,
  kUnary = 8,
  kPrimary = 9,
};

int level(const Expr& e) {
  switch (e.op) {
    case Op::Implies: return kImplies;
    case Op::Or: return kOr;
    case Op::And: return kAnd;
    case Op::Eq: return kEquality;
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
    case Op::Not: return kRelational;
    case Op::Add:
    case Op::Sub: return kAdditive;
    case Op::Mul:
    case Op::Div: return kMultiplicative;
    case Op::Plus:
    case Op::Neg: return kUnary;
    default: return kPrimary;
  }
}

std::string_view spelling(Op op) {
  switch (op) {
    case Op::Implies: return "implies";
    case Op::Or: return "or";
    case Op::And: return "and";
    case Op::Eq: return "is equal to";
    case Op::Lt: return "is less than";
    case Op::Le: return "is less or equal to";
    case Op::Gt: return "is greater than";
    case Op::Ge: return "is greater or equal to";
    case Op::Add: return "plus";
    case Op::Sub: return "minus";
    case Op::Mul: return "multiplied with";
    case Op::Div: return "divided by";
    default: return "?";
  }
}

struct Rendered {
  std::string text;
  // True when the text ends in a textual prefix function whose operand would
  // swallow a following arithmetic operator.
  bool open = false;
};

class Renderer {
 public:
  explicit Renderer(bool parenthesize) : all_(parenthesize) {}

  Rendered node(const Expr& e) {
    Rendered r = bare(e);
    if (all_ && !is_leaf(e.op)) return wrap(std::move(r));
    return r;
  }

 private:
  static Rendered wrap(Rendered r) { return {"(" + r.text + ")", false}; }

  // Renders `child` so that it parses as a single operand requiring at least
  // `min_level` binding strength.
  Rendered operand(const Expr& child, int min_level) {
    Rendered r = node(child);
    if (!all_ && level(child) < min_level) return wrap(std::move(r));
    return r;
  }

  Rendered literal(const Expr& e) {
    std::string s = to_string(e.literal);
    if (e.op == Op::BoolConst) s = e.literal.as_bool() ? "TRUE" : "FALSE";
    if (!s.empty() && s.front() == '-') s = "minus " + s.substr(1);
    return {s, false};
  }

  Rendered bare(const Expr& e) {
    switch (e.op) {
      case Op::BoolConst:
      case Op::IntConst:
      case Op::FloatConst:
        return literal(e);
      case Op::Var:
        return {e.name, false};
      case Op::Implies:
      case Op::Or:
      case Op::And:
      case Op::Eq:
      case Op::Add:
      case Op::Sub:
      case Op::Mul:
      case Op::Div: {
        int lv = level(e);
        Rendered lhs = operand(e.args[0], lv);
        if (!all_ && lhs.open && lv >= kAdditive) lhs = wrap(std::move(lhs));
        Rendered rhs = operand(e.args[1], lv + 1);
        return {lhs.text + " " + std::string(spelling(e.op)) + " " + rhs.text, rhs.open};
      }
      case Op::Lt:
      case Op::Le:
      case Op::Gt:
      case Op::Ge: {
        Rendered lhs = operand(e.args[0], kAdditive);
        Rendered rhs = operand(e.args[1], kAdditive);
        return {lhs.text + " " + std::string(spelling(e.op)) + " " + rhs.text, rhs.open};
      }
      case Op::Not: {
        Rendered a = operand(e.args[0], kRelational);
        return {"not " + a.text, a.open};
      }
      case Op::Plus:
      case Op::Neg: {
        Rendered a = operand(e.args[0], kUnary);
        return {(e.op == Op::Plus ? "plus " : "minus ") + a.text, a.open};
      }
      case Op::Abs: {
        Rendered a = operand(e.args[0], kAdditive);
        return {"the absolute value of " + a.text, true};
      }
      case Op::Min:
      case Op::Max: {
        Rendered a = operand(e.args[0], kAdditive);
        Rendered b = operand(e.args[1], kAdditive);
        std::string head = e.op == Op::Min ? "the minimum of " : "the maximum of ";
        return {head + a.text + " and " + b.text, true};
      }
      case Op::LastUnary: {
        Rendered a = operand(e.args[0], kAdditive);
        return {"the previous value of " + a.text, true};
      }
      case Op::LastN: {
        Rendered a = operand(e.args[0], kAdditive);
        return {"the value of " + a.text + " " + std::to_string(e.steps) + " steps ago", false};
      }
      case Op::ExtractBit: {
        Rendered i = operand(e.args[0], kAdditive);
        Rendered v = operand(e.args[1], kAdditive);
        return {"bit " + i.text + " of " + v.text, true};
      }
    }
    return {"?", false};
  }

  bool all_;
};

}  // namespace

std::string render_event(const Expr& e, bool parenthesize) {
  return Renderer(parenthesize).node(e).text;
}

std::string render_duration(const Duration& d) {
  std::string s = std::to_string(d.magnitude) + " ";
  bool one = d.magnitude == 1;
  switch (d.unit) {
    case TimeUnit::Steps: s += one ? "step" : "steps"; break;
    case TimeUnit::Milliseconds: s += one ? "millisecond" : "milliseconds"; break;
    case TimeUnit::Seconds: s += one ? "second" : "seconds"; break;
    case TimeUnit::Minutes: s += one ? "minute" : "minutes"; break;
    case TimeUnit::Hours: s += one ? "hour" : "hours"; break;
  }
  return s;
}

std::string render_requirement(const Requirement& r, bool parenthesize) {
  std::string s = r.scope == Scope::Initially ? "At system start, " : "At each time step, ";
  if (r.is_invariant()) {
    s += "[" + render_event(r.invariant().event, parenthesize) + "] holds.";
    return s;
  }
  const Response& p = r.response();
  s += "if [" + render_event(p.trigger, parenthesize) + "] has been valid for [" +
       render_duration(p.trigger_duration) + "], then in response, after a delay of [" +
       render_duration(p.delay) + "], [" + render_event(p.response, parenthesize) + "] is valid for [" +
       render_duration(p.response_duration) + "].";
  return s;
}

}  // namespace reqc
