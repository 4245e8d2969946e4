#include "reqc/c_monitor.hpp"

#include <cmath>
#include <map>
#include <set>

#include "reqc/render.hpp"
#include "reqc/semantics.hpp"

namespace reqc {

namespace cmon {

Expr Expr::lit(Value v) {
  Expr e;
  e.kind = Kind::Literal;
  e.type = v.type();
  e.literal = v;
  return e;
}

Expr Expr::var(std::string name, ScalarType type) {
  Expr e;
  e.kind = Kind::Var;
  e.name = std::move(name);
  e.type = type;
  return e;
}

Expr Expr::element(std::string array, Expr index, ScalarType type) {
  Expr e;
  e.kind = Kind::Element;
  e.name = std::move(array);
  e.args.push_back(std::move(index));
  e.type = type;
  return e;
}

Expr Expr::apply(Op op, std::vector<Expr> args, ScalarType type) {
  Expr e;
  e.kind = Kind::Apply;
  e.op = op;
  e.args = std::move(args);
  e.type = type;
  return e;
}

Expr Expr::select(Expr cond, Expr then, Expr otherwise) {
  Expr e;
  e.kind = Kind::Select;
  e.type = then.type;
  e.args = {std::move(cond), std::move(then), std::move(otherwise)};
  return e;
}

Expr Expr::mod(Expr a, Expr b) {
  Expr e;
  e.kind = Kind::Mod;
  e.type = ScalarType::Int;
  e.args = {std::move(a), std::move(b)};
  return e;
}

Stmt Stmt::assign(std::string target, Expr value) {
  Stmt s;
  s.kind = Kind::Assign;
  s.target = std::move(target);
  s.value = std::move(value);
  return s;
}

Stmt Stmt::assign_element(std::string array, Expr index, Expr value) {
  Stmt s;
  s.kind = Kind::AssignElement;
  s.target = std::move(array);
  s.index = std::move(index);
  s.value = std::move(value);
  return s;
}

Stmt Stmt::fill(std::string array, std::int64_t length, Expr value) {
  Stmt s;
  s.kind = Kind::Fill;
  s.target = std::move(array);
  s.length = length;
  s.value = std::move(value);
  return s;
}

Stmt Stmt::check(Expr guard, Expr must_hold) {
  Stmt s;
  s.kind = Kind::Check;
  s.index = std::move(guard);
  s.value = std::move(must_hold);
  return s;
}

Stmt Stmt::comment(std::string text) {
  Stmt s;
  s.kind = Kind::Comment;
  s.text = std::move(text);
  return s;
}

const Var* Monitor::find(const std::string& name) const {
  for (const Var& v : vars) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

}  // namespace cmon

namespace {

using cmon::Role;
using CExpr = cmon::Expr;
using CStmt = cmon::Stmt;

ScalarType result_type(Op op, ScalarType a, ScalarType b) {
  switch (op) {
    case Op::Not:
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::Eq:
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
    case Op::ExtractBit:
      return ScalarType::Bool;
    case Op::Neg:
    case Op::Abs:
    case Op::Plus:
      return a;
    default:
      return a == ScalarType::Int && b == ScalarType::Int ? ScalarType::Int : ScalarType::Float;
  }
}

std::string steps_text(std::int64_t n) { return std::to_string(n) + (n == 1 ? " step" : " steps"); }

CExpr int_lit(std::int64_t v) { return CExpr::lit(Value::integer(v)); }

CExpr apply2(Op op, CExpr a, CExpr b) {
  ScalarType t = result_type(op, a.type, b.type);
  return CExpr::apply(op, {std::move(a), std::move(b)}, t);
}

class MonitorBuilder {
 public:
  MonitorBuilder(cmon::Monitor& m, const VariableDictionary& dict) : m_(m), dict_(dict) {}

  CExpr event(const Expr& e) {
    switch (e.op) {
      case Op::BoolConst:
      case Op::IntConst:
      case Op::FloatConst:
        return CExpr::lit(e.literal);
      case Op::Var:
        return variable(e.name);
      case Op::Plus:
        return event(e.args[0]);
      case Op::LastUnary:
      case Op::LastN: {
        CExpr operand = event(e.args[0]);
        std::int64_t n = e.op == Op::LastN ? e.steps : 1;
        std::string h = "hist" + std::to_string(history_++);
        cmon::Var arr;
        arr.name = h;
        arr.type = operand.type;
        arr.role = Role::State;
        arr.length = n;
        arr.init = Value::zero(operand.type);
        m_.vars.push_back(arr);
        std::string idx = h + "_pos";
        state(idx, ScalarType::Int, Value::integer(0), true);
        m_.init.push_back(CStmt::fill(h, n, prehistory(e.args[0])));
        CExpr pos = CExpr::var(idx, ScalarType::Int);
        CExpr out = temp(CExpr::element(h, pos, operand.type));
        updates_.push_back(CStmt::assign_element(h, pos, operand));
        updates_.push_back(CStmt::assign(idx, CExpr::mod(apply2(Op::Add, pos, int_lit(1)), int_lit(n))));
        return out;
      }
      default:
        break;
    }
    std::vector<CExpr> args;
    for (const Expr& a : e.args) args.push_back(event(a));
    ScalarType t = result_type(e.op, args[0].type, args.size() > 1 ? args[1].type : args[0].type);
    return temp(CExpr::apply(e.op, std::move(args), t));
  }

  CExpr temp(CExpr value) {
    std::string name = "t" + std::to_string(temps_++);
    cmon::Var v;
    v.name = name;
    v.type = value.type;
    v.role = Role::Temp;
    v.init = Value::zero(value.type);
    m_.vars.push_back(v);
    ScalarType t = value.type;
    m_.step.push_back(CStmt::assign(name, std::move(value)));
    return CExpr::var(name, t);
  }

  CExpr state(const std::string& name, ScalarType type, Value init, bool counter) {
    cmon::Var v;
    v.name = name;
    v.type = type;
    v.role = Role::State;
    v.init = init;
    v.counter = counter;
    m_.vars.push_back(v);
    return CExpr::var(name, type);
  }

  // Saturating run-length counter of `cond`, capped at `cap`.
  CExpr run_length(const std::string& name, const CExpr& cond, std::int64_t cap) {
    CExpr run = state(name, ScalarType::Int, Value::integer(0), true);
    m_.step.push_back(CStmt::assign(
        name, CExpr::select(cond,
                            CExpr::select(apply2(Op::Lt, run, int_lit(cap)), apply2(Op::Add, run, int_lit(1)),
                                          int_lit(cap)),
                            int_lit(0))));
    return run;
  }

  void flush_updates() {
    for (CStmt& s : updates_) m_.step.push_back(std::move(s));
    updates_.clear();
  }

 private:
  CExpr variable(const std::string& name) {
    const VariableDecl* d = dict_.find(name);
    if (!d) throw ExportError("unknown variable '" + name + "'");
    std::string prefix = d->kind == VariableKind::Signal         ? "in_"
                         : d->kind == VariableKind::Calibratable ? "cal_"
                                                                 : "k_";
    std::string cname = prefix + name;
    if (!m_.find(cname)) {
      cmon::Var v;
      v.name = cname;
      v.type = d->data_type;
      v.role = d->kind == VariableKind::Signal         ? Role::Input
               : d->kind == VariableKind::Calibratable ? Role::Calibration
                                                       : Role::Constant;
      v.source = name;
      v.min = d->min;
      v.max = d->max;
      v.init = d->kind == VariableKind::Constant ? d->default_value() : d->initial_value();
      m_.vars.push_back(v);
    }
    return CExpr::var(cname, d->data_type);
  }

  CExpr prehistory(const Expr& e) {
    switch (e.op) {
      case Op::BoolConst:
      case Op::IntConst:
      case Op::FloatConst:
        return CExpr::lit(e.literal);
      case Op::Var: {
        const VariableDecl* d = dict_.find(e.name);
        if (d && d->kind == VariableKind::Signal) return CExpr::lit(d->initial_value());
        return variable(e.name);
      }
      case Op::Plus:
      case Op::LastUnary:
      case Op::LastN:
        return prehistory(e.args[0]);
      default:
        break;
    }
    std::vector<CExpr> args;
    for (const Expr& a : e.args) args.push_back(prehistory(a));
    ScalarType t = result_type(e.op, args[0].type, args.size() > 1 ? args[1].type : args[0].type);
    return CExpr::apply(e.op, std::move(args), t);
  }

  cmon::Monitor& m_;
  const VariableDictionary& dict_;
  std::vector<CStmt> updates_;
  int temps_ = 0;
  int history_ = 0;
};

}  // namespace

cmon::Monitor build_c_monitor(const Requirement& req, const VariableDictionary& dict, const StepConfig& cfg) {
  cmon::Monitor m;
  m.requirement_id = req.id;
  m.text = render_requirement(req, true);
  MonitorBuilder b(m, dict);

  std::int64_t first_checked = 0;  // Globally: first step at which the check applies
  std::int64_t initial_step = 0;   // Initially: the single checked step
  CExpr ok;
  if (req.is_invariant()) {
    m.step.push_back(CStmt::comment("event"));
    ok = b.event(req.invariant().event);
    first_checked = 1;
    initial_step = 0;
  } else {
    NormalizedResponse nr = normalize(req.response(), cfg);
    m.step.push_back(CStmt::comment("trigger"));
    CExpr p = b.event(nr.trigger);
    m.step.push_back(CStmt::comment("response"));
    CExpr q = b.event(nr.response);
    m.step.push_back(CStmt::comment("trigger held for " + steps_text(nr.t_p)));
    CExpr run_p = b.run_length("trigger_run", p, nr.t_p);
    CExpr triggered = b.temp(apply2(Op::Ge, run_p, int_lit(nr.t_p)));
    std::int64_t len = nr.t_d + nr.t_q;
    m.step.push_back(CStmt::comment("completed triggers, delayed by " + steps_text(len)));
    cmon::Var pipe;
    pipe.name = "pipe";
    pipe.type = ScalarType::Bool;
    pipe.role = cmon::Role::State;
    pipe.length = len;
    pipe.init = Value::boolean(false);
    m.vars.push_back(pipe);
    CExpr pos = b.state("pipe_pos", ScalarType::Int, Value::integer(0), true);
    CExpr delayed = b.temp(CExpr::element("pipe", pos, ScalarType::Bool));
    m.step.push_back(CStmt::assign_element("pipe", pos, triggered));
    m.step.push_back(CStmt::assign("pipe_pos", CExpr::mod(apply2(Op::Add, pos, int_lit(1)), int_lit(len))));
    m.step.push_back(CStmt::comment("response held for " + steps_text(nr.t_q)));
    CExpr run_q = b.run_length("response_run", q, nr.t_q);
    ok = b.temp(apply2(Op::Implies, delayed, apply2(Op::Ge, run_q, int_lit(nr.t_q))));
    first_checked = nr.shift();
    initial_step = nr.shift() - 1;
  }

  CExpr step = b.state("step", ScalarType::Int, Value::integer(0), true);
  std::int64_t cap = 0;
  if (req.scope == Scope::Globally) {
    m.step.push_back(CStmt::check(apply2(Op::Ge, step, int_lit(first_checked)), ok));
    cap = first_checked;
  } else {
    m.step.push_back(CStmt::check(apply2(Op::Eq, step, int_lit(initial_step)), ok));
    cap = initial_step + 1;
  }
  b.flush_updates();
  m.step.push_back(CStmt::assign(
      "step", CExpr::select(apply2(Op::Lt, step, int_lit(cap)), apply2(Op::Add, step, int_lit(1)), int_lit(cap))));
  return m;
}

namespace {

struct CType {
  std::string name;
  std::string nondet;
};

CType int_ctype(int bits) {
  switch (bits) {
    case 8: return {"signed char", "__VERIFIER_nondet_char"};
    case 16: return {"short", "__VERIFIER_nondet_short"};
    case 64: return {"long long", "__VERIFIER_nondet_longlong"};
    default: return {"int", "__VERIFIER_nondet_int"};
  }
}

CType bool_ctype(const std::string& name) {
  if (name == "_Bool") return {"_Bool", "__VERIFIER_nondet_bool"};
  if (name == "int") return {"int", "__VERIFIER_nondet_int"};
  return {"unsigned char", "__VERIFIER_nondet_uchar"};
}

CType float_ctype(const std::string& name) {
  if (name == "float") return {"float", "__VERIFIER_nondet_float"};
  return {"double", "__VERIFIER_nondet_double"};
}

class Printer {
 public:
  Printer(const cmon::Monitor& m, const CWidths& w) : m_(m), w_(w) {
    if (w.int_bits != 8 && w.int_bits != 16 && w.int_bits != 32 && w.int_bits != 64) {
      throw ExportError("unsupported int width " + std::to_string(w.int_bits));
    }
    if (w.bool_type != "unsigned char" && w.bool_type != "_Bool" && w.bool_type != "int") {
      throw ExportError("unsupported bool type '" + w.bool_type + "'");
    }
    if (w.float_type != "double" && w.float_type != "float") {
      throw ExportError("unsupported float type '" + w.float_type + "'");
    }
  }

  std::string print() {
    check_widths();
    std::string body;
    body += "int main(void) {\n";
    for (const cmon::Var& v : m_.vars) {
      if (v.role != Role::Calibration) continue;
      CType t = dict_type(v.type);
      body += "  " + v.name + " = " + t.nondet + "();\n";
      body += assumptions(v, "  ");
    }
    for (const CStmt& s : m_.init) body += stmt(s, "  ");
    body += "  for (;;) {\n";
    for (const cmon::Var& v : m_.vars) {
      if (v.role != Role::Input) continue;
      CType t = dict_type(v.type);
      body += "    " + v.name + " = " + t.nondet + "();\n";
      body += assumptions(v, "    ");
    }
    for (const CStmt& s : m_.step) body += stmt(s, "    ");
    body += "  }\n";
    body += "  return 0;\n";
    body += "}\n";

    std::string out;
    out += "/* Monitor harness for requirement " + m_.requirement_id + ".\n";
    out += " * " + m_.text + "\n";
    out += " * Reaching __VERIFIER_error() means the requirement is violated.\n";
    out += " */\n\n";
    out += "extern void __VERIFIER_error(void);\n";
    out += "extern void __VERIFIER_assume(int cond);\n";
    for (const std::string& fn : nondet_) {
      std::string ret = fn == "__VERIFIER_nondet_char"       ? "char"
                        : fn == "__VERIFIER_nondet_short"    ? "short"
                        : fn == "__VERIFIER_nondet_longlong" ? "long long"
                        : fn == "__VERIFIER_nondet_uchar"    ? "unsigned char"
                        : fn == "__VERIFIER_nondet_bool"     ? "_Bool"
                        : fn == "__VERIFIER_nondet_float"    ? "float"
                        : fn == "__VERIFIER_nondet_double"   ? "double"
                                                             : "int";
      out += "extern " + ret + " " + fn + "(void);\n";
    }
    out += "\n";
    for (const std::string& h : helpers_) out += helper_definition(h);
    if (!helpers_.empty()) out += "\n";
    out += declarations();
    out += "\n";
    out += body;
    return out;
  }

 private:
  CType dict_type(ScalarType t) {
    CType c;
    switch (t) {
      case ScalarType::Bool: c = bool_ctype(w_.bool_type); break;
      case ScalarType::Int: c = int_ctype(w_.int_bits); break;
      case ScalarType::Float: c = float_ctype(w_.float_type); break;
    }
    nondet_.insert(c.nondet);
    return c;
  }

  std::string internal_type(const cmon::Var& v) const {
    if (v.counter) return "long long";
    switch (v.type) {
      case ScalarType::Bool: return "unsigned char";
      case ScalarType::Int: return "long long";
      case ScalarType::Float: return "double";
    }
    return "int";
  }

  void check_widths() const {
    if (w_.int_bits == 64) return;
    std::int64_t hi = (std::int64_t{1} << (w_.int_bits - 1)) - 1;
    std::int64_t lo = -hi - 1;
    for (const cmon::Var& v : m_.vars) {
      if (v.type != ScalarType::Int || v.role == Role::State || v.role == Role::Temp) continue;
      for (const auto& val : {v.min, v.max, std::optional<Value>(v.init)}) {
        if (val && (val->as_int() < lo || val->as_int() > hi)) {
          throw ExportError("value " + to_string(*val) + " of '" + v.source + "' does not fit a " +
                            std::to_string(w_.int_bits) + "-bit int");
        }
      }
    }
  }

  std::string assumptions(const cmon::Var& v, const std::string& indent) {
    std::string out;
    if (v.type == ScalarType::Bool) {
      if (w_.bool_type != "_Bool") out += indent + "__VERIFIER_assume(" + v.name + " == 0 || " + v.name + " == 1);\n";
      return out;
    }
    std::string cond;
    if (v.min) cond += v.name + " >= " + literal(*v.min);
    if (v.max) cond += (cond.empty() ? "" : " && ") + v.name + " <= " + literal(*v.max);
    if (!cond.empty()) out += indent + "__VERIFIER_assume(" + cond + ");\n";
    return out;
  }

  std::string declarations() {
    std::string out;
    auto section = [&](Role role, const char* title) {
      bool any = false;
      for (const cmon::Var& v : m_.vars) {
        if (v.role != role) continue;
        if (!any) out += std::string("/* ") + title + " */\n";
        any = true;
        switch (role) {
          case Role::Input:
          case Role::Calibration:
            out += "static " + dict_type(v.type).name + " " + v.name + ";\n";
            break;
          case Role::Constant:
            out += "static const " + dict_type(v.type).name + " " + v.name + " = " + literal(v.init) + ";\n";
            break;
          case Role::State:
            if (v.length > 0) {
              out += "static " + internal_type(v) + " " + v.name + "[" + std::to_string(v.length) + "];\n";
            } else {
              out += "static " + internal_type(v) + " " + v.name + " = " + literal(v.init) + ";\n";
            }
            break;
          case Role::Temp:
            out += "static " + internal_type(v) + " " + v.name + ";\n";
            break;
        }
      }
    };
    section(Role::Input, "inputs, fresh every step");
    section(Role::Calibration, "calibrations, chosen once");
    section(Role::Constant, "constants");
    section(Role::State, "monitor state");
    section(Role::Temp, "per-step values");
    return out;
  }

  static std::string literal(const Value& v) {
    switch (v.type()) {
      case ScalarType::Bool: return v.as_bool() ? "1" : "0";
      case ScalarType::Int: {
        std::int64_t i = v.as_int();
        if (i == INT64_MIN) return "(-9223372036854775807LL - 1)";
        std::string digits = std::to_string(i < 0 ? -i : i);
        if (i > INT32_MAX || i < INT32_MIN) digits += "LL";
        return i < 0 ? "(-" + digits + ")" : digits;
      }
      case ScalarType::Float: {
        double d = v.as_float();
        std::string s = format_float(d < 0 ? -d : d);
        return d < 0 || std::signbit(d) ? "(-" + s + ")" : s;
      }
    }
    return "0";
  }

  std::string operand(const CExpr& e) {
    if (e.kind == CExpr::Kind::Var && e.type == ScalarType::Int) {
      const cmon::Var* v = m_.find(e.name);
      if (v && (v->role == Role::Input || v->role == Role::Calibration || v->role == Role::Constant)) {
        return "(long long)" + e.name;
      }
    }
    return expr(e);
  }

  std::string helper(const std::string& base, const CExpr& e) {
    bool f = false;
    for (const CExpr& a : e.args) f = f || a.type == ScalarType::Float;
    std::string name = "reqc_" + base + (f ? "_f" : "_i");
    helpers_.insert(name);
    return name;
  }

  static std::string helper_definition(const std::string& name) {
    if (name == "reqc_abs_i") return "static long long reqc_abs_i(long long x) { return x < 0 ? -x : x; }\n";
    if (name == "reqc_abs_f") return "static double reqc_abs_f(double x) { return x < 0 ? -x : x; }\n";
    if (name == "reqc_min_i") return "static long long reqc_min_i(long long a, long long b) { return a <= b ? a : b; }\n";
    if (name == "reqc_max_i") return "static long long reqc_max_i(long long a, long long b) { return a >= b ? a : b; }\n";
    if (name == "reqc_min_f") return "static double reqc_min_f(double a, double b) { return a <= b ? a : b; }\n";
    if (name == "reqc_max_f") return "static double reqc_max_f(double a, double b) { return a >= b ? a : b; }\n";
    if (name == "reqc_bit_i") {
      return "static unsigned char reqc_bit_i(long long i, long long x) {\n"
             "  return (unsigned char)(((unsigned long long)x >> i) & 1u);\n"
             "}\n";
    }
    return "";
  }

  std::string expr(const CExpr& e) {
    switch (e.kind) {
      case CExpr::Kind::Literal: return literal(e.literal);
      case CExpr::Kind::Var: return e.name;
      case CExpr::Kind::Element: return e.name + "[" + expr(e.args[0]) + "]";
      case CExpr::Kind::Select:
        return "(" + expr(e.args[0]) + " ? " + expr(e.args[1]) + " : " + expr(e.args[2]) + ")";
      case CExpr::Kind::Mod: return "(" + expr(e.args[0]) + " % " + expr(e.args[1]) + ")";
      case CExpr::Kind::Apply: break;
    }
    auto bin = [&](const char* op) { return "(" + operand(e.args[0]) + " " + op + " " + operand(e.args[1]) + ")"; };
    switch (e.op) {
      case Op::Not: return "!" + expr(e.args[0]);
      case Op::And: return bin("&&");
      case Op::Or: return bin("||");
      case Op::Implies: return "(!" + expr(e.args[0]) + " || " + expr(e.args[1]) + ")";
      case Op::Eq: return bin("==");
      case Op::Lt: return bin("<");
      case Op::Le: return bin("<=");
      case Op::Gt: return bin(">");
      case Op::Ge: return bin(">=");
      case Op::Add: return bin("+");
      case Op::Sub: return bin("-");
      case Op::Mul: return bin("*");
      case Op::Div: return bin("/");
      case Op::Plus: return expr(e.args[0]);
      case Op::Neg: return "(-" + operand(e.args[0]) + ")";
      case Op::Abs: return helper("abs", e) + "(" + operand(e.args[0]) + ")";
      case Op::Min: return helper("min", e) + "(" + operand(e.args[0]) + ", " + operand(e.args[1]) + ")";
      case Op::Max: return helper("max", e) + "(" + operand(e.args[0]) + ", " + operand(e.args[1]) + ")";
      case Op::ExtractBit: {
        helpers_.insert("reqc_bit_i");
        return "reqc_bit_i(" + operand(e.args[0]) + ", " + operand(e.args[1]) + ")";
      }
      default: return "0";
    }
  }

  static std::string strip_parens(std::string s) {
    if (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
      int depth = 0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')') --depth;
        if (depth == 0 && i + 1 < s.size()) return s;
      }
      return s.substr(1, s.size() - 2);
    }
    return s;
  }

  std::string stmt(const CStmt& s, const std::string& ind) {
    switch (s.kind) {
      case CStmt::Kind::Comment: return ind + "/* " + s.text + " */\n";
      case CStmt::Kind::Assign: return ind + s.target + " = " + strip_parens(expr(s.value)) + ";\n";
      case CStmt::Kind::AssignElement:
        return ind + s.target + "[" + expr(s.index) + "] = " + strip_parens(expr(s.value)) + ";\n";
      case CStmt::Kind::Fill:
        return ind + "for (long long i = 0; i < " + std::to_string(s.length) + "; ++i) " + s.target +
               "[i] = " + strip_parens(expr(s.value)) + ";\n";
      case CStmt::Kind::Check:
        return ind + "if (" + strip_parens(expr(s.index)) + ") {\n" + ind + "  if (!(" +
               strip_parens(expr(s.value)) + ")) __VERIFIER_error();\n" + ind + "}\n";
    }
    return "";
  }

  const cmon::Monitor& m_;
  const CWidths& w_;
  std::set<std::string> nondet_;
  std::set<std::string> helpers_;
};

}  // namespace

std::string print_c_harness(const cmon::Monitor& m, const CWidths& widths) {
  return Printer(m, widths).print();
}

}  // namespace reqc
