#include "reqc/ast.hpp"

#include <algorithm>

namespace reqc {

std::string_view op_name(Op op) {
  switch (op) {
    case Op::BoolConst: return "bool";
    case Op::IntConst: return "int";
    case Op::FloatConst: return "float";
    case Op::Var: return "var";
    case Op::Not: return "not";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Implies: return "implies";
    case Op::Eq: return "eq";
    case Op::Lt: return "lt";
    case Op::Le: return "le";
    case Op::Gt: return "gt";
    case Op::Ge: return "ge";
    case Op::Add: return "add";
    case Op::Sub: return "sub";
    case Op::Mul: return "mul";
    case Op::Div: return "div";
    case Op::Plus: return "plus";
    case Op::Neg: return "neg";
    case Op::Abs: return "abs";
    case Op::Min: return "min";
    case Op::Max: return "max";
    case Op::LastUnary: return "last";
    case Op::LastN: return "last-n";
    case Op::ExtractBit: return "extract-bit";
  }
  return "?";
}

int arity(Op op) {
  switch (op) {
    case Op::BoolConst:
    case Op::IntConst:
    case Op::FloatConst:
    case Op::Var:
      return 0;
    case Op::Not:
    case Op::Plus:
    case Op::Neg:
    case Op::Abs:
    case Op::LastUnary:
    case Op::LastN:
      return 1;
    default:
      return 2;
  }
}

bool is_leaf(Op op) { return arity(op) == 0; }

bool is_relational(Op op) {
  return op == Op::Eq || op == Op::Lt || op == Op::Le || op == Op::Gt || op == Op::Ge;
}

bool is_logical(Op op) {
  return op == Op::Not || op == Op::And || op == Op::Or || op == Op::Implies;
}

Expr Expr::boolean(bool b, SourceLoc loc) {
  Expr e;
  e.op = Op::BoolConst;
  e.literal = Value::boolean(b);
  e.loc = loc;
  return e;
}

Expr Expr::integer(std::int64_t i, SourceLoc loc) {
  Expr e;
  e.op = Op::IntConst;
  e.literal = Value::integer(i);
  e.loc = loc;
  return e;
}

Expr Expr::real(double d, SourceLoc loc) {
  Expr e;
  e.op = Op::FloatConst;
  e.literal = Value::real(d);
  e.loc = loc;
  return e;
}

Expr Expr::var(std::string name, SourceLoc loc) {
  Expr e;
  e.op = Op::Var;
  e.name = std::move(name);
  e.loc = loc;
  return e;
}

Expr Expr::unary(Op op, Expr a, SourceLoc loc) {
  Expr e;
  e.op = op;
  e.args.push_back(std::move(a));
  e.loc = loc;
  return e;
}

Expr Expr::binary(Op op, Expr a, Expr b, SourceLoc loc) {
  Expr e;
  e.op = op;
  e.args.reserve(2);
  e.args.push_back(std::move(a));
  e.args.push_back(std::move(b));
  e.loc = loc;
  return e;
}

Expr Expr::last(Expr a, std::int64_t steps, SourceLoc loc) {
  Expr e = unary(Op::LastN, std::move(a), loc);
  e.steps = steps;
  return e;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.op != b.op) return false;
  switch (a.op) {
    case Op::BoolConst:
    case Op::IntConst:
    case Op::FloatConst:
      return a.literal == b.literal;
    case Op::Var:
      return a.name == b.name;
    case Op::LastN:
      if (a.steps != b.steps) return false;
      break;
    default:
      break;
  }
  return a.args == b.args;
}

std::size_t node_count(const Expr& e) {
  std::size_t n = 1;
  for (const Expr& a : e.args) n += node_count(a);
  return n;
}

namespace {

void collect_vars(const Expr& e, std::vector<std::string>& out) {
  if (e.op == Op::Var) {
    if (std::find(out.begin(), out.end(), e.name) == out.end()) out.push_back(e.name);
    return;
  }
  for (const Expr& a : e.args) collect_vars(a, out);
}

}  // namespace

std::vector<std::string> referenced_variables(const Expr& e) {
  std::vector<std::string> out;
  collect_vars(e, out);
  return out;
}

std::string_view to_string(TimeUnit u) {
  switch (u) {
    case TimeUnit::Steps: return "steps";
    case TimeUnit::Milliseconds: return "milliseconds";
    case TimeUnit::Seconds: return "seconds";
    case TimeUnit::Minutes: return "minutes";
    case TimeUnit::Hours: return "hours";
  }
  return "?";
}

std::string_view to_string(Scope s) {
  return s == Scope::Initially ? "initially" : "globally";
}

bool same_meaning(const Requirement& a, const Requirement& b) {
  return a.scope == b.scope && a.pattern == b.pattern;
}

}  // namespace reqc
