#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "reqc/diagnostic.hpp"
#include "reqc/value.hpp"

namespace reqc {

/// Node kinds of an event expression. Eq covers both boolean equality and the
/// relational `=`; the two are told apart by operand types during checking.
enum class Op {
  // leaves
  BoolConst,
  IntConst,
  FloatConst,
  Var,
  // boolean
  Not,
  And,
  Or,
  Implies,
  // relational
  Eq,
  Lt,
  Le,
  Gt,
  Ge,
  // arithmetic
  Add,
  Sub,
  Mul,
  Div,
  Plus,
  Neg,
  // functions
  Abs,
  Min,
  Max,
  LastUnary,
  LastN,
  ExtractBit,
};

std::string_view op_name(Op op);
int arity(Op op);
bool is_leaf(Op op);
bool is_relational(Op op);
bool is_logical(Op op);  // Not, And, Or, Implies

/// Event expression tree. Plain value type: copies are deep, equality is
/// structural and ignores source locations.
///
/// Literal nodes hold non-negative magnitudes; a negative number is a Neg
/// node over a literal, exactly as the grammar produces it.
struct Expr {
  Op op = Op::BoolConst;
  std::vector<Expr> args;
  Value literal;      // BoolConst / IntConst / FloatConst
  std::string name;   // Var
  std::int64_t steps = 0;  // LastN step count
  SourceLoc loc;

  static Expr boolean(bool b, SourceLoc loc = {});
  static Expr integer(std::int64_t i, SourceLoc loc = {});
  static Expr real(double d, SourceLoc loc = {});
  static Expr var(std::string name, SourceLoc loc = {});
  static Expr unary(Op op, Expr a, SourceLoc loc = {});
  static Expr binary(Op op, Expr a, Expr b, SourceLoc loc = {});
  static Expr last(Expr a, std::int64_t steps, SourceLoc loc = {});

  friend bool operator==(const Expr& a, const Expr& b);
};

/// Number of nodes in the tree.
std::size_t node_count(const Expr& e);

/// Variable names referenced by `e`, in first-occurrence order, deduplicated.
std::vector<std::string> referenced_variables(const Expr& e);

enum class TimeUnit { Steps, Milliseconds, Seconds, Minutes, Hours };

std::string_view to_string(TimeUnit u);

struct Duration {
  std::uint64_t magnitude = 1;
  TimeUnit unit = TimeUnit::Steps;
  SourceLoc loc;

  friend bool operator==(const Duration& a, const Duration& b) {
    return a.magnitude == b.magnitude && a.unit == b.unit;
  }
};

enum class Scope { Initially, Globally };

std::string_view to_string(Scope s);

struct Invariant {
  Expr event;

  friend bool operator==(const Invariant&, const Invariant&) = default;
};

/// "if [trigger] has been valid for [trigger_duration], then in response,
/// after a delay of [delay], [response] is valid for [response_duration]."
struct Response {
  Expr trigger;
  Duration trigger_duration;
  Duration delay;
  Expr response;
  Duration response_duration;

  friend bool operator==(const Response&, const Response&) = default;
};

using Pattern = std::variant<Invariant, Response>;

struct Requirement {
  std::string id;
  Scope scope = Scope::Globally;
  Pattern pattern;
  std::string source_text;
  SourceLoc loc;

  bool is_invariant() const { return std::holds_alternative<Invariant>(pattern); }
  const Invariant& invariant() const { return std::get<Invariant>(pattern); }
  const Response& response() const { return std::get<Response>(pattern); }
};

/// Scope and pattern equality; ignores id, source text and locations.
bool same_meaning(const Requirement& a, const Requirement& b);

}  // namespace reqc
