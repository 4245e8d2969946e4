#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "reqc/ast.hpp"
#include "reqc/dictionary.hpp"
#include "reqc/export_error.hpp"
#include "reqc/timing.hpp"
#include "reqc/value.hpp"

namespace reqc {

/// Statement-level description of the monitor emitted into C harnesses. The
/// C printer and the test interpreter both work from this representation, so
/// what is tested is what gets printed.
namespace cmon {

struct Expr {
  enum class Kind { Literal, Var, Element, Apply, Select, Mod };

  Kind kind = Kind::Literal;
  Value literal;          // Literal
  std::string name;       // Var, Element
  Op op = Op::BoolConst;  // Apply: any non-leaf, non-temporal event operator
  std::vector<Expr> args; // Element: {index}; Apply: operands; Select: {cond, then, else}; Mod: {a, b}
  ScalarType type = ScalarType::Bool;

  static Expr lit(Value v);
  static Expr var(std::string name, ScalarType type);
  static Expr element(std::string array, Expr index, ScalarType type);
  static Expr apply(Op op, std::vector<Expr> args, ScalarType type);
  static Expr select(Expr cond, Expr then, Expr otherwise);
  static Expr mod(Expr a, Expr b);
};

struct Stmt {
  enum class Kind { Assign, AssignElement, Fill, Check, Comment };

  Kind kind = Kind::Comment;
  std::string target;  // Assign, AssignElement, Fill
  Expr index;          // AssignElement; Check: the scope guard
  Expr value;          // Assign, AssignElement, Fill; Check: the condition that must hold
  std::int64_t length = 0;  // Fill
  std::string text;         // Comment

  static Stmt assign(std::string target, Expr value);
  static Stmt assign_element(std::string array, Expr index, Expr value);
  static Stmt fill(std::string array, std::int64_t length, Expr value);
  /// Reaches the error call when `guard` holds and `must_hold` does not.
  static Stmt check(Expr guard, Expr must_hold);
  static Stmt comment(std::string text);
};

enum class Role { Input, Calibration, Constant, State, Temp };

struct Var {
  std::string name;
  ScalarType type = ScalarType::Bool;
  Role role = Role::Temp;
  std::int64_t length = 0;  // > 0 for arrays
  Value init;               // State and Constant
  std::string source;       // dictionary name for inputs, calibrations and constants
  std::optional<Value> min;
  std::optional<Value> max;
  bool counter = false;     // step counters, run lengths and ring indices
};

struct Monitor {
  std::string requirement_id;
  std::string text;  // rendered requirement
  std::vector<Var> vars;
  std::vector<Stmt> init;  // once, after calibrations are chosen
  std::vector<Stmt> step;  // every iteration, after inputs are read

  const Var* find(const std::string& name) const;
};

}  // namespace cmon

/// Builds the counter automaton for a checked requirement: event temporaries
/// in dependency order, ring buffers for `last`, and for responses a
/// saturating trigger run-length counter, a ring buffer of t_d + t_q
/// completed-trigger flags and a saturating response run-length counter. The
/// error statement fires at step u exactly when the shifted check at u fails.
cmon::Monitor build_c_monitor(const Requirement& req, const VariableDictionary& dict, const StepConfig& cfg);

/// C types used for dictionary variables.
struct CWidths {
  std::string bool_type = "unsigned char";
  int int_bits = 32;          // 8, 16, 32 or 64
  std::string float_type = "double";  // "double" or "float"
};

/// Prints a self-contained SV-COMP style translation unit. Throws ExportError
/// when a declared range or value does not fit the configured widths.
std::string print_c_harness(const cmon::Monitor& m, const CWidths& widths = {});

}  // namespace reqc
