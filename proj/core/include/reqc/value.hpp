#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace reqc {

enum class ScalarType { Bool, Int, Float };

std::string_view to_string(ScalarType t);
std::optional<ScalarType> scalar_type_from_string(std::string_view s);

/// A typed scalar. Integers are 64-bit internally; overflow is an error, never
/// a wraparound.
class Value {
 public:
  Value() : v_(false) {}
  static Value boolean(bool b) { return Value(b); }
  static Value integer(std::int64_t i) { return Value(i); }
  static Value real(double d) { return Value(d); }
  /// Default value of a type: false, 0 or 0.0.
  static Value zero(ScalarType t);

  ScalarType type() const;
  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(v_); }
  bool is_float() const { return std::holds_alternative<double>(v_); }
  bool is_numeric() const { return !is_bool(); }

  bool as_bool() const { return std::get<bool>(v_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(v_); }
  double as_float() const { return std::get<double>(v_); }
  /// Numeric value widened to double (bools map to 0/1).
  double to_double() const;

  /// Convert to `t`: int -> float widening, bool <-> 0/1. Float -> int only
  /// when the value is integral; otherwise nullopt.
  std::optional<Value> convert_to(ScalarType t) const;

  friend bool operator==(const Value& a, const Value& b) { return a.v_ == b.v_; }

 private:
  explicit Value(bool b) : v_(b) {}
  explicit Value(std::int64_t i) : v_(i) {}
  explicit Value(double d) : v_(d) {}

  std::variant<bool, std::int64_t, double> v_;
};

/// Shortest round-trip decimal in fixed notation, always with a '.'.
std::string format_float(double d);

/// `true`/`false`, integer digits, or format_float.
std::string to_string(const Value& v);

/// Bools as 0/1 (trace files).
std::string to_trace_string(const Value& v);

/// Parse a textual scalar as type `t`. Bools accept true/false (any case) and
/// 0/1; ints accept an optional sign and digits; floats accept anything
/// std::from_chars accepts in general format.
std::optional<Value> parse_value(std::string_view text, ScalarType t);

}  // namespace reqc
